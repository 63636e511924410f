import math

import numpy as np
import pytest

from thermoform import (
    CallablePotential,
    GeneralisedPotential,
    InvalidInputError,
    MatrixSystem,
    RestrictedPotential,
    ScalarWeights,
    SingularValuePotential,
    Subspace,
    orbit_of,
)
from thermoform import potentials as P
from thermoform.symbolic import Word


def W(text, N=2):
    return Word.parse(text, N)


@pytest.fixture(scope="module")
def w0(nottot):
    e1 = Subspace.axis(2, 1)
    return orbit_of((e1, e1), nottot)


def test_generalised_hand_values(nottot):
    phi = GeneralisedPotential(nottot)
    assert phi.log_evaluate(W("1")) == pytest.approx(math.log(2))
    assert phi.log_evaluate(W("11")) == pytest.approx(math.log(4))


def test_scalar_weights():
    half = ScalarWeights([0.5, 0.5])
    for w in ("1", "212", "11112"):
        assert half.log_evaluate(W(w)) == pytest.approx(len(w) * math.log(0.5))


def test_alphabet_mismatch(nottot):
    with pytest.raises(InvalidInputError):
        GeneralisedPotential(nottot).log_evaluate(W("13", 3))


def test_singular_value_function_examples():
    A = np.diag([0.5, 1 / 3])
    gens = [A, A]
    assert P.log_evaluate_sv(gens, 1.5, W("1")) == pytest.approx(math.log(0.5 * (1 / 3) ** 0.5), abs=1e-12)
    assert P.log_evaluate_sv(gens, 0.0, W("12")) == 0.0
    assert P.log_evaluate_sv(gens, 4.0, W("1")) == pytest.approx(2 * math.log(1 / 6))
    with pytest.raises(InvalidInputError):
        SingularValuePotential(gens, -0.1)


def test_integer_s_uses_floor_branch():
    rng = np.random.default_rng(3)
    gens = rng.normal(size=(2, 3, 3))
    for s in (1.0, 2.0):
        a = P.log_evaluate_sv(gens, s, W("121"))
        b = P.log_evaluate_sv(gens, s - 1e-12, W("121"))
        assert a == pytest.approx(b, abs=1e-9)


def test_product_order_left_to_right():
    A = np.array([[1.0, 5.0], [0.0, 1.0]])
    B = np.array([[1.0, 0.0], [0.0, 30.0]])
    phi = GeneralisedPotential(MatrixSystem.single([A, B]))
    direct = math.log(np.linalg.norm(A @ B, 2))
    assert phi.log_evaluate(W("12")) == pytest.approx(direct, abs=1e-12)
    assert abs(phi.log_evaluate(W("12")) - phi.log_evaluate(W("21"))) > 0.1


def test_restricted_examples(nottot, w0):
    assert len(w0) == 4
    assert P.log_evaluate_restricted(nottot, w0, W("1")) == pytest.approx(math.log(2))
    phi = GeneralisedPotential(nottot)
    full = orbit_of((Subspace.full(2), Subspace.full(2)), nottot)
    assert len(full) == 1
    for w in ("1", "12", "2211", "12121"):
        assert P.log_evaluate_restricted(nottot, full, W(w)) == pytest.approx(phi.log_evaluate(W(w)), abs=1e-12)


def test_restricted_below_full(nottot, w0):
    full = GeneralisedPotential(nottot).log_values(6)
    restricted = RestrictedPotential(nottot, w0).log_values(6)
    assert np.all(restricted <= full + 1e-9)


def test_submultiplicative_passes(nottot, w0):
    for p in (GeneralisedPotential(nottot), RestrictedPotential(nottot, w0)):
        rep = P.check_submultiplicative(p, 4)
        assert rep.exhaustive and rep.passed


def test_submultiplicative_detects_violation():
    bad = CallablePotential(2, lambda w: float(len(w)) ** 2, "superadditive")
    rep = P.check_submultiplicative(bad, 3)
    assert not rep.passed
    assert rep.max_excess == pytest.approx(18.0)


def test_sampled_fallback_flagged():
    from thermoform.symbolic import set_word_budget

    old = set_word_budget(8)
    try:
        rep = P.check_submultiplicative(ScalarWeights([1.0, 2.0]), 3, sample_count=50)
    finally:
        set_word_budget(old)
    assert not rep.exhaustive and rep.pairs_checked == 50 and rep.passed


def test_quasimultiplicativity(nottot, w0):
    for m in (0, 2):
        assert P.estimate_quasimultiplicativity(ScalarWeights([0.3, 0.7]), m, 2).log_delta == pytest.approx(0, abs=1e-12)
    assert P.estimate_quasimultiplicativity(GeneralisedPotential(nottot), 2, 3).delta > 0
    assert P.estimate_quasimultiplicativity(RestrictedPotential(nottot, w0), 2, 3).delta > 0


def test_quasimultiplicativity_monotone(nottot):
    phi = GeneralisedPotential(nottot)
    by_m = [P.estimate_quasimultiplicativity(phi, m, 2).log_delta for m in range(3)]
    by_L = [P.estimate_quasimultiplicativity(phi, 1, L).log_delta for L in (1, 2, 3)]
    assert by_m == sorted(by_m)
    assert by_L == sorted(by_L, reverse=True)


def test_simple_top_reduction():
    sys = MatrixSystem.single([np.diag([2.0, 2.0, 1.0])] * 2)
    red = P.simple_top_reduction(sys, 2)
    np.testing.assert_allclose(red.generators[0][0], np.diag([4.0, 2.0, 2.0]))
    assert red.betas == (0.5,)
    assert P.simple_top_reduction(sys, 1).allclose(sys)
    top = P.simple_top_reduction(sys, 3)
    assert top.dims == (1,) and top.betas[0] == pytest.approx(1 / 3)
    assert top.generators[0][0, 0, 0] == pytest.approx(4.0)
    with pytest.raises(InvalidInputError):
        P.simple_top_reduction(sys, 4)


def test_system_validation():
    with pytest.raises(InvalidInputError):
        MatrixSystem.single([np.eye(2), np.zeros((2, 2))])
    with pytest.raises(InvalidInputError):
        MatrixSystem.single([np.eye(2), np.eye(2)], beta=0.0)
    with pytest.raises(InvalidInputError):
        MatrixSystem.single([np.eye(2)])
