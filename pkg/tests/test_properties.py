import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from thermoform import GeneralisedPotential, MatrixSystem, ScalarWeights, Subspace, pressure
from thermoform import multilinear as ml
from thermoform import potentials as P
from thermoform import symbolic as S
from thermoform.classes import canonical_basis

entries = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def well_conditioned(d):
    return arrays(np.float64, (d, d), elements=entries).filter(
        lambda A: np.linalg.svd(A, compute_uv=False)[-1] > 1e-2
    )


@st.composite
def words(draw, N=None, max_len=8):
    N = draw(st.integers(2, 4)) if N is None else N
    symbols = draw(st.lists(st.integers(1, N), min_size=1, max_size=max_len))
    return S.Word(tuple(symbols), N)


@given(words())
def test_lex_round_trip(w):
    assert S.lex_inverse(S.lex_index(w), w.alphabet_size, len(w)) == w


@given(words(N=2, max_len=4), st.integers(1, 3))
def test_recode_decode_round_trip(block, n):
    w = S.power(block, n)
    k = len(block)
    r = S.recode_word(w, k)
    assert len(r) == n and S.decode_word(r, 2, k) == w


@given(words(N=3), words(N=3))
def test_lex_order_is_order_of_indices(a, b):
    if len(a) == len(b):
        assert (a.symbols < b.symbols) == (S.lex_index(a) < S.lex_index(b))


@given(st.integers(2, 4).flatmap(well_conditioned), st.data())
def test_exterior_norm_is_sv_product(A, data):
    d = A.shape[0]
    k = data.draw(st.integers(1, d))
    sv = ml.singular_values(A)
    E = ml.exterior_power(A, k)
    assert math.isclose(ml.operator_norm(E), float(np.prod(sv[:k])), rel_tol=1e-9)


@given(well_conditioned(3), well_conditioned(3), st.integers(1, 3))
def test_exterior_power_multiplicative(A, B, k):
    lhs = ml.exterior_power(A @ B, k)
    rhs = ml.exterior_power(A, k) @ ml.exterior_power(B, k)
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9 * np.abs(rhs).max())


@given(arrays(np.float64, (3, 2), elements=entries).filter(lambda B: np.linalg.svd(B, compute_uv=False)[-1] > 1e-3))
def test_canonical_basis_idempotent(B):
    C = canonical_basis(B)
    assert np.allclose(C.T @ C, np.eye(2), atol=1e-10)
    assert np.array_equal(canonical_basis(C), C)
    assert Subspace(B).same_as(Subspace(C))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.05, 5), min_size=2, max_size=3), st.integers(2, 6))
def test_scalar_pressure_exact(weights, n):
    est = pressure(ScalarWeights(weights), n)
    assert math.isclose(est.point, math.log(sum(weights)), abs_tol=1e-12)
    assert est.lower <= est.point <= est.upper + 1e-12


@settings(max_examples=25, deadline=None)
@given(st.lists(well_conditioned(2), min_size=2, max_size=2), st.floats(0.2, 2.0))
def test_random_bracket_sanity(gens, beta):
    est = pressure(GeneralisedPotential(MatrixSystem.single(gens, beta)), 6, m=1, L=2)
    assert list(est.upper_sequence) == sorted(est.upper_sequence, reverse=True)
    if est.lower is not None:
        assert est.lower <= est.point <= est.upper


@settings(max_examples=25, deadline=None)
@given(st.lists(well_conditioned(2), min_size=2, max_size=2), words(N=2, max_len=5), words(N=2, max_len=5))
def test_potential_submultiplicative(gens, a, b):
    phi = GeneralisedPotential(MatrixSystem.single(gens))
    assert phi.log_evaluate(a + b) <= phi.log_evaluate(a) + phi.log_evaluate(b) + 1e-9


@settings(max_examples=50, deadline=None)
@given(well_conditioned(3), st.sampled_from([0.3, 1.0, 1.5, 1.9, 2.4]))
def test_sv_formulas_agree(A, s):
    w = S.Word((1,), 2)
    a = P.log_evaluate_sv([A, A], s, w)
    b = P.log_evaluate_sv_exterior([A, A], s, w)
    assert math.isclose(a, b, abs_tol=1e-9)
