import math

import numpy as np
import pytest

from thermoform import (
    GeneralisedPotential,
    InvalidInputError,
    MatrixSystem,
    ResourceLimitError,
    ScalarWeights,
    affinity_dimension,
    partition_sum,
    pressure,
    recode_system,
)


def test_partition_sum_examples(nottot):
    assert partition_sum(ScalarWeights([1.0, 1.0]), 3) == pytest.approx(math.log(8), abs=1e-14)
    assert partition_sum(GeneralisedPotential(nottot), 1) == pytest.approx(math.log(4))
    assert partition_sum(ScalarWeights([0.5, 0.5]), 7) == pytest.approx(0.0, abs=1e-14)


def test_trivial_pressure_exact():
    est = pressure(ScalarWeights([1.0, 1.0, 1.0]), 6)
    for v in (est.upper, est.lower, est.point):
        assert v == pytest.approx(math.log(3), abs=1e-12)


def test_bernoulli_pressure_zero():
    est = pressure(ScalarWeights([0.2, 0.3, 0.5]), 6)
    assert abs(est.point) < 1e-12 and abs(est.upper) < 1e-12


def test_nottot_bracket_nests(nottot):
    phi = GeneralisedPotential(nottot)
    runs = [pressure(phi, n) for n in (4, 6, 8, 10)]
    uppers = [r.upper for r in runs]
    assert uppers == sorted(uppers, reverse=True)
    for r in runs:
        assert r.lower is not None
        assert r.lower <= r.point <= r.upper + 1e-9
    assert runs[-1].upper == pytest.approx(runs[-1].upper_sequence[-1])


def test_records_shape(nottot):
    est = pressure(GeneralisedPotential(nottot), 5)
    rows = est.records()
    assert [r[0] for r in rows] == [1, 2, 3, 4, 5]
    assert all(r[2] == pytest.approx(r[1] / r[0]) for r in rows)


def test_scaling_covariance(rng):
    gens = rng.normal(size=(2, 2, 2))
    c = 3.7
    a = pressure(GeneralisedPotential(MatrixSystem.single(gens)), 6)
    b = pressure(GeneralisedPotential(MatrixSystem.single(c * gens)), 6)
    shift = math.log(c)
    np.testing.assert_allclose(np.array(b.log_sums) / np.arange(1, 7), np.array(a.log_sums) / np.arange(1, 7) + shift, atol=1e-9)
    assert b.upper == pytest.approx(a.upper + shift, abs=1e-9)


def test_recoding_identity(nottot):
    phi = GeneralisedPotential(nottot)
    psi = GeneralisedPotential(recode_system(nottot, 2))
    for q in (1, 2, 3, 4):
        a_rec = partition_sum(psi, q)
        assert a_rec / q == pytest.approx(2 * partition_sum(phi, 2 * q) / (2 * q), abs=1e-12)


def test_pressure_errors(nottot):
    with pytest.raises(InvalidInputError):
        pressure(ScalarWeights([1.0, 1.0]), 1)
    with pytest.raises(ResourceLimitError):
        pressure(GeneralisedPotential(nottot), 40)


def test_supplied_delta_certifies_lower():
    est = pressure(ScalarWeights([1.0, 2.0]), 5, delta=1.0)
    assert est.lower_certified
    assert est.lower == pytest.approx(math.log(3), abs=1e-12)


@pytest.mark.parametrize(
    "gens, expected",
    [
        ([0.5 * np.eye(2)] * 3, math.log(3) / math.log(2)),
        ([np.diag([0.5, 1 / 3])] * 2, 1.0),
        ([0.5 * np.eye(2)] * 4, 2.0),
    ],
)
def test_affinity_dimension_closed_forms(gens, expected):
    res = affinity_dimension(gens, n_max=10, tol=1e-6)
    assert abs(res.point - expected) <= 1e-6
    assert res.s_lo <= res.point <= res.s_hi
    assert res.s_hi - res.s_lo <= 1e-6 and not res.capped


def test_dimension_decreases_with_ratio():
    dims = [affinity_dimension([r * np.eye(2)] * 3, n_max=4).point for r in (0.5, 0.4, 0.3)]
    assert dims[0] > dims[1] > dims[2]


def test_dimension_rejects_expanding():
    with pytest.raises(InvalidInputError):
        affinity_dimension([np.eye(2), 0.5 * np.eye(2)])
