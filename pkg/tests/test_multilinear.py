import math

import numpy as np
import pytest

from thermoform import InvalidInputError
from thermoform import multilinear as ml

ROT = np.array([[np.cos(1.0), -np.sin(1.0)], [np.sin(1.0), np.cos(1.0)]])


def test_singular_values():
    np.testing.assert_allclose(ml.singular_values(np.diag([2.0, 1.0])), [2, 1])
    np.testing.assert_allclose(ml.singular_values(ROT), [1, 1])
    np.testing.assert_allclose(ml.singular_values([[0, 2], [1, 0]]), [2, 1])


def test_spectral_radius():
    assert ml.spectral_radius([[0, 2], [1, 0]]) == pytest.approx(math.sqrt(2))


def test_exterior_power_diagonal():
    E = ml.exterior_power(np.diag([2.0, 3.0, 5.0]), 2)
    np.testing.assert_allclose(E, np.diag([6.0, 10.0, 15.0]))
    assert ml.exterior_power(np.diag([2.0, 3.0]), 2).shape == (1, 1)
    with pytest.raises(InvalidInputError):
        ml.exterior_power(np.eye(2), 3)


def test_tensor_product_diagonal():
    T = ml.tensor_product([np.diag([2.0, 1.0]), np.diag([3.0, 1.0])])
    np.testing.assert_allclose(T, np.diag([6.0, 2.0, 3.0, 1.0]))


def test_proximality():
    rep = ml.is_proximal(np.diag([2.0, 1.0]))
    assert rep.proximal and rep.gap_ratio == pytest.approx(2.0)
    assert not ml.is_proximal(ROT).proximal
    assert not ml.is_proximal(np.diag([2.0, -2.0])).proximal


def test_leading_spaces():
    v, n = ml.leading_spaces(np.diag([2.0, 1.0]))
    assert abs(abs(v[0]) - 1) < 1e-12
    v, _ = ml.leading_spaces(np.diag([1.0, 3.0]))
    assert abs(abs(v[1]) - 1) < 1e-12
    A = np.array([[4.0, 0], [0, 1]]) @ np.array([[1, 0.1], [0, 1]])
    v, _ = ml.leading_spaces(A)
    assert math.acos(min(1.0, abs(v[0]) / np.linalg.norm(v))) < 0.05


def test_principal_angle_sine():
    e1 = np.array([[1.0], [0.0]])
    e2 = np.array([[0.0], [1.0]])
    assert ml.principal_angle_sine(e1, e1) == 0
    assert ml.principal_angle_sine(e1, e2) == pytest.approx(1.0)
    d = np.array([[1.0], [1.0]]) / math.sqrt(2)
    assert ml.principal_angle_sine(e1, d) == pytest.approx(math.sqrt(0.5))


def test_invertibility():
    assert ml.is_invertible(np.eye(3))
    assert not ml.is_invertible(np.zeros((2, 2)))
    with pytest.raises(InvalidInputError):
        ml.as_matrix(np.ones((2, 3)))
