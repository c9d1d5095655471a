import math

import numpy as np
import pytest

from sivalley.units import BOHR_NM
from sivalley.valley import (CP_OPPOSITE, BandModel, coupling_I, coupling_I_cos, coupling_J, dlambda_dK,
                             lambda_K, linear_model_constants, valley, valley_set)

# frozen by hand from tan 2 lambda = 2 T K / eps_G, T = 1.08 Ry bohr, eps_G = 0.268 Ry
LAMBDA = 0.66839
COS2L = 0.23189
DLDK_BOHR = 0.21669
J_OPPOSITE_NM = 0.022309
I_PERP = 0.38406
J_PERP_NM = 0.011154


def test_valley_set_order():
    vs = valley_set()
    assert [v.index for v in vs] == [1, 2, 3, 4, 5, 6]
    np.testing.assert_allclose(vs[4].axis, [0, 0, 1])
    np.testing.assert_allclose(vs[5].axis, [0, 0, -1])
    assert vs[4].masses == pytest.approx((0.19, 0.19, 0.916))
    assert vs[0].masses == pytest.approx((0.916, 0.19, 0.19))
    assert np.linalg.norm(vs[2].k) == pytest.approx(9.8356, rel=1e-4)


def test_mixing_angle_oracle():
    K = valley(5).k[2]
    assert lambda_K(K) == pytest.approx(LAMBDA, abs=2e-5)
    assert math.cos(2 * lambda_K(K)) == pytest.approx(COS2L, abs=2e-5)
    assert dlambda_dK(K) / BOHR_NM == pytest.approx(DLDK_BOHR, abs=2e-5)


def test_dlambda_matches_finite_difference():
    K, h = 9.8, 1e-5
    fd = (lambda_K(K + h) - lambda_K(K - h)) / (2 * h)
    assert dlambda_dK(K) == pytest.approx(fd, rel=1e-8)


def test_couplings_opposite_pair():
    a, b = valley(5), valley(6)
    assert coupling_I(a, b) == pytest.approx(-COS2L, abs=2e-5)
    J, Jp = coupling_J(a, b)
    assert np.linalg.norm(J) == pytest.approx(J_OPPOSITE_NM, rel=1e-4)
    np.testing.assert_allclose(J / np.linalg.norm(J), [0, 0, 1])
    np.testing.assert_allclose(Jp / np.linalg.norm(Jp), [0, 0, -1])


def test_couplings_perpendicular_pair():
    a, b = valley(1), valley(5)
    assert coupling_I(a, b) == pytest.approx(I_PERP, abs=2e-5)
    assert np.linalg.norm(coupling_J(a, b)[0]) == pytest.approx(J_PERP_NM, rel=1e-4)


def test_symmetry_and_limits():
    for i in range(1, 7):
        for j in range(1, 7):
            if i != j:
                assert coupling_I(valley(i), valley(j)) == pytest.approx(coupling_I(valley(j), valley(i)))
    # aligned limit is exactly one
    assert coupling_I_cos(1.0, 9.8) == 1.0
    with pytest.raises(ValueError):
        coupling_I(valley(3), valley(3))
    with pytest.raises(ValueError):
        lambda_K(-1.0)


def test_hartree_reading_differs():
    band = BandModel.from_atomic(t_unit="Ha*bohr")
    assert coupling_I(valley(5), valley(6), band) == pytest.approx(-0.1184, abs=5e-4)


def test_linear_model():
    alpha, beta = linear_model_constants()
    assert -alpha + beta == pytest.approx(CP_OPPOSITE)
    assert (alpha, beta) == pytest.approx((0.6086, 0.3915))
