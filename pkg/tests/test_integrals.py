import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from quadrature import gauss_legendre, mode

from sivalley.integrals import SineModes, derivative_matrix, exp_moment, point_matrix, product_matrix


@pytest.mark.parametrize("p", [0, 1, 2, 3])
@pytest.mark.parametrize("s", [0.0, 1e-7, 0.3, 2.0, 19.67])
def test_exp_moment(p, s):
    c, d = -1.3, 4.2
    ref = gauss_legendre(lambda z: z**p * np.exp(1j * s * z), c, d, s)
    assert exp_moment(np.array([s]), c, d, p)[0] == pytest.approx(ref, rel=1e-12, abs=1e-12)


def test_exp_moment_bad_power():
    with pytest.raises(ValueError):
        exp_moment(1.0, 0, 1, 4)


def test_orthonormal():
    m = SineModes(-3.0, 6.0, 12)
    np.testing.assert_allclose(product_matrix(m), np.eye(12), atol=1e-13)


def test_derivative_antisymmetric():
    m = SineModes(0.0, 8.0, 10)
    d = derivative_matrix(m).real
    np.testing.assert_allclose(d, -d.T, atol=1e-13)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.integers(1, 9), st.integers(0, 2),
       st.floats(-20.0, 20.0), st.booleans(), st.floats(0.0, 0.4), st.floats(0.6, 1.0))
def test_matrix_elements_against_quadrature(m, n, p, kappa, deriv, f_lo, f_hi):
    a, L = -2.5, 7.0
    modes = SineModes(a, L, 9)
    lo, hi = a + f_lo * L, a + f_hi * L
    fm, fn = mode(a, L, m), mode(a, L, n, deriv)
    ref = gauss_legendre(lambda z: fm(z) * z**p * np.exp(1j * kappa * z) * fn(z), lo, hi, kappa)
    fn_mat = derivative_matrix if deriv else product_matrix
    got = fn_mat(modes, kappa, p, lo, hi)[m - 1, n - 1]
    assert abs(got - ref) <= 1e-10 * max(1.0, abs(ref))


def test_point_matrix():
    m = SineModes(0.0, 4.0, 3)
    pm = point_matrix(m, 1.0, 2.0)
    v = m.values(1.0)
    np.testing.assert_allclose(pm, np.exp(2j) * np.outer(v, v))
