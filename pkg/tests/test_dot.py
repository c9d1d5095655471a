import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sivalley.dot import (DotMatrices, DotSpec, make_basis, oscillatory_kernel, potential_matrix,
                          total_potential)
from sivalley.units import HBAR2_2M0
from sivalley.valley import valley


def box_energy(masses, dims, n=(1, 1, 1)):
    return sum(HBAR2_2M0 * (ni * np.pi / L) ** 2 / m for ni, L, m in zip(n, dims, masses))


def test_box_energies_hard_wall():
    spec = DotSpec()
    basis = make_basis(spec, (4, 4, 6))
    mats = DotMatrices(spec, basis)
    for idx, expect_meV in ((5, 56.07), (1, 75.13)):
        v = valley(idx)
        e = np.linalg.eigvalsh(mats.single_valley(v))[0]
        assert e == pytest.approx(box_energy(v.masses, spec.dims), rel=1e-12)
        assert e * 1e3 == pytest.approx(expect_meV, abs=0.01)


def test_spec_validation():
    with pytest.raises(ValueError):
        DotSpec(dims=(1.0, 2.0))
    with pytest.raises(ValueError):
        DotSpec(barrier_mode="soft")
    with pytest.raises(ValueError):
        DotSpec(b_tesla=-1.0)
    assert DotSpec(padding=3.0).padding == 0.0  # hard wall has no padding


def test_total_potential():
    spec = DotSpec(barrier_mode="finite-barrier", field_kv_cm=100.0)
    assert total_potential((0.0, 0.0, 1.0), spec) == pytest.approx(1e-2 * 1.0)
    assert total_potential((0.0, 0.0, 4.0), spec) == pytest.approx(3.1 + 1e-2 * 4.0)
    with pytest.raises(ValueError):
        total_potential((0.0, 0.0, 100.0), spec)


@pytest.mark.parametrize("gauge", ["printed", "textbook"])
def test_hermitian_blocks(gauge):
    spec = DotSpec(barrier_mode="finite-barrier", b_tesla=3.0, field_kv_cm=200.0, magnetic_gauge=gauge)
    mats = DotMatrices(spec, make_basis(spec, (3, 4, 5)))
    for idx in (1, 3, 5):
        h = mats.single_valley(valley(idx))
        assert np.abs(h - h.conj().T).max() < 1e-14
    p = potential_matrix(spec, mats.basis)
    assert np.abs(p - p.T).max() < 1e-14


def test_field_linearity():
    spec = DotSpec(barrier_mode="finite-barrier")
    basis = make_basis(spec, (3, 3, 5))
    v0 = potential_matrix(spec, basis)
    v1 = potential_matrix(spec.with_field(250.0), basis)
    v2 = potential_matrix(spec.with_field(500.0), basis)
    np.testing.assert_allclose(v2 - v0, 2 * (v1 - v0), atol=1e-14)


def test_pair_momentum_check():
    spec = DotSpec()
    basis = make_basis(spec, (2, 2, 3))
    k0 = spec.material.k0
    oscillatory_kernel((0, 0, 2 * k0), spec, basis)
    oscillatory_kernel((k0, 0, -k0), spec, basis)
    with pytest.raises(ValueError):
        oscillatory_kernel((0, 0, 1.3 * k0), spec, basis)


@settings(max_examples=8, deadline=None)
@given(st.sampled_from(["hard-wall", "finite-barrier"]), st.floats(0.0, 500.0), st.sampled_from([0, 1, 2]))
def test_gradient_kernels_integrate_by_parts(mode, field, axis):
    # <m|d(fV)|n> = -(<m|fV d|n> + <n|fV d|m>) since the basis vanishes on the outer walls
    spec = DotSpec(barrier_mode=mode, field_kv_cm=field)
    basis = make_basis(spec, (3, 3, 4))
    k0 = spec.material.k0
    q = np.zeros(3)
    q[axis] = 2 * k0
    ker = DotMatrices(spec, basis).oscillatory(q, include_confinement=True)
    eF = spec.field_energy
    left = [a + eF * b for a, b in [ker.left(axis)]][0]
    right = [a + eF * b for a, b in [ker.right(axis)]][0]
    scale = max(np.abs(left).max(), 1e-12)
    assert np.abs(left + right + right.T).max() < 1e-9 * scale
