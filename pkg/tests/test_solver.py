import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sivalley.dot import DotSpec, make_basis
from sivalley.solver import (EigensolverError, ValleyOrderError, assemble, cross_axis_coupling, eigensolve,
                             fix_phases, match_levels, pair_problem, splitting_and_coupling, sweep_field,
                             track_anticrossing)

SMALL = (4, 4, 6)


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


def test_eigensolve_against_shift_and_square():
    # the lowest eigenvalues of H are the smallest roots recovered from (H - s)^2
    rng = np.random.default_rng(4)
    h = random_hermitian(rng, 40)
    ep = eigensolve(h, 5)
    s = ep.values[0] - 1.0
    sq = np.linalg.eigvalsh((h - s * np.eye(40)) @ (h - s * np.eye(40)))
    np.testing.assert_allclose(np.sort(np.sqrt(sq))[:5] + s, ep.values, atol=1e-10)
    assert np.all(ep.residuals < 1e-12)


def test_eigensolve_rejects_bad_k():
    with pytest.raises(ValueError):
        eigensolve(np.eye(3), 4)


def test_eigensolve_non_finite():
    h = np.eye(4)
    h[0, 0] = np.nan
    with pytest.raises(EigensolverError):
        eigensolve(h, 2)


def test_fix_phases():
    rng = np.random.default_rng(1)
    v = np.linalg.qr(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))[0]
    f = fix_phases(v * np.exp(1j * rng.uniform(0, 6, 6)))
    piv = f[np.argmax(np.abs(f), axis=0), range(6)]
    assert np.allclose(piv.imag, 0) and np.all(piv.real > 0)


@settings(max_examples=30, deadline=None)
@given(st.permutations(list(range(8))), st.integers(0, 2**31 - 1))
def test_match_levels_recovers_permutation(perm, seed):
    rng = np.random.default_rng(seed)
    q = np.linalg.qr(rng.normal(size=(20, 8)))[0]
    cur = q[:, perm]
    got, amb = match_levels(q, cur)
    assert not amb
    np.testing.assert_array_equal(cur[:, got], q)


def test_match_levels_flags_ties():
    prev = np.eye(2)
    cur = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    perm, amb = match_levels(prev, cur, np.array([0.0, 1.0]), np.array([0.1, 0.9]))
    assert amb
    assert list(perm) == [0, 1]


def test_synthetic_anticrossing_exact():
    g = 0.05

    def solver(f):
        return np.linalg.eigh(np.array([[f, g], [g, -f]]))

    r = track_anticrossing(solver, 0, 1, (-1.0, 1.0), n_coarse=21, xtol=1e-3, refine_tol=1e-7)
    assert r.is_anticrossing
    # the gap near the minimum is 2 sqrt(g^2 + F^2), so bracket error enters squared
    assert r.gap == pytest.approx(2 * g, rel=1e-10)
    assert r.field_kv_cm == pytest.approx(0.0, abs=1e-3)


def test_synthetic_true_crossing():
    def solver(f):
        return np.linalg.eigh(np.diag([f, -f]).astype(float))

    r = track_anticrossing(solver, 0, 1, (-1.0, 1.2), n_coarse=23, xtol=1e-3)
    assert not r.is_anticrossing
    assert r.gap < 1e-4


def test_monotone_levels_have_no_interior_minimum():
    def solver(f):
        return np.linalg.eigh(np.diag([0.0, 1.0 + f]))

    r = track_anticrossing(solver, 0, 1, (0.0, 1.0), n_coarse=5)
    assert r.field_kv_cm is None and not r.is_anticrossing


def test_assembled_hamiltonian_hermitian():
    for mode in ("hard-wall", "finite-barrier"):
        h = assemble((5, 6), DotSpec(barrier_mode=mode, field_kv_cm=300, b_tesla=2.0), basis=make_basis(DotSpec(barrier_mode=mode), (3, 3, 4)))
        assert h.hermiticity_residual < 1e-14


def test_field_only_coupling_small_basis():
    spec = DotSpec()
    r0 = splitting_and_coupling(spec, SMALL)
    assert r0.delta <= 1e-10
    prev = 0.0
    for f in (100.0, 250.0, 400.0):
        r = splitting_and_coupling(spec.with_field(f), SMALL)
        assert r.delta >= prev
        assert r.eps / r.delta == pytest.approx(2.0, rel=1e-3)
        prev = r.delta


def test_valley_order_guard():
    # a dot longer along z than along x puts the x valleys lowest
    with pytest.raises(ValleyOrderError):
        splitting_and_coupling(DotSpec(dims=(8.0, 12.0, 20.0)), (3, 3, 3))


def test_pair_problem_rejects_perpendicular():
    with pytest.raises(ValueError):
        pair_problem((1, 5), DotSpec(), (2, 2, 2))


def test_sweep_labels_and_parities():
    sp = sweep_field(DotSpec(b_tesla=1.5), [0.0, 50.0, 100.0], levels=3, n_modes=SMALL)
    assert sp.ids == ["E0S", "E0A", "E1S", "E1A", "E2S", "E2A"]
    assert all(p == lid[-1] for row in sp.parity for p, lid in zip(row, sp.ids))
    assert np.all(sp.residuals < 1e-10)
    assert "V1E0" in sp.extra and "V3E0" in sp.extra
    with pytest.raises(ValueError):
        sweep_field(DotSpec(), [0.0], n_modes=SMALL)


def test_cross_axis_small():
    r = cross_axis_coupling(DotSpec(field_kv_cm=400.0), SMALL)
    assert 0 < r.ratio < 1e-3
