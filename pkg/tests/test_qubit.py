import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from sivalley.qubit import (ANTISYMMETRIC, SYMMETRIC, PseudoSpinState, QubitModel, TunnelingModel,
                            effective_hamiltonian, evolve, operation_budget, population_period, pulse_protocol,
                            rabi_frequency, rabi_trace, tunneling_amplitude)
from sivalley.units import HBAR_EVS


def test_rabi_frequency_oracle():
    assert rabi_frequency(63.5e-6, 31.6e-6) == pytest.approx(17.15, abs=0.005)


def test_hamiltonian_variants():
    np.testing.assert_array_equal(effective_hamiltonian(2.0, 1.0), [[2, 1], [1, 2]])
    np.testing.assert_array_equal(effective_hamiltonian(2.0, 1.0, "detuning"), [[1, 1], [1, -1]])
    with pytest.raises(ValueError):
        effective_hamiltonian(1.0, 1.0, "other")


@settings(max_examples=40, deadline=None)
@given(st.floats(-1e-4, 1e-4), st.floats(0, 1e-4), st.floats(0, 1e-9), st.sampled_from(["printed", "detuning"]))
def test_evolve_matches_expm(eps, delta, t, variant):
    m = QubitModel(eps, delta, variant)
    psi = np.array([0.6, 0.8j])
    ref = expm(-1j * m.hamiltonian * t / HBAR_EVS) @ psi
    got = evolve(psi, m, t)
    np.testing.assert_allclose(got, ref, atol=1e-9)
    assert np.linalg.norm(got) == pytest.approx(1.0, abs=1e-12)


def test_symmetric_state_is_stationary():
    m = QubitModel(63.5e-6, 31.6e-6)
    s = np.array([1, 1]) / math.sqrt(2)
    out = evolve(s, m, 3.7e-10)
    assert abs(np.vdot(s, out)) == pytest.approx(1.0, abs=1e-12)


def test_evolve_rejects_unnormalised():
    with pytest.raises(ValueError):
        evolve([1.0, 1.0], QubitModel(0, 1e-6), 1e-9)


def test_half_period_full_transfer():
    m = QubitModel(0.0, 31.6e-6)
    p0, p1 = rabi_trace(m, [0.0, 0.5 * population_period(m)])
    assert p1[-1] == pytest.approx(1.0, abs=1e-10)
    assert p0[0] == 1.0


def test_pulse_protocol_timescale():
    r = pulse_protocol((10e-6, 1e-7), (0.0, 31.6e-6), 0.0, 50e-12)
    assert r.hbar_over_delta_high == pytest.approx(20.8e-12, rel=2e-3)
    assert r.valid
    assert not pulse_protocol((10e-6, 1e-7), (0.0, 31.6e-6), 0.0, 5e-12).valid
    with pytest.raises(ValueError):
        pulse_protocol((0.0, 1e-7), (0.0, 0.0), 1e-9, 1e-12)


def test_parity_selection_exact():
    t = TunnelingModel(t0=0.7, overlap=0.3)
    assert tunneling_amplitude(SYMMETRIC, ANTISYMMETRIC, t) == 0.0
    assert tunneling_amplitude(ANTISYMMETRIC, SYMMETRIC, t) == 0.0
    assert tunneling_amplitude(SYMMETRIC, SYMMETRIC, t) == pytest.approx(0.21)
    assert tunneling_amplitude(ANTISYMMETRIC, ANTISYMMETRIC, t) == pytest.approx(0.21)
    # float spinors only agree to rounding (BLAS may fuse multiply-adds); the amplitude above is exact
    assert abs(np.dot(SYMMETRIC.spinor, ANTISYMMETRIC.spinor)) < 1e-16
    with pytest.raises(ValueError):
        PseudoSpinState("X")


def test_operation_budget():
    assert operation_budget(31.6e-6, 0.5e-6) == pytest.approx(2.4e4, rel=0.01)
    assert operation_budget(31.6e-6, 0.0) == 0
    with pytest.raises(ValueError):
        operation_budget(0.0, 1e-6)
