"""Reduced two-level valley qubit: Hamiltonian, Rabi dynamics, pulses, tunneling."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .units import H_EVS, HBAR_EVS

PRINTED = "printed"
DETUNING = "detuning"


@dataclass(frozen=True)
class QubitModel:
    """Two-level model with energies in eV.

    ``variant="printed"`` uses [[eps, delta], [delta, eps]];
    ``variant="detuning"`` uses [[eps/2, delta], [delta, -eps/2]].
    """

    eps: float
    delta: float
    variant: str = PRINTED

    def __post_init__(self):
        if self.variant not in (PRINTED, DETUNING):
            raise ValueError(f"unknown qubit variant {self.variant!r}")
        if not (math.isfinite(self.eps) and math.isfinite(self.delta)):
            raise ValueError("eps and delta must be finite")

    @property
    def omega(self) -> float:
        """Angular frequency sqrt(eps^2 + delta^2) / hbar in rad/s."""
        return math.hypot(self.eps, self.delta) / HBAR_EVS

    @property
    def hamiltonian(self) -> np.ndarray:
        return effective_hamiltonian(self.eps, self.delta, self.variant)


def effective_hamiltonian(eps: float, delta: float, variant: str = PRINTED) -> np.ndarray:
    if variant == PRINTED:
        return np.array([[eps, delta], [delta, eps]], dtype=float)
    if variant == DETUNING:
        return np.array([[0.5 * eps, delta], [delta, -0.5 * eps]], dtype=float)
    raise ValueError(f"unknown qubit variant {variant!r}")


def rabi_frequency(eps: float, delta: float) -> float:
    """Cyclic frequency sqrt(eps^2 + delta^2) / h in GHz."""
    return math.hypot(eps, delta) / H_EVS / 1e9


def _propagator(h: np.ndarray, t: float) -> np.ndarray:
    # h = a*1 + bx*sx + bz*sz (real symmetric 2x2)
    a = 0.5 * (h[0, 0] + h[1, 1])
    bz = 0.5 * (h[0, 0] - h[1, 1])
    bx = h[0, 1]
    b = math.hypot(bx, bz)
    phi = b * t / HBAR_EVS
    u = math.cos(phi) * np.eye(2, dtype=complex)
    if b > 0:
        sig = np.array([[bz, bx], [bx, -bz]]) / b
        u = u - 1j * math.sin(phi) * sig
    return np.exp(-1j * a * t / HBAR_EVS) * u


def evolve(state, model: QubitModel, t: float) -> np.ndarray:
    """Apply exp(-i H t / hbar) to a two-component state, ``t`` in seconds."""
    psi = np.asarray(state, dtype=complex)
    n = np.linalg.norm(psi)
    if not np.isclose(n, 1.0, atol=1e-9):
        raise ValueError(f"state must be normalised (norm {n})")
    return _propagator(model.hamiltonian, t) @ psi


def rabi_trace(model: QubitModel, times, state=(1.0, 0.0)) -> tuple[np.ndarray, np.ndarray]:
    """Populations of the two basis states along ``times`` (seconds)."""
    psi0 = np.asarray(state, dtype=complex)
    out = np.array([np.abs(evolve(psi0, model, t)) ** 2 for t in np.asarray(times, dtype=float)])
    return out[:, 0], out[:, 1]


def population_period(model: QubitModel) -> float:
    """Period (s) of the basis-population oscillation."""
    h = model.hamiltonian
    b = math.hypot(h[0, 1], 0.5 * (h[0, 0] - h[1, 1]))
    if b == 0:
        return math.inf
    return math.pi * HBAR_EVS / b


@dataclass
class ProtocolReport:
    rise_time: float
    hbar_over_delta_low: float
    hbar_over_delta_high: float
    rise_shorter_than_low: bool
    rise_longer_than_high: bool
    hold_time: float
    p0: float
    p1: float

    @property
    def valid(self) -> bool:
        return self.rise_shorter_than_low and self.rise_longer_than_high


def pulse_protocol(low: tuple[float, float], high: tuple[float, float], hold_time: float,
                   rise_time: float, variant: str = PRINTED) -> ProtocolReport:
    """Check the two-field pulse timing and evolve at the high field.

    ``low`` and ``high`` are ``(eps, delta)`` in eV at the idle and the
    operating field.  The rise must be quicker than hbar/delta at the idle
    point (state frozen) and slower than hbar/delta at the operating point.
    """
    eps_lo, d_lo = low
    eps_hi, d_hi = high
    if d_hi == 0:
        raise ValueError("no inter-valley coupling at the operating field; no gate possible")
    t_lo = math.inf if d_lo == 0 else HBAR_EVS / abs(d_lo)
    t_hi = HBAR_EVS / abs(d_hi)
    p = np.abs(evolve((1.0, 0.0), QubitModel(eps_hi, d_hi, variant), hold_time)) ** 2
    return ProtocolReport(rise_time, t_lo, t_hi, rise_time < t_lo, rise_time > t_hi,
                          hold_time, float(p[0]), float(p[1]))


# -- parity-selective tunneling ------------------------------------------

_SPINOR_SIGN = {"S": 1, "A": -1}


@dataclass(frozen=True)
class PseudoSpinState:
    parity: str

    def __post_init__(self):
        if self.parity not in _SPINOR_SIGN:
            raise ValueError("parity must be 'S' or 'A'")

    @property
    def spinor(self) -> np.ndarray:
        return np.array([1.0, _SPINOR_SIGN[self.parity]]) / math.sqrt(2.0)


SYMMETRIC = PseudoSpinState("S")
ANTISYMMETRIC = PseudoSpinState("A")


@dataclass(frozen=True)
class TunnelingModel:
    t0: float = 1.0
    overlap: float = 1.0


def parity_factor(a: PseudoSpinState, b: PseudoSpinState) -> int:
    """chi_a^dagger chi_b, computed on the integer spinors so it is exact."""
    return (1 + _SPINOR_SIGN[a.parity] * _SPINOR_SIGN[b.parity]) // 2


def tunneling_amplitude(a: PseudoSpinState, b: PseudoSpinState, model: TunnelingModel) -> float:
    return model.t0 * model.overlap * parity_factor(a, b)


def operation_budget(delta: float, tau_dec: float) -> int:
    """Number of hbar/delta operations that fit in ``tau_dec`` seconds."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    if tau_dec < 0:
        raise ValueError("decoherence time must be non-negative")
    if math.isinf(tau_dec):
        raise ValueError("infinite decoherence time gives an unbounded budget")
    return int(math.floor(tau_dec * delta / HBAR_EVS))
