"""Six-valley geometry and the two-band inter-valley coupling constants."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .units import SILICON, SiliconParams, convert

_AXES = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]

# Cardona-Pollak inter-valley overlaps at the band minima
CP_PERPENDICULAR = 0.3915
CP_OPPOSITE = -0.2171


@dataclass(frozen=True)
class Valley:
    index: int
    axis: np.ndarray  # unit vector e_l
    k: np.ndarray  # minimum wave vector, 1/nm
    masses: tuple[float, float, float]

    @property
    def axis_index(self) -> int:
        return int(np.flatnonzero(self.axis)[0])

    def __hash__(self):
        return hash(self.index)

    def __eq__(self, other):
        return isinstance(other, Valley) and other.index == self.index


def valley_set(params: SiliconParams = SILICON) -> list[Valley]:
    """Valleys 1..6 ordered (+x, -x, +y, -y, +z, -z)."""
    out = []
    for i, ax in enumerate(_AXES):
        e = np.array(ax, dtype=float)
        a = int(np.flatnonzero(e)[0])
        masses = [params.m_t] * 3
        masses[a] = params.m_l
        out.append(Valley(i + 1, e, params.k0 * e, tuple(masses)))
    return out


def valley(index: int, params: SiliconParams = SILICON) -> Valley:
    return valley_set(params)[index - 1]


@dataclass(frozen=True)
class BandModel:
    """Two-band (Gamma_2' / Gamma_15) parameters.

    ``T`` in eV nm and ``eps_g`` in eV.  The atomic-unit value of T is read
    as Ry*bohr by default; ``t_unit="Ha*bohr"`` gives the other reading.
    """

    T: float = convert(1.08, "Ry*bohr", "eV*nm")
    eps_g: float = convert(0.268, "Ry", "eV")

    @classmethod
    def from_atomic(cls, t_value=1.08, t_unit="Ry*bohr", eps_g=0.268, eps_g_unit="Ry"):
        return cls(convert(t_value, t_unit, "eV*nm"), convert(eps_g, eps_g_unit, "eV"))


DEFAULT_BAND = BandModel()


def lambda_K(K: float, band: BandModel = DEFAULT_BAND) -> float:
    """Mixing angle from tan(2 lambda) = 2 T K / eps_G, K in 1/nm."""
    if K < 0:
        raise ValueError("K must be non-negative")
    return 0.5 * math.atan(2.0 * band.T * K / band.eps_g)


def dlambda_dK(K: float, band: BandModel = DEFAULT_BAND) -> float:
    """Analytic derivative of :func:`lambda_K` (nm)."""
    if K < 0:
        raise ValueError("K must be non-negative")
    T, eg = band.T, band.eps_g
    return T * eg / (eg * eg + 4.0 * T * T * K * K)


def _check_pair(a: Valley, b: Valley):
    if a.index == b.index:
        raise ValueError(f"valley {a.index} coupled to itself; use the diagonal Hamiltonian")


def coupling_I(a: Valley, b: Valley, band: BandModel = DEFAULT_BAND) -> float:
    _check_pair(a, b)
    c = float(a.axis @ b.axis)
    K = float(np.linalg.norm(a.k))
    return 0.5 * (1 + c) - 0.5 * (1 - c) * math.cos(2 * lambda_K(K, band))


def coupling_I_cos(cos_angle: float, K: float, band: BandModel = DEFAULT_BAND) -> float:
    """Pair function for an arbitrary e_l . e_l' (used for the aligned limit)."""
    return 0.5 * (1 + cos_angle) - 0.5 * (1 - cos_angle) * math.cos(2 * lambda_K(K, band))


def coupling_J(a: Valley, b: Valley, band: BandModel = DEFAULT_BAND) -> tuple[np.ndarray, np.ndarray]:
    """Gradient couplings (J, J') in nm, along e_l and e_l' respectively."""
    _check_pair(a, b)
    c = float(a.axis @ b.axis)
    K = float(np.linalg.norm(a.k))
    mag = (1 - c) * dlambda_dK(K, band) * math.sin(2 * lambda_K(K, band))
    return mag * a.axis, mag * b.axis


def linear_model_constants() -> tuple[float, float]:
    """(alpha, beta) of I = alpha e_l.e_l' + beta fitted to Cardona-Pollak."""
    beta = CP_PERPENDICULAR
    alpha = beta - CP_OPPOSITE
    return alpha, beta


@dataclass(frozen=True)
class CouplingConstants:
    I: float
    J: np.ndarray
    J_prime: np.ndarray
    lam: float
    band: BandModel


def coupling_constants(a: Valley, b: Valley, band: BandModel = DEFAULT_BAND) -> CouplingConstants:
    J, Jp = coupling_J(a, b, band)
    return CouplingConstants(coupling_I(a, b, band), J, Jp,
                             lambda_K(float(np.linalg.norm(a.k)), band), band)
