"""Physical constants, silicon parameters and unit conversion.

Internal units are eV for energy and nm for length; masses are in units of
the free-electron mass.  Everything else is converted at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Fixed constants (not pulled from scipy.constants so results never drift
# with a library upgrade).
RYDBERG_EV = 13.605693
HARTREE_EV = 2.0 * RYDBERG_EV
BOHR_NM = 0.0529177
HBAR_EVS = 6.582120e-16
KB_EV_PER_K = 8.617333e-5
HBAR2_2M0 = 0.0380998  # eV nm^2
MU_B_EV_PER_T = 5.7883818e-5
H_EVS = 2.0 * math.pi * HBAR_EVS
E_CHARGE_C = 1.602176634e-19
EPS0_F_PER_M = 8.8541878128e-12
# e^2 / (4 pi eps0) in eV nm
COULOMB_EV_NM = 1.439964548

# CGS helpers for the phonon formula
ERG_PER_EV = 1.602176634e-12
HBAR_ERGS = HBAR_EVS * ERG_PER_EV


class UnitError(ValueError):
    """Raised for unknown unit tags or conversions across dimensions."""


# unit tag -> (dimension, factor to internal unit)
_UNITS: dict[str, tuple[str, float]] = {
    "eV": ("energy", 1.0),
    "meV": ("energy", 1e-3),
    "ueV": ("energy", 1e-6),
    "Ry": ("energy", RYDBERG_EV),
    "Ha": ("energy", HARTREE_EV),
    "K_energy": ("energy", KB_EV_PER_K),
    "nm": ("length", 1.0),
    "m": ("length", 1e9),
    "cm": ("length", 1e7),
    "A": ("length", 0.1),
    "bohr": ("length", BOHR_NM),
    "eV/nm": ("field", 1.0),
    "V/nm": ("field", 1.0),
    "kV/cm": ("field", 1e-4),
    "V/m": ("field", 1e-9),
    "MV/cm": ("field", 0.1),
    "K": ("temperature", 1.0),
    "mK": ("temperature", 1e-3),
    "s": ("time", 1.0),
    "ms": ("time", 1e-3),
    "us": ("time", 1e-6),
    "ns": ("time", 1e-9),
    "ps": ("time", 1e-12),
    "Hz": ("frequency", 1.0),
    "MHz": ("frequency", 1e6),
    "GHz": ("frequency", 1e9),
    "T": ("magnetic", 1.0),
    "mT": ("magnetic", 1e-3),
    "1/nm": ("wavenumber", 1.0),
    "1/bohr": ("wavenumber", 1.0 / BOHR_NM),
    "Ry*bohr": ("energy_length", RYDBERG_EV * BOHR_NM),
    "Ha*bohr": ("energy_length", HARTREE_EV * BOHR_NM),
    "eV*nm": ("energy_length", 1.0),
}

ALIASES = {"μeV": "ueV", "µeV": "ueV", "μs": "us", "µs": "us", "Tesla": "T",
           "Å": "A", "tesla": "T", "a.u.": "bohr"}


def dimension(unit: str) -> str:
    """Return the physical dimension of a unit tag."""
    return _lookup(unit)[0]


def _lookup(unit: str) -> tuple[str, float]:
    unit = ALIASES.get(unit, unit)
    try:
        return _UNITS[unit]
    except KeyError:
        raise UnitError(f"unknown unit {unit!r}") from None


def convert(value: float, from_unit: str, to_unit: str) -> float:
    """Convert ``value`` between two units of the same dimension.

    >>> round(convert(1.0, "Ry", "eV"), 6)
    13.605693
    """
    dim_a, fa = _lookup(from_unit)
    dim_b, fb = _lookup(to_unit)
    if dim_a != dim_b:
        raise UnitError(f"cannot convert {dim_a} ({from_unit}) to {dim_b} ({to_unit})")
    if fa == fb:
        return value
    return value * fa / fb


def units_of(dim: str) -> list[str]:
    return [u for u, (d, _) in _UNITS.items() if d == dim]


@dataclass(frozen=True)
class SiliconParams:
    """Bulk silicon material parameters.

    Masses in m0, density g/cm^3, sound velocity cm/s, energies eV.
    """

    lattice_nm: float = 0.543
    m_l: float = 0.916
    m_t: float = 0.190
    density_g_cm3: float = 2.33
    sound_velocity_cm_s: float = 9.01e5
    deformation_potential_eV: float = 4.7
    eps_r: float = 11.7
    barrier_eV: float = 3.1
    valley_fraction: float = 0.85

    def __post_init__(self):
        if not (self.m_l > self.m_t > 0):
            raise ValueError("need m_l > m_t > 0")
        if self.lattice_nm <= 0 or self.density_g_cm3 <= 0 or self.sound_velocity_cm_s <= 0:
            raise ValueError("material parameters must be positive")

    @property
    def k0(self) -> float:
        """Valley-minimum wavenumber in 1/nm."""
        return self.valley_fraction * 2.0 * math.pi / self.lattice_nm


SILICON = SiliconParams()


def field_energy_per_nm(field_kv_cm: float) -> float:
    """e*F in eV/nm for a field given in kV/cm."""
    return field_kv_cm * 1e-4
