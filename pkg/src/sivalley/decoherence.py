"""LA-phonon upper-bound scattering rate and the resulting decoherence time.

The rate is

    W = 4 pi^2 dE^3 E_ac^2 / (rho hbar^4 c_l^5) * exp(-dE / k_B T)

evaluated twice, once in CGS and once in (eV, nm, s), as a permanent
guard against unit slips.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .units import ERG_PER_EV, HBAR_ERGS, HBAR_EVS, KB_EV_PER_K, SILICON

# 1 g expressed in eV s^2 / nm^2
_GRAM_EV_S2_NM2 = 1e-3 / 1.602176634e-19 / 1e18


@dataclass(frozen=True)
class PhononModel:
    density_g_cm3: float = SILICON.density_g_cm3
    sound_velocity_cm_s: float = SILICON.sound_velocity_cm_s
    deformation_potential_eV: float = SILICON.deformation_potential_eV

    def __post_init__(self):
        if min(self.density_g_cm3, self.sound_velocity_cm_s, self.deformation_potential_eV) <= 0:
            raise ValueError("material constants must be positive")


SI_PHONONS = PhononModel()


def _check(dE: float, T: float):
    if T <= 0:
        raise ValueError(f"temperature must be positive, got {T}")
    if dE < 0:
        raise ValueError("energy fluctuation must be non-negative")


def phonon_rate(dE: float, T: float, model: PhononModel = SI_PHONONS) -> float:
    """Upper-bound LA-phonon rate (1/s); ``dE`` in eV, ``T`` in K. CGS path."""
    _check(dE, T)
    d = dE * ERG_PER_EV
    eac = model.deformation_potential_eV * ERG_PER_EV
    pref = 4 * math.pi**2 * d**3 * eac**2 / (
        model.density_g_cm3 * HBAR_ERGS**4 * model.sound_velocity_cm_s**5)
    return pref * math.exp(-dE / (KB_EV_PER_K * T))


def phonon_rate_internal(dE: float, T: float, model: PhononModel = SI_PHONONS) -> float:
    """Same rate computed in eV, nm and s."""
    _check(dE, T)
    rho = model.density_g_cm3 * _GRAM_EV_S2_NM2 / 1e21  # per cm^3 -> per nm^3
    c = model.sound_velocity_cm_s * 1e7
    pref = 4 * math.pi**2 * dE**3 * model.deformation_potential_eV**2 / (rho * HBAR_EVS**4 * c**5)
    return pref * math.exp(-dE / (KB_EV_PER_K * T))


def decoherence_time(dE: float, T: float, model: PhononModel = SI_PHONONS) -> float:
    """1 / rate in seconds; ``math.inf`` when the rate vanishes (dE = 0)."""
    w = phonon_rate(dE, T, model)
    return math.inf if w == 0.0 else 1.0 / w


@dataclass(frozen=True)
class PhononRow:
    deltaE_ueV: float
    T_K: float
    rate_per_s: float
    tau_s: float


def fig7_tables(dE_grid_ueV, T_grid_K, model: PhononModel = SI_PHONONS) -> list[PhononRow]:
    """Rates and times on the (dE, T) product grid, dE-major order."""
    dE_grid_ueV, T_grid_K = list(dE_grid_ueV), list(T_grid_K)
    if not dE_grid_ueV or not T_grid_K:
        raise ValueError("grids must be non-empty")
    rows = []
    for de in dE_grid_ueV:
        for T in T_grid_K:
            w = phonon_rate(de * 1e-6, T, model)
            rows.append(PhononRow(float(de), float(T), w, math.inf if w == 0 else 1.0 / w))
    return rows


def _self_test():
    a = phonon_rate(50e-6, 0.1)
    b = phonon_rate_internal(50e-6, 0.1)
    if abs(a - b) > 1e-10 * a:
        raise RuntimeError(f"phonon unit paths disagree: {a} vs {b}")


_self_test()
