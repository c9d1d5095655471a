"""Two coupled valley qubits: Coulomb element, 4x4 dynamics and the SWAP pulse.

Basis order is |11>, |10>, |01>, |00>.  Gate algebra uses natural units
(energies times time dimensionless) with U = exp(+iHt) unless
``convention="physical"`` is requested.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .units import COULOMB_EV_NM, HBAR_EVS, SILICON

SQRT13 = math.sqrt(13.0)


@dataclass(frozen=True)
class TwoQubitModel:
    E11: float
    E10: float
    E01: float
    E00: float
    Ec: float
    special: tuple[float, float] | None = None  # (Delta, delta) when built by ``special_case``

    @classmethod
    def special_case(cls, Delta: float, delta: float) -> "TwoQubitModel":
        return cls(3 * Delta, Delta, Delta, -Delta, delta, (Delta, delta))

    def _special(self):
        if self.special is None:
            raise ValueError("closed-form frequencies only exist for the special case")
        return self.special

    @property
    def omega1(self) -> float:
        D, d = self._special()
        return math.sqrt(D * D + d * d)

    @property
    def omega2(self) -> float:
        D, d = self._special()
        return math.sqrt(D * D + 3 * d * d)

    @property
    def omega3(self) -> float:
        D, d = self._special()
        return math.sqrt(2 * d * D)


def hamiltonian4(model: TwoQubitModel) -> np.ndarray:
    h = np.diag([model.E11, model.E10, model.E01, model.E00]).astype(float)
    h[1, 2] = h[2, 1] = model.Ec
    return h


def _ket_bra(i, j):
    m = np.zeros((4, 4), dtype=complex)
    m[i, j] = 1.0
    return m


def evolve_closed_form(model: TwoQubitModel, t: float) -> np.ndarray:
    """The printed closed-form operator, verbatim (not unitary for delta != 0)."""
    D, d = model._special()
    o1, o2, o3 = model.omega1, model.omega2, model.omega3
    diag = math.cos(o1 * t) + 1j * (D / o2) * math.sin(o2 * t)
    off = math.cos(o3 * t) - 1.0 + 1j * (d / o2) * math.sin(o2 * t)
    u = np.exp(3j * D * t) * _ket_bra(0, 0)
    u += diag * (_ket_bra(1, 1) + _ket_bra(2, 2))
    u += np.exp(-1j * D * t) * _ket_bra(3, 3)
    u += off * (_ket_bra(1, 2) + _ket_bra(2, 1))
    return u


def evolve_exact(model: TwoQubitModel, t: float, convention: str = "natural") -> np.ndarray:
    """exp(+iHt) (``"natural"``) or exp(-iHt/hbar) with H in eV, t in s (``"physical"``)."""
    h = hamiltonian4(model)
    w, v = np.linalg.eigh(h)
    if convention == "natural":
        phase = np.exp(1j * w * t)
    elif convention == "physical":
        phase = np.exp(-1j * w * t / HBAR_EVS)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return (v * phase) @ v.conj().T


def unitarity_defect(u: np.ndarray) -> float:
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]), 2))


KET10, KET01 = 1, 2
SWAP_VARIANTS = ("printed-t", "half-t", "exact")


@dataclass
class SwapReport:
    variant: str
    Delta: float
    delta: float
    t: float
    closed_01: complex
    closed_10: complex
    exact_01: complex
    exact_10: complex
    fidelity_closed: float
    fidelity_exact: float
    unitarity_defect: float
    printed_residual: float  # cos(pi Omega1 / (2 Omega2))


def swap_time(model: TwoQubitModel, variant: str) -> float:
    if variant == "printed-t":
        return math.pi / (2 * model.omega3)
    if variant == "half-t":
        return math.pi / (2 * model.omega2)
    if variant == "exact":
        return math.pi / (2 * model.special[1])
    raise ValueError(f"unknown swap variant {variant!r}; choose from {SWAP_VARIANTS}")


def swap_protocol(delta: float, variant: str = "printed-t", Delta: float | None = None) -> SwapReport:
    """Evolve |10> under the closed form and the exact propagator."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    Delta = (4 + SQRT13) * delta if Delta is None else Delta
    model = TwoQubitModel.special_case(Delta, delta)
    t = swap_time(model, variant)
    uc = evolve_closed_form(model, t)
    ue = evolve_exact(model, t)
    return SwapReport(
        variant, Delta, delta, t,
        complex(uc[KET01, KET10]), complex(uc[KET10, KET10]),
        complex(ue[KET01, KET10]), complex(ue[KET10, KET10]),
        float(abs(uc[KET01, KET10]) ** 2), float(abs(ue[KET01, KET10]) ** 2),
        unitarity_defect(uc),
        math.cos(math.pi * model.omega1 / (2 * model.omega2)),
    )


# -- inter-dot Coulomb element ---------------------------------------------

@dataclass(frozen=True)
class GaussianOrbital:
    """Real normalised Gaussian, ``width`` the per-axis standard deviation of |phi|^2."""

    center: tuple[float, float, float]
    width: float

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.asarray(self.center) + self.width * rng.standard_normal((n, 3))

    def value(self, r: np.ndarray) -> np.ndarray:
        s2 = self.width**2
        d2 = np.sum((r - np.asarray(self.center)) ** 2, axis=-1)
        return (2 * math.pi * s2) ** -0.75 * np.exp(-d2 / (4 * s2))


@dataclass(frozen=True)
class BoxOrbital:
    """Product of hard-wall sine modes of a box centred at ``center``."""

    center: tuple[float, float, float]
    dims: tuple[float, float, float]
    modes: tuple[int, int, int] = (1, 1, 1)

    def value(self, r: np.ndarray) -> np.ndarray:
        u = r - np.asarray(self.center) + 0.5 * np.asarray(self.dims)
        out = np.ones(u.shape[:-1])
        for a in range(3):
            L, n = self.dims[a], self.modes[a]
            inside = (u[..., a] >= 0) & (u[..., a] <= L)
            out = out * np.where(inside, math.sqrt(2 / L) * np.sin(n * math.pi * u[..., a] / L), 0.0)
        return out

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        # per-axis rejection from sin^2 (bounded by 1)
        out = np.empty((n, 3))
        for a in range(3):
            L, m = self.dims[a], self.modes[a]
            got = np.empty(0)
            while got.size < n:
                u = rng.uniform(0, L, 2 * n)
                keep = rng.uniform(0, 1, 2 * n) < np.sin(m * math.pi * u / L) ** 2
                got = np.concatenate([got, u[keep]])
            out[:, a] = got[:n] - 0.5 * L + self.center[a]
        return out


PARITY_CASES = {
    "same": (1, 1),
    "opposite-preserved": (1, 0),
    "opposite-changed": (0, 1),
}


@dataclass(frozen=True)
class CoulombModel:
    screening_nm: float = 10.0
    eps_r: float = SILICON.eps_r
    parity_case: str = "same"
    n_samples: int = 1_000_000
    seed: int = 0
    window_nm: float = 0.1
    window_fraction: float = 0.1
    n_streams: int = 8

    @property
    def flags(self) -> tuple[int, int]:
        try:
            return PARITY_CASES[self.parity_case]
        except KeyError:
            raise ValueError(f"unknown parity case {self.parity_case!r}") from None


def screened_coulomb(r, model: CoulombModel) -> np.ndarray:
    """Yukawa kernel e^2 exp(-r/lambda) / (4 pi eps0 eps_r r) in eV, r in nm."""
    r = np.asarray(r, dtype=float)
    return COULOMB_EV_NM * np.exp(-r / model.screening_nm) / (model.eps_r * r)


def point_charge_limit(distance_nm: float, model: CoulombModel) -> float:
    return float(screened_coulomb(distance_nm, model))


def _stream(phi1, phi2, model: CoulombModel, seq: np.random.SeedSequence, n: int):
    rng = np.random.default_rng(seq)
    d21, d12 = model.flags
    h, w = model.window_nm, model.window_fraction
    r1 = phi1.sample(rng, n)
    r2 = phi2.sample(rng, n)
    # defensive mixture: a fraction of pairs put r2 within ``h`` of r1 with a
    # 1/r radial weight, which cancels the kernel singularity
    near = rng.uniform(size=n) < w
    k = int(near.sum())
    if k:
        rad = h * np.sqrt(rng.uniform(size=k))
        dirs = rng.standard_normal((k, 3))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        r2[near] = r1[near] + rad[:, None] * dirs
    rel = np.linalg.norm(r1 - r2, axis=1)
    a1, b2 = phi1.value(r1), phi2.value(r2)
    a2, b1 = phi2.value(r1), phi1.value(r2)
    q_near = np.where(rel < h, 1.0 / (2 * math.pi * h * h * np.maximum(rel, 1e-300)), 0.0)
    dens = (1 - w) * a1**2 * b2**2 + w * a1**2 * q_near
    integrand = (a1 * b2 * d21 - a2 * b1 * d12) * screened_coulomb(np.maximum(rel, 1e-300), model) * a1 * b2
    vals = np.where(dens > 0, integrand / np.where(dens > 0, dens, 1.0), 0.0)
    return float(vals.sum()), float((vals**2).sum()), n


def coulomb_matrix_element(phi1, phi2, model: CoulombModel, threads: int = 1) -> tuple[float, float]:
    """Monte Carlo direct-minus-exchange element (eV) and its standard error.

    Samples are split over ``model.n_streams`` independent seeded streams
    so the result does not depend on ``threads``.
    """
    n = int(model.n_samples)
    if n < 10_000:
        raise ValueError("need at least 1e4 samples")
    seqs = np.random.SeedSequence(model.seed).spawn(model.n_streams)
    sizes = [n // model.n_streams + (1 if i < n % model.n_streams else 0) for i in range(model.n_streams)]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        parts = list(pool.map(lambda a: _stream(phi1, phi2, model, *a), zip(seqs, sizes)))
    s = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    mean = s / n
    var = max(s2 / n - mean * mean, 0.0)
    return mean, math.sqrt(var / (n - 1))
