"""Closed-form 1D integrals of products of box sine modes.

Every matrix element in the envelope problem factorises into 1D integrals
of the form

    int_c^d phi_m(z) z**p exp(i kappa z) phi_n(z) dz

(or with phi_n replaced by its derivative), where ``phi_n`` is the
normalised sine mode of an interval ``[a, a + L]``.  Writing the sine
products as sums of exponentials reduces all of them to the moments
``int z**p exp(i s z)``, which are evaluated exactly.  Quadrature is
useless for the inter-valley terms because ``exp(2 i K0 z)`` has a period
of about 0.32 nm.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

_SERIES_CUTOFF = 1.5
_SERIES_TERMS = 48


def _centered_moment(s: np.ndarray, h: float, j: int) -> np.ndarray:
    """int_{-h}^{h} w**j exp(i s w) dw for an array of real s."""
    s = np.asarray(s, dtype=float)
    out = np.empty(s.shape, dtype=complex)
    x = s * h
    small = np.abs(x) < _SERIES_CUTOFF

    if np.any(small):
        ss = s[small]
        acc = np.zeros(ss.shape, dtype=complex)
        for k in range(_SERIES_TERMS):
            if (j + k) % 2:
                continue
            acc += (1j * ss) ** k / factorial(k) * (2.0 * h ** (j + k + 1) / (j + k + 1))
        out[small] = acc

    big = ~small
    if np.any(big):
        sb = s[big]
        sn, cs = np.sin(sb * h), np.cos(sb * h)
        if j == 0:
            val = 2.0 * sn / sb
        elif j == 1:
            val = 2j * (sn / sb**2 - h * cs / sb)
        elif j == 2:
            val = 2.0 * (h * h * sn / sb + 2.0 * h * cs / sb**2 - 2.0 * sn / sb**3)
        elif j == 3:
            val = 2j * (-(h**3) * cs / sb + 3 * h * h * sn / sb**2
                        + 6 * h * cs / sb**3 - 6 * sn / sb**4)
        else:
            raise ValueError("moments above third order are not needed")
        out[big] = val
    return out


def exp_moment(s, c: float, d: float, p: int = 0) -> np.ndarray:
    """int_c^d z**p exp(i s z) dz, exact, vectorised over ``s``.

    Evaluated about the interval midpoint so the small-``s`` series and the
    closed form meet without cancellation.
    """
    if p < 0 or p > 3:
        raise ValueError("p must be 0..3")
    s = np.asarray(s, dtype=float)
    if d <= c:
        return np.zeros(s.shape, dtype=complex)
    mid, h = 0.5 * (c + d), 0.5 * (d - c)
    total = np.zeros(s.shape, dtype=complex)
    # (w + mid)**p expanded binomially
    for j in range(p + 1):
        coef = comb(p, j) * mid ** (p - j)
        if coef == 0.0:
            continue
        total += coef * _centered_moment(s, h, j)
    return np.exp(1j * s * mid) * total


@dataclass(frozen=True)
class SineModes:
    """Sine modes sqrt(2/L) sin(n pi (z - a) / L), n = 1..n_modes, on [a, a+L]."""

    a: float
    length: float
    n_modes: int

    @property
    def b(self) -> float:
        return self.a + self.length

    @property
    def k(self) -> np.ndarray:
        return np.arange(1, self.n_modes + 1) * np.pi / self.length

    def values(self, z) -> np.ndarray:
        """Mode values, shape (n_modes,) + shape(z)."""
        z = np.asarray(z, dtype=float)
        u = z - self.a
        k = self.k.reshape((-1,) + (1,) * z.ndim)
        return np.sqrt(2.0 / self.length) * np.sin(k * u)

    def derivatives(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        u = z - self.a
        k = self.k.reshape((-1,) + (1,) * z.ndim)
        return np.sqrt(2.0 / self.length) * k * np.cos(k * u)


def _clip(modes: SineModes, lo, hi):
    if lo is None:
        lo = modes.a
    if hi is None:
        hi = modes.b
    return max(lo, modes.a), min(hi, modes.b)


def product_matrix(modes: SineModes, kappa: float = 0.0, power: int = 0,
                   lo: float | None = None, hi: float | None = None) -> np.ndarray:
    """M[m, n] = int_lo^hi phi_m z**power exp(i kappa z) phi_n dz.

    Real-valued when ``kappa == 0`` (returned as complex regardless).
    """
    c, d = _clip(modes, lo, hi)
    k = modes.k
    km, kn = np.meshgrid(k, k, indexing="ij")
    kd, ks = km - kn, km + kn
    a = modes.a
    # phi_m phi_n = (1/L) [cos(kd u) - cos(ks u)],  cos(k u) e^{i kappa z}
    # = (1/2) sum_sigma exp(-i sigma k a) exp(i (kappa + sigma k) z)
    out = np.zeros(km.shape, dtype=complex)
    for sigma in (1.0, -1.0):
        out += np.exp(-1j * sigma * kd * a) * exp_moment(kappa + sigma * kd, c, d, power)
        out -= np.exp(-1j * sigma * ks * a) * exp_moment(kappa + sigma * ks, c, d, power)
    return out / (2.0 * modes.length)


def derivative_matrix(modes: SineModes, kappa: float = 0.0, power: int = 0,
                      lo: float | None = None, hi: float | None = None) -> np.ndarray:
    """D[m, n] = int_lo^hi phi_m z**power exp(i kappa z) phi_n' dz."""
    c, d = _clip(modes, lo, hi)
    k = modes.k
    km, kn = np.meshgrid(k, k, indexing="ij")
    a = modes.a
    # phi_m phi_n' = (k_n / L) [sin((km + kn) u) + sin((km - kn) u)]
    # sin(k u) e^{i kappa z} = (1/2i) sum_sigma sigma exp(-i sigma k a) exp(i (kappa + sigma k) z)
    out = np.zeros(km.shape, dtype=complex)
    for kk in (km + kn, km - kn):
        for sigma in (1.0, -1.0):
            out += sigma * np.exp(-1j * sigma * kk * a) * exp_moment(kappa + sigma * kk, c, d, power)
    return out * kn / (2j * modes.length)


def point_matrix(modes: SineModes, z: float, kappa: float = 0.0) -> np.ndarray:
    """exp(i kappa z) phi_m(z) phi_n(z): matrix of a delta function at ``z``."""
    v = modes.values(z)
    return np.exp(1j * kappa * z) * np.outer(v, v)
