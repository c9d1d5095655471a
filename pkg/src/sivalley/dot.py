"""Rectangular dot: geometry, sine-product basis and Hamiltonian matrices.

The envelope of each valley is expanded in products of sine modes of an
embedding box.  For hard walls the box is the dot itself; for a finite
barrier the box is padded and the barrier enters through the potential.
All matrices are assembled from Kronecker products of the 1D integrals in
:mod:`sivalley.integrals`, so flat indices run lexicographically over
``(n_x, n_y, n_z)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property, reduce

import numpy as np

from . import integrals as ig
from .units import HBAR2_2M0, MU_B_EV_PER_T, SILICON, SiliconParams, field_energy_per_nm
from .valley import Valley

HARD_WALL = "hard-wall"
FINITE_BARRIER = "finite-barrier"


@dataclass(frozen=True)
class DotSpec:
    """Dot interior (nm), barrier model and applied fields.

    ``field_kv_cm`` points along z, ``b_tesla`` along z.  ``magnetic_gauge``
    is ``"printed"`` (cross terms with equal signs) or ``"textbook"``
    (symmetric-gauge L_z form).
    """

    dims: tuple[float, float, float] = (8.0, 12.0, 6.0)
    barrier_mode: str = HARD_WALL
    barrier_eV: float = SILICON.barrier_eV
    padding: float = 2.0
    field_kv_cm: float = 0.0
    b_tesla: float = 0.0
    magnetic_gauge: str = "printed"
    material: SiliconParams = SILICON

    def __post_init__(self):
        if len(self.dims) != 3 or min(self.dims) <= 0:
            raise ValueError(f"dot dimensions must be three positive lengths, got {self.dims}")
        if self.barrier_mode not in (HARD_WALL, FINITE_BARRIER):
            raise ValueError(f"unknown barrier mode {self.barrier_mode!r}")
        if self.barrier_mode == FINITE_BARRIER:
            if self.barrier_eV <= 0:
                raise ValueError("barrier height must be positive")
            if self.padding <= 0:
                raise ValueError("finite barrier needs positive padding")
        else:
            object.__setattr__(self, "padding", 0.0)
        if self.b_tesla < 0:
            raise ValueError("B must be non-negative")
        if self.magnetic_gauge not in ("printed", "textbook"):
            raise ValueError(f"unknown magnetic gauge {self.magnetic_gauge!r}")

    @property
    def hard_wall(self) -> bool:
        return self.barrier_mode == HARD_WALL

    @property
    def box(self) -> tuple[float, float, float]:
        return tuple(d + 2 * self.padding for d in self.dims)

    @property
    def field_energy(self) -> float:
        """e*F in eV/nm."""
        return field_energy_per_nm(self.field_kv_cm)

    def with_field(self, field_kv_cm: float) -> "DotSpec":
        return replace(self, field_kv_cm=float(field_kv_cm))


@dataclass(frozen=True)
class BasisSet:
    n_modes: tuple[int, int, int]
    axes: tuple[ig.SineModes, ig.SineModes, ig.SineModes]
    interior: tuple[tuple[float, float], ...]

    @property
    def size(self) -> int:
        return int(np.prod(self.n_modes))

    def index(self, nx: int, ny: int, nz: int) -> int:
        Nx, Ny, Nz = self.n_modes
        if not (1 <= nx <= Nx and 1 <= ny <= Ny and 1 <= nz <= Nz):
            raise IndexError((nx, ny, nz))
        return ((nx - 1) * Ny + (ny - 1)) * Nz + (nz - 1)

    def modes(self, flat: int) -> tuple[int, int, int]:
        Nx, Ny, Nz = self.n_modes
        nx, rest = divmod(flat, Ny * Nz)
        ny, nz = divmod(rest, Nz)
        return nx + 1, ny + 1, nz + 1

    def evaluate(self, coeffs: np.ndarray, points: np.ndarray) -> np.ndarray:
        """Envelope value at ``points`` (shape (..., 3))."""
        points = np.asarray(points, dtype=float)
        c = np.asarray(coeffs).reshape(self.n_modes)
        vx = self.axes[0].values(points[..., 0])
        vy = self.axes[1].values(points[..., 1])
        vz = self.axes[2].values(points[..., 2])
        return np.einsum("abc,a...,b...,c...->...", c, vx, vy, vz)


def make_basis(spec: DotSpec, n_modes=(8, 10, 12)) -> BasisSet:
    n_modes = tuple(int(n) for n in n_modes)
    if min(n_modes) < 1:
        raise ValueError("need at least one mode per axis")
    axes = tuple(ig.SineModes(-0.5 * L, L, n) for L, n in zip(spec.box, n_modes))
    interior = tuple((-0.5 * d, 0.5 * d) for d in spec.dims)
    return BasisSet(n_modes, axes, interior)


def kron3(a, b, c) -> np.ndarray:
    return np.kron(np.kron(a, b), c)


def total_potential(r, spec: DotSpec) -> float:
    """V_c(r) + e F z in eV, with r measured from the dot centre (nm)."""
    r = np.asarray(r, dtype=float)
    half_box = 0.5 * np.asarray(spec.box)
    if np.any(np.abs(r) > half_box * (1 + 1e-12)):
        raise ValueError(f"point {tuple(r)} outside the embedding box")
    v = spec.field_energy * r[2]
    if not spec.hard_wall and np.any(np.abs(r) > 0.5 * np.asarray(spec.dims)):
        v += spec.barrier_eV
    return float(v)


class DotMatrices:
    """Cached 1D integral tables for one (spec geometry, basis) pair.

    The field enters linearly, so matrices are split into a field-free part
    and a part per unit ``e F`` (eV/nm).
    """

    def __init__(self, spec: DotSpec, basis: BasisSet):
        self.spec = spec
        self.basis = basis
        self._eye = tuple(np.eye(n) for n in basis.n_modes)

    # -- 1D tables -------------------------------------------------------

    def _overlap_interior(self, axis: int, kappa: float = 0.0, deriv: bool = False) -> np.ndarray:
        lo, hi = self.basis.interior[axis]
        fn = ig.derivative_matrix if deriv else ig.product_matrix
        return fn(self.basis.axes[axis], kappa, 0, lo, hi)

    def _full(self, axis: int, kappa: float = 0.0, power: int = 0, deriv: bool = False) -> np.ndarray:
        if kappa == 0.0 and power == 0 and not deriv:
            return self._eye[axis].astype(complex)
        fn = ig.derivative_matrix if deriv else ig.product_matrix
        return fn(self.basis.axes[axis], kappa, power)

    @cached_property
    def _interior_overlaps(self):
        return tuple(self._overlap_interior(a).real for a in range(3))

    # -- single-valley blocks ------------------------------------------

    def kinetic(self, v: Valley) -> np.ndarray:
        diag = np.zeros(self.basis.n_modes)
        for a in range(3):
            k2 = self.basis.axes[a].k ** 2
            shape = [1, 1, 1]
            shape[a] = -1
            diag = diag + (HBAR2_2M0 * k2 / v.masses[a]).reshape(shape)
        return np.diag(diag.ravel())

    @cached_property
    def confinement(self) -> np.ndarray:
        """V_c matrix (field free)."""
        n = self.basis.size
        if self.spec.hard_wall:
            return np.zeros((n, n))
        px, py, pz = self._interior_overlaps
        m = -kron3(px, py, pz)
        m[np.diag_indices(n)] += 1.0
        m *= self.spec.barrier_eV
        return 0.5 * (m + m.T)

    @cached_property
    def dipole(self) -> np.ndarray:
        """z matrix; multiply by e F for the field term."""
        z = self._full(2, power=1).real
        return kron3(self._eye[0], self._eye[1], z)

    def potential(self, spec: DotSpec | None = None) -> np.ndarray:
        spec = spec or self.spec
        return self.confinement + spec.field_energy * self.dipole

    def magnetic(self, v: Valley, b_tesla: float | None = None) -> np.ndarray:
        b = self.spec.b_tesla if b_tesla is None else b_tesla
        n = self.basis.size
        if b == 0.0:
            return np.zeros((n, n), dtype=complex)
        mx, my, _ = v.masses
        ex, ey, ez = self._eye
        dx = self._full(0, deriv=True).real
        dy = self._full(1, deriv=True).real
        x1 = self._full(0, power=1).real
        y1 = self._full(1, power=1).real
        x2 = self._full(0, power=2).real
        y2 = self._full(1, power=2).real
        mub = MU_B_EV_PER_T * b
        sign = 1.0 if self.spec.magnetic_gauge == "printed" else -1.0
        cross = -1j * (mub / mx) * kron3(dx, y1, ez) - sign * 1j * (mub / my) * kron3(x1, dy, ez)
        dia = (mub**2 / (4.0 * HBAR2_2M0)) * (kron3(x2, ey, ez) / my + kron3(ex, y2, ez) / mx)
        m = cross + dia
        return 0.5 * (m + m.conj().T)

    def single_valley(self, v: Valley, spec: DotSpec | None = None) -> np.ndarray:
        spec = spec or self.spec
        h = self.kinetic(v) + self.potential(spec) + self.magnetic(v, spec.b_tesla)
        return 0.5 * (h + h.conj().T)

    # -- oscillatory inter-valley kernels --------------------------------

    def oscillatory(self, q, include_confinement: bool = True) -> "OscillatoryKernel":
        """Kernels of exp(-i q.r) V(r) for a valley-pair momentum ``q`` (1/nm)."""
        kappa = [-float(c) for c in q]  # exp(-i q.r) = exp(i kappa.r)
        return OscillatoryKernel(self, kappa, include_confinement and not self.spec.hard_wall)


@dataclass
class OscillatoryKernel:
    """M_V, left and right gradient kernels, each split as (field-free, per eF).

    ``value``  -> <m| e^{-iq.r} V |n>
    ``left[b]`` -> <m| d_b (e^{-iq.r} V) |n>
    ``right[b]`` -> <m| e^{-iq.r} V d_b |n>
    """

    mats: DotMatrices
    kappa: list[float]
    with_confinement: bool
    cache: dict = field(default_factory=dict)

    def _1d(self, axis, power=0, deriv=False, interior=False):
        key = (axis, power, deriv, interior)
        if key not in self.cache:
            modes = self.mats.basis.axes[axis]
            fn = ig.derivative_matrix if deriv else ig.product_matrix
            if interior:
                lo, hi = self.mats.basis.interior[axis]
                self.cache[key] = fn(modes, self.kappa[axis], power, lo, hi)
            else:
                self.cache[key] = fn(modes, self.kappa[axis], power)
        return self.cache[key]

    def _product(self, interior=False, deriv_axis=None, z_power=0, point_axis=None):
        factors = []
        for a in range(3):
            if a == point_axis:
                modes = self.mats.basis.axes[a]
                lo, hi = self.mats.basis.interior[a]
                k = self.kappa[a]
                factors.append(ig.point_matrix(modes, lo, k) - ig.point_matrix(modes, hi, k))
                continue
            p = z_power if a == 2 else 0
            factors.append(self._1d(a, p, a == deriv_axis, interior))
        return reduce(np.kron, factors)

    def _confinement_part(self, deriv_axis=None):
        if not self.with_confinement:
            return 0.0
        vb = self.mats.spec.barrier_eV
        return vb * (self._product(False, deriv_axis) - self._product(True, deriv_axis))

    def value(self):
        """(field-free, per-eF) parts of <m|e^{-iq.r}V|n>."""
        return self._confinement_part(), self._product(z_power=1)

    def right(self, axis):
        return self._confinement_part(axis), self._product(deriv_axis=axis, z_power=1)

    def left(self, axis):
        v0, v1 = self.value()
        k = self.kappa[axis]
        m0 = 1j * k * v0
        m1 = 1j * k * v1
        if self.with_confinement:
            # d_b V_c = -V_b prod_{a != b} chi_a (delta(lo) - delta(hi))
            m0 = m0 - self.mats.spec.barrier_eV * self._product(True, point_axis=axis)
        if axis == 2:
            m1 = m1 + self._product()
        return m0, m1


# -- functional entry points ---------------------------------------------

def kinetic_matrix(valley: Valley, basis: BasisSet, spec: DotSpec | None = None) -> np.ndarray:
    return DotMatrices(spec or DotSpec(), basis).kinetic(valley)


def magnetic_matrix(b_tesla: float, valley: Valley, basis: BasisSet,
                    spec: DotSpec | None = None) -> np.ndarray:
    if b_tesla < 0:
        raise ValueError("B must be non-negative")
    return DotMatrices(spec or DotSpec(), basis).magnetic(valley, b_tesla)


def potential_matrix(spec: DotSpec, basis: BasisSet) -> np.ndarray:
    return DotMatrices(spec, basis).potential()


def _check_pair_momentum(q, k0: float):
    q = np.asarray(q, dtype=float)
    if np.allclose(q, 0.0):
        return
    # valley differences: +-2 k0 along one axis or k0 (+-e_a -+ e_b), a != b
    steps = np.round(np.abs(q) / k0, 9)
    nz = steps[steps > 0]
    ok = (len(nz) == 1 and np.isclose(nz[0], 2.0)) or (len(nz) == 2 and np.allclose(nz, 1.0))
    if not ok:
        raise ValueError(f"q = {tuple(q)} is not a valley-pair momentum difference")


def oscillatory_kernel(q, spec: DotSpec, basis: BasisSet, axis: int = 2,
                       include_confinement: bool = True):
    """(M_V, M_left, M_right) at the spec field for gradients along ``axis``."""
    _check_pair_momentum(q, spec.material.k0)
    ker = DotMatrices(spec, basis).oscillatory(q, include_confinement)
    eF = spec.field_energy
    v0, v1 = ker.value()
    l0, l1 = ker.left(axis)
    r0, r1 = ker.right(axis)
    return v0 + eF * v1, l0 + eF * l1, r0 + eF * r1
