"""Coupled opposite-valley envelope problem, level tracking and diagnostics."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg as sla

from .dot import BasisSet, DotMatrices, DotSpec, make_basis
from .valley import DEFAULT_BAND, BandModel, Valley, coupling_constants, valley

log = logging.getLogger(__name__)

FIELD_ONLY = "field-only"
FULL = "full"
COUPLING_SOURCES = (FIELD_ONLY, FULL)
DEFAULT_MODES = (8, 10, 12)
AMBIGUOUS_OVERLAP = 1e-6
DEGENERATE_EV = 1e-10


class EigensolverError(RuntimeError):
    pass


class ValleyOrderError(ValueError):
    """The lowest doublet does not belong to the requested valley pair."""


@dataclass
class CoupledHamiltonian:
    pair: tuple[Valley, Valley]
    matrix: np.ndarray
    field_kv_cm: float

    @property
    def n_basis(self) -> int:
        return self.matrix.shape[0] // 2

    def block(self, i: int, j: int) -> np.ndarray:
        n = self.n_basis
        return self.matrix[i * n:(i + 1) * n, j * n:(j + 1) * n]

    @property
    def hermiticity_residual(self) -> float:
        m = self.matrix
        return float(np.linalg.norm(m - m.conj().T) / max(np.linalg.norm(m), 1e-300))


@dataclass
class Eigenpairs:
    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray


def fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Make each column's largest-magnitude entry real and positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    piv = vectors[idx, np.arange(vectors.shape[1])]
    return vectors * (np.abs(piv) / np.where(piv == 0, 1.0, piv))


def eigensolve(h, k: int | None = None) -> Eigenpairs:
    """Lowest ``k`` eigenpairs of a Hermitian matrix, with residual check.

    Residuals are ||H v - lambda v|| and must stay below 1e-10 ||H||.
    """
    m = h.matrix if isinstance(h, CoupledHamiltonian) else np.asarray(h)
    n = m.shape[0]
    k = n if k is None else int(k)
    if not 1 <= k <= n:
        raise ValueError(f"requested {k} eigenpairs of a {n}x{n} matrix")
    try:
        if k < n:
            w, v = sla.eigh(m, subset_by_index=[0, k - 1], driver="evr")
        else:
            w, v = sla.eigh(m)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverError(f"dense Hermitian solve failed for n={n}, k={k}: {exc}") from exc
    v = fix_phases(v)
    res = np.linalg.norm(m @ v - v * w, axis=0)
    scale = max(np.linalg.norm(m, 2) if n <= 64 else np.abs(m).sum(axis=0).max(), 1e-300)
    if np.any(res > 1e-10 * scale):
        raise EigensolverError(f"residual {res.max():.3e} exceeds 1e-10 * ||H|| = {1e-10 * scale:.3e}")
    return Eigenpairs(w, v, res)


class PairProblem:
    """Two-valley Hamiltonian split into field-free and per-eF pieces.

    ``H(F) = H0 + eF * H1`` for both the diagonal blocks and the
    inter-valley block, so field sweeps only re-diagonalise.
    """

    def __init__(self, pair: tuple[int, int], spec: DotSpec, basis: BasisSet,
                 coupling_source: str = FIELD_ONLY, band: BandModel = DEFAULT_BAND):
        if coupling_source not in COUPLING_SOURCES:
            raise ValueError(f"coupling_source must be one of {COUPLING_SOURCES}")
        a, b = valley(pair[0], spec.material), valley(pair[1], spec.material)
        if not np.isclose(a.axis @ b.axis, -1.0):
            raise ValueError(f"valleys {a.index} and {b.index} do not share an axis; "
                             "use cross_axis_coupling")
        self.pair = (a, b)
        self.spec = spec
        self.basis = basis
        self.coupling_source = coupling_source
        self.band = band
        self.mats = DotMatrices(spec, basis)
        self.constants = coupling_constants(a, b, band)
        axis = a.axis_index

        mats = self.mats
        h0 = mats.kinetic(a) + mats.confinement + mats.magnetic(a)
        self.diag0 = 0.5 * (h0 + h0.conj().T)
        self.diag1 = mats.dipole

        ker = mats.oscillatory(a.k - b.k, coupling_source == FULL)
        c = self.constants
        J = float(np.linalg.norm(c.J))
        Jp = float(np.linalg.norm(c.J_prime))
        v0, v1 = ker.value()
        l0, l1 = ker.left(axis)
        r0, r1 = ker.right(axis)
        self.off0 = c.I * v0 - 1j * J * l0 - 1j * Jp * r0
        self.off1 = c.I * v1 - 1j * J * l1 - 1j * Jp * r1
        if np.isscalar(self.off0):
            self.off0 = np.zeros_like(self.off1)

    @property
    def n_basis(self) -> int:
        return self.basis.size

    def diagonal(self, field_kv_cm: float) -> np.ndarray:
        return self.diag0 + field_kv_cm * 1e-4 * self.diag1

    def off_diagonal(self, field_kv_cm: float) -> np.ndarray:
        return self.off0 + field_kv_cm * 1e-4 * self.off1

    def hamiltonian(self, field_kv_cm: float) -> CoupledHamiltonian:
        d = self.diagonal(field_kv_cm)
        o = self.off_diagonal(field_kv_cm)
        m = np.block([[d, o], [o.conj().T, d]])
        return CoupledHamiltonian(self.pair, m, float(field_kv_cm))

    def single_valley_ground(self, field_kv_cm: float) -> tuple[float, np.ndarray]:
        ep = eigensolve(self.diagonal(field_kv_cm), 1)
        return float(ep.values[0]), ep.vectors[:, 0]

    def intervalley_operator(self, field_kv_cm: float) -> np.ndarray:
        """Block matrix with only the inter-valley part (labels parity)."""
        o = self.off_diagonal(field_kv_cm)
        if np.abs(o).max() < 1e-300 or (self.coupling_source == FIELD_ONLY and field_kv_cm == 0):
            o = self.off1
        z = np.zeros_like(o)
        return np.block([[z, o], [o.conj().T, z]])

    def solve(self, field_kv_cm: float, k: int) -> Eigenpairs:
        """Eigenpairs with degenerate clusters rotated into S/A combinations."""
        h = self.hamiltonian(field_kv_cm)
        ep = eigensolve(h, k)
        return _resolve_degeneracies(ep, self.intervalley_operator(field_kv_cm))

    def parities(self, vectors: np.ndarray, field_kv_cm: float) -> list[str]:
        w = self.intervalley_operator(field_kv_cm)
        vals = np.real(np.einsum("ij,ij->j", vectors.conj(), w @ vectors))
        n = self.n_basis
        out = []
        for j, e in enumerate(vals):
            c5, c6 = vectors[:n, j], vectors[n:, j]
            weight = 2 * abs(np.vdot(c5, c5) * np.vdot(c6, c6)) ** 0.5
            if weight < 0.5 or abs(e) < 1e-300:
                out.append("?")
            else:
                out.append("S" if e < 0 else "A")
        return out


def _resolve_degeneracies(ep: Eigenpairs, op: np.ndarray) -> Eigenpairs:
    vals, vecs = ep.values, ep.vectors.copy()
    i = 0
    while i < len(vals):
        j = i + 1
        while j < len(vals) and vals[j] - vals[i] < DEGENERATE_EV:
            j += 1
        if j - i > 1:
            sub = vecs[:, i:j]
            proj = sub.conj().T @ op @ sub
            _, rot = np.linalg.eigh(0.5 * (proj + proj.conj().T))
            vecs[:, i:j] = fix_phases(sub @ rot)
        i = j
    return Eigenpairs(vals, vecs, ep.residuals)


def pair_problem(pair: tuple[int, int], spec: DotSpec, n_modes=DEFAULT_MODES,
                 coupling_source: str = FIELD_ONLY, band: BandModel = DEFAULT_BAND) -> PairProblem:
    """Cached :class:`PairProblem`; the field of ``spec`` is ignored."""
    return _pair_problem(tuple(pair), spec.with_field(0.0), tuple(n_modes), coupling_source, band)


@lru_cache(maxsize=8)
def _pair_problem(pair, spec, n_modes, coupling_source, band) -> PairProblem:
    return PairProblem(pair, spec, make_basis(spec, n_modes), coupling_source, band)


def assemble(pair, spec: DotSpec, basis: BasisSet | None = None,
             coupling_source: str = FIELD_ONLY, band: BandModel = DEFAULT_BAND) -> CoupledHamiltonian:
    """Coupled Hamiltonian for an opposite-valley pair at ``spec.field_kv_cm``."""
    idx = tuple(v.index if isinstance(v, Valley) else int(v) for v in pair)
    basis = basis or make_basis(spec)
    return PairProblem(idx, spec.with_field(0.0), basis, coupling_source, band).hamiltonian(spec.field_kv_cm)


# -- splitting and coupling ----------------------------------------------

@dataclass
class CouplingResult:
    field_kv_cm: float
    eps: float  # E_A - E_S of the lowest doublet, eV
    delta: float  # |<F5|H56|F6>|, eV
    delta_complex: complex
    ground_energy: float
    residual: float


def _check_ground_pair(problem: PairProblem, field_kv_cm: float, e_pair: float):
    mats = problem.mats
    axis = problem.pair[0].axis_index
    for other in (1, 3, 5):
        v = valley(other, problem.spec.material)
        if v.axis_index == axis:
            continue
        h = mats.kinetic(v) + mats.confinement + mats.magnetic(v) + field_kv_cm * 1e-4 * mats.dipole
        e = eigensolve(0.5 * (h + h.conj().T), 1).values[0]
        if e < e_pair - 1e-12:
            raise ValleyOrderError(
                f"valley {other} ground ({e:.6f} eV) lies below the "
                f"{problem.pair[0].index}-{problem.pair[1].index} doublet ({e_pair:.6f} eV)")


def splitting_and_coupling(spec: DotSpec, n_modes=DEFAULT_MODES, coupling_source: str = FIELD_ONLY,
                           band: BandModel = DEFAULT_BAND, pair=(5, 6),
                           check_order: bool = True) -> CouplingResult:
    """Valley splitting and inter-valley matrix element of the ground doublet.

    ``delta`` sandwiches the inter-valley block between the uncoupled
    single-valley ground envelopes; ``eps`` comes from the coupled solve.
    """
    problem = pair_problem(tuple(pair), spec, tuple(n_modes), coupling_source, band)
    return _coupling_at(problem, spec.field_kv_cm, check_order)


def _coupling_at(problem: PairProblem, field_kv_cm: float, check_order: bool = True) -> CouplingResult:
    e_single, g = problem.single_valley_ground(field_kv_cm)
    if check_order:
        _check_ground_pair(problem, field_kv_cm, e_single)
    d = complex(np.vdot(g, problem.off_diagonal(field_kv_cm) @ g))
    ep = eigensolve(problem.hamiltonian(field_kv_cm), 2)
    eps = float(ep.values[1] - ep.values[0])
    return CouplingResult(float(field_kv_cm), eps, abs(d), d, float(ep.values[0]),
                          float(ep.residuals.max()))


def coupling_sweep(spec: DotSpec, grid, n_modes=DEFAULT_MODES, coupling_source: str = FIELD_ONLY,
                   band: BandModel = DEFAULT_BAND, threads: int = 1) -> list[CouplingResult]:
    problem = pair_problem((5, 6), spec, tuple(n_modes), coupling_source, band)
    grid = [float(f) for f in grid]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        return list(pool.map(lambda f: _coupling_at(problem, f), grid))


# -- field sweeps and level tracking ---------------------------------------

def match_levels(prev: np.ndarray, cur: np.ndarray, prev_e=None, cur_e=None):
    """Greedy maximum-overlap assignment between two sets of eigenvectors.

    Returns ``(perm, ambiguous)`` with ``cur[:, perm[i]]`` continuing
    ``prev[:, i]``.  Near-ties (overlaps within 1e-6) fall back to energy
    proximity and are flagged.
    """
    ov = np.abs(prev.conj().T @ cur) ** 2
    n, m = ov.shape
    perm = -np.ones(n, dtype=int)
    free_r, free_c = set(range(n)), set(range(m))
    ambiguous = False
    for _ in range(n):
        rows, cols = sorted(free_r), sorted(free_c)
        sub = ov[np.ix_(rows, cols)]
        flat = np.argsort(-sub, axis=None, kind="stable")
        best = sub.flat[flat[0]]
        r, c = divmod(int(flat[0]), len(cols))
        # only candidates competing for the same row or column make a tie
        ties = [divmod(int(t), len(cols)) for t in flat if best - sub.flat[t] < AMBIGUOUS_OVERLAP]
        ties = [(rr, cc) for rr, cc in ties if rr == r or cc == c]
        if len(ties) > 1:
            ambiguous = True
            if prev_e is not None and cur_e is not None:
                r, c = min(ties, key=lambda rc: abs(prev_e[rows[rc[0]]] - cur_e[cols[rc[1]]]))
        perm[rows[r]] = cols[c]
        free_r.discard(rows[r])
        free_c.discard(cols[c])
    return perm, ambiguous


@dataclass
class Spectrum:
    """Tracked eigenpairs of a valley pair over a field grid.

    ``energies[i, j]`` is the energy of tracked level ``ids[j]`` at
    ``fields[i]``; ``parity[i][j]`` its S/A label there.
    """

    fields: np.ndarray
    ids: list[str]
    energies: np.ndarray
    parity: list[list[str]]
    residuals: np.ndarray
    pair: tuple[int, int]
    vectors: list[np.ndarray] = field(default_factory=list, repr=False)
    warnings: list[str] = field(default_factory=list)
    extra: dict[str, tuple[str, np.ndarray]] = field(default_factory=dict)

    def level(self, level_id: str) -> np.ndarray:
        return self.energies[:, self.ids.index(level_id)]


def _doublet_ids(parities: list[str]) -> list[str]:
    ids = []
    for i in range(0, len(parities), 2):
        n = i // 2
        pair = parities[i:i + 2]
        if len(pair) == 2 and sorted(pair) == ["A", "S"]:
            ids += [f"E{n}{p}" for p in pair]
        else:
            ids += [f"E{n}{'ab'[j]}" for j in range(len(pair))]
    return ids


def sweep_field(spec: DotSpec, grid, levels: int = 6, n_modes=DEFAULT_MODES,
                coupling_source: str = FIELD_ONLY, band: BandModel = DEFAULT_BAND,
                pair=(5, 6), margin: int = 4, threads: int = 1, keep_vectors: bool = False,
                other_valleys: tuple[int, ...] = (1, 3),
                reference: tuple[list[str], np.ndarray] | None = None) -> Spectrum:
    """Solve the coupled pair over ``grid`` and track levels by overlap.

    ``levels`` counts single-valley levels; each is a valley doublet, so
    ``2 * levels`` states are reported.  ``margin`` extra states are solved
    so levels entering from above can be matched.  For each valley index in
    ``other_valleys`` the lowest single-valley level is added to ``extra``.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise ValueError("field grid needs at least two points")
    if np.any(np.diff(grid) < 0):
        raise ValueError("field grid must be non-decreasing")
    problem = pair_problem(tuple(pair), spec, tuple(n_modes), coupling_source, band)
    k = 2 * levels + margin

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        solved = list(pool.map(lambda f: problem.solve(f, k), grid))

    warnings = []
    first = solved[0]
    par0 = problem.parities(first.vectors, grid[0])
    ids = _doublet_ids(par0)
    order = np.arange(k)
    if reference is not None:
        ref_ids, ref_vec = reference
        head, amb = match_levels(ref_vec, first.vectors, None, None)
        if amb:
            warnings.append(f"ambiguous reference matching at {grid[0]:g} kV/cm")
        rest = [j for j in range(k) if j not in set(head)]
        order = np.concatenate([head, rest])
        ids = list(ref_ids) + [f"X{j}" for j in range(len(rest))]
    energies = np.empty((len(grid), k))
    residuals = np.empty((len(grid), k))
    parity = []
    vectors = []
    prev_vec, prev_e = None, None
    for i, (f, ep) in enumerate(zip(grid, solved)):
        if i == 0:
            perm = order
        else:
            perm, amb = match_levels(prev_vec, ep.vectors, prev_e, ep.values)
            if amb:
                msg = f"ambiguous level matching at {f:g} kV/cm; energy order used for ties"
                warnings.append(msg)
                log.warning(msg)
        vec = ep.vectors[:, perm]
        energies[i] = ep.values[perm]
        residuals[i] = ep.residuals[perm]
        p = problem.parities(ep.vectors, f)
        parity.append([p[j] for j in perm])
        prev_vec, prev_e = vec, energies[i]
        if keep_vectors:
            vectors.append(vec)

    n_rep = 2 * levels
    spec_out = Spectrum(grid, ids[:n_rep], energies[:, :n_rep], [row[:n_rep] for row in parity],
                        residuals[:, :n_rep], tuple(pair),
                        [v[:, :n_rep] for v in vectors], warnings)
    mats = problem.mats
    for idx in other_valleys:
        v = valley(idx, spec.material)
        h0 = mats.kinetic(v) + mats.confinement + mats.magnetic(v)
        e = [eigensolve(0.5 * (h0 + h0.conj().T) + f * 1e-4 * mats.dipole, 1).values[0] for f in grid]
        partner = idx + 1 if idx % 2 else idx - 1
        spec_out.extra[f"V{idx}E0"] = (f"{min(idx, partner)}-{max(idx, partner)}", np.asarray(e))
    return spec_out


# -- anti-crossings ----------------------------------------------------------

@dataclass
class AnticrossingResult:
    field_kv_cm: float | None
    gap: float | None
    is_anticrossing: bool
    crossing_bound: float
    trace: list[tuple[float, float]]
    message: str = ""


GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def track_anticrossing(solver, level_a: int, level_b: int, f_range, n_coarse: int = 31,
                       xtol: float = 0.1, refine_tol: float | None = None) -> AnticrossingResult:
    """Minimum separation of two tracked levels of ``solver(F) -> (values, vectors)``.

    Levels are indices in ascending order at ``f_range[0]``.  A coarse
    tracked sweep brackets the minimum of |E_b - E_a|, then a golden-section
    search narrows the bracket below ``refine_tol`` (default ``xtol / 100``).
    The result counts as an anti-crossing only if the minimum gap exceeds
    what a linear crossing could leave inside the final bracket.
    """
    lo, hi = map(float, f_range)
    if not hi > lo:
        raise ValueError("field range must be increasing")
    refine_tol = xtol / 100.0 if refine_tol is None else refine_tol
    grid = np.linspace(lo, hi, n_coarse)
    trace = []
    vals, vecs = solver(grid[0])
    ref = [vecs[:, [level_a, level_b]]]
    gaps = [abs(vals[level_b] - vals[level_a])]
    trace.append((grid[0], gaps[0]))
    # vectors are kept permuted into tracked order, so the level indices stay fixed
    prev_vecs, prev_vals = vecs, vals
    for f in grid[1:]:
        vals, vecs = solver(f)
        perm, _ = match_levels(prev_vecs, vecs, prev_vals, vals)
        prev_vecs, prev_vals = vecs[:, perm], vals[perm]
        ref.append(prev_vecs[:, [level_a, level_b]])
        g = abs(prev_vals[level_b] - prev_vals[level_a])
        gaps.append(g)
        trace.append((float(f), float(g)))
    gaps = np.asarray(gaps)
    i = int(np.argmin(gaps))
    slope = np.max(np.abs(np.diff(gaps))) / (grid[1] - grid[0])
    if i == 0 or i == len(grid) - 1:
        return AnticrossingResult(None, None, False, 0.0, trace,
                                  "no interior minimum: levels separate monotonically")

    def gap_at(f, j):
        vals, vecs = solver(f)
        sub = ref[j]
        weight = np.sum(np.abs(sub.conj().T @ vecs) ** 2, axis=0)
        two = np.sort(np.argsort(-weight, kind="stable")[:2])
        g = float(abs(vals[two[1]] - vals[two[0]]))
        trace.append((float(f), g))
        return g

    a, b = grid[i - 1], grid[i + 1]
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    gc, gd = gap_at(c, i), gap_at(d, i)
    while b - a > refine_tol:
        if gc < gd:
            b, d, gd = d, c, gc
            c = b - GOLDEN * (b - a)
            gc = gap_at(c, i)
        else:
            a, c, gc = c, d, gd
            d = a + GOLDEN * (b - a)
            gd = gap_at(d, i)
    f_star, g_star = (c, gc) if gc < gd else (d, gd)
    bound = slope * (b - a)
    is_ac = g_star > 2.0 * bound
    msg = "avoided crossing" if is_ac else "gap consistent with a true crossing"
    return AnticrossingResult(float(f_star), float(g_star), bool(is_ac), float(bound), trace, msg)


def find_anticrossing(spec: DotSpec, level_a: str = "E3S", level_b: str = "E5S", f_range=(0.0, 300.0),
                      n_modes=DEFAULT_MODES, coupling_source: str = FIELD_ONLY,
                      band: BandModel = DEFAULT_BAND, levels: int = 6, n_coarse: int = 31,
                      xtol: float = 0.1, pair=(5, 6)) -> AnticrossingResult:
    """Anti-crossing search between two tracked z-valley levels (by id)."""
    problem = pair_problem(tuple(pair), spec, tuple(n_modes), coupling_source, band)
    k = 2 * levels + 4
    first = problem.solve(f_range[0], k)
    ids = _doublet_ids(problem.parities(first.vectors, f_range[0]))
    try:
        ia, ib = ids.index(level_a), ids.index(level_b)
    except ValueError:
        raise ValueError(f"unknown level id; available: {ids}") from None

    def solver(f):
        ep = problem.solve(f, k)
        return ep.values, ep.vectors

    return track_anticrossing(solver, ia, ib, f_range, n_coarse, xtol)


# -- cross-axis coupling -----------------------------------------------------

@dataclass
class CrossAxisResult:
    field_kv_cm: float
    ratio: float
    numerator: float
    denominator: float


def cross_axis_coupling(spec: DotSpec, n_modes=DEFAULT_MODES, coupling_source: str = FIELD_ONLY,
                        band: BandModel = DEFAULT_BAND, pair=(1, 5)) -> CrossAxisResult:
    """|<F_l|H_ll'|F_l'>| for a perpendicular pair over the (5,6) coupling."""
    a, b = valley(pair[0], spec.material), valley(pair[1], spec.material)
    if not np.isclose(a.axis @ b.axis, 0.0):
        raise ValueError("cross-axis coupling needs perpendicular valleys")
    problem = pair_problem((5, 6), spec, tuple(n_modes), coupling_source, band)
    mats = problem.mats
    F = spec.field_kv_cm
    eF = F * 1e-4

    def ground(v):
        h = mats.kinetic(v) + mats.confinement + mats.magnetic(v) + eF * mats.dipole
        return eigensolve(0.5 * (h + h.conj().T), 1).vectors[:, 0]

    ga, gb = ground(a), ground(b)
    c = coupling_constants(a, b, band)
    ker = mats.oscillatory(a.k - b.k, coupling_source == FULL)

    def at_field(parts):
        return parts[0] + eF * parts[1]

    m = c.I * at_field(ker.value())
    m = m - 1j * np.linalg.norm(c.J) * at_field(ker.left(a.axis_index))
    m = m - 1j * np.linalg.norm(c.J_prime) * at_field(ker.right(b.axis_index))
    num = abs(np.vdot(ga, m @ gb))
    den = _coupling_at(problem, F, check_order=False).delta
    ratio = 0.0 if den == 0.0 else num / den
    return CrossAxisResult(float(F), float(ratio), float(num), float(den))
