"""Command line driver: ``sivalley <command> --config FILE [--out DIR]``.

Each command writes CSV tables, PNG figures, the resolved configuration and
a JSON manifest into the output directory.  Wall-clock timings go to a
separate ``timing.json`` so the manifest stays byte-reproducible.

Exit codes: 0 success, 2 configuration or usage error, 3 numerical
failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import plots
from .config import ConfigError, RunConfig, load_config
from .decoherence import fig7_tables
from .output import sha256, write_csv, write_manifest
from .qubit import QubitModel, operation_budget, population_period, pulse_protocol, rabi_frequency, rabi_trace
from .solver import (EigensolverError, ValleyOrderError, coupling_sweep, cross_axis_coupling,
                     find_anticrossing, splitting_and_coupling, sweep_field)
from .two_qubit import (SWAP_VARIANTS, CoulombModel, GaussianOrbital, TwoQubitModel, coulomb_matrix_element,
                        evolve_closed_form, evolve_exact, point_charge_limit, swap_protocol, swap_time,
                        unitarity_defect)
from .units import HBAR_EVS


EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4

SPECTRUM_GRID = tuple(np.arange(0.0, 301.0, 10.0))
SPECTRUM_B = 1.5


class Report:
    """Collects output files for the manifest."""

    def __init__(self, out: Path):
        self.out = out
        self.outputs: list[dict] = []
        self.notes: list[str] = []

    def table(self, name, header, rows):
        path = self.out / name
        n = write_csv(path, header, rows)
        self.outputs.append({"file": name, "kind": "table", "rows": n, "sha256": sha256(path)})

    def figure(self, name, fn, *args, **kw):
        fn(self.out / name, *args, **kw)
        self.outputs.append({"file": name, "kind": "figure"})


def _ueV(x):
    return x * 1e6


# -- commands --------------------------------------------------------------

def cmd_coupling(cfg: RunConfig, rep: Report):
    res = coupling_sweep(cfg.dot_spec(0.0), cfg.field_grid, cfg.basis, cfg.coupling_source,
                         cfg.band(), threads=cfg.threads)
    rows = []
    for r in res:
        ratio = r.eps / r.delta if r.delta > 0 else math.nan
        rows.append([r.field_kv_cm, _ueV(r.eps), _ueV(r.delta), ratio, r.residual])
    rep.table("coupling.csv", ["field_kV_cm", "eps_ueV", "delta_ueV", "eps_over_delta", "residual_eV"], rows)
    rep.figure("coupling.png", plots.plot_coupling, [r[0] for r in rows], [r[1] for r in rows],
               [r[2] for r in rows])


def _spectrum_cfg(cfg: RunConfig) -> RunConfig:
    changes = {}
    if "field_grid" not in cfg.explicit:
        changes["field_grid"] = SPECTRUM_GRID
    if "b_field" not in cfg.explicit:
        changes["b_field"] = SPECTRUM_B
    return replace(cfg, **changes)


def cmd_spectrum(cfg: RunConfig, rep: Report):
    spec = cfg.dot_spec(0.0)
    sp = sweep_field(spec, cfg.field_grid, cfg.levels, cfg.basis, cfg.coupling_source, cfg.band(),
                     threads=cfg.threads, other_valleys=tuple(cfg.other_valleys), keep_vectors=True)
    rep.notes += sp.warnings
    rows = []
    for i, f in enumerate(sp.fields):
        for j, lid in enumerate(sp.ids):
            rows.append([float(f), lid, "5-6", sp.energies[i, j] * 1e3, sp.parity[i][j], sp.residuals[i, j]])
        for name, (pair, e) in sp.extra.items():
            rows.append([float(f), name, pair, e[i] * 1e3, "", None])
    rep.table("spectrum.csv", ["field_kV_cm", "level", "valley_pair", "energy_meV", "parity", "residual_eV"], rows)
    extra = {f"{name} ({pair})": e * 1e3 for name, (pair, e) in sp.extra.items()}
    rep.figure("spectrum.png", plots.plot_spectrum, sp.fields, sp.ids, sp.energies * 1e3, extra)

    if {"E0S", "E0A"} <= set(sp.ids):
        s, a = sp.level("E0S"), sp.level("E0A")
        rep.table("ground_doublet.csv", ["field_kV_cm", "E0S_meV", "E0A_meV", "splitting_ueV"],
                  [[float(f), s[i] * 1e3, a[i] * 1e3, _ueV(a[i] - s[i])] for i, f in enumerate(sp.fields)])

    la, lb = cfg.anticross_levels
    if la in sp.ids and lb in sp.ids:
        gap = np.abs(sp.level(la) - sp.level(lb))
        i0 = int(np.argmin(gap))
        lo, hi = max(i0 - 1, 0), min(i0 + 1, len(sp.fields) - 1)
        fine = np.linspace(sp.fields[lo], sp.fields[hi], cfg.fine_points)
        # the fine sweep inherits level identities from the coarse one at its first point
        fs = sweep_field(spec, fine, cfg.levels, cfg.basis, cfg.coupling_source, cfg.band(),
                         threads=cfg.threads, other_valleys=(), reference=(sp.ids, sp.vectors[lo]))
        rep.notes += fs.warnings
        keep = [lid for lid in sp.ids if lid[:-1] in (la[:-1], lb[:-1])]
        rep.table("anticross_region.csv", ["field_kV_cm", "level", "energy_meV", "parity"],
                  [[float(f), lid, fs.level(lid)[i] * 1e3, fs.parity[i][fs.ids.index(lid)]]
                   for i, f in enumerate(fs.fields) for lid in keep])
        rep.figure("anticross_region.png", plots.plot_levels, fs.fields,
                   {lid: fs.level(lid) * 1e3 for lid in keep})
    else:
        rep.notes.append(f"levels {la}/{lb} not among tracked ids {sp.ids}; no fine sweep")


def cmd_anticross(cfg: RunConfig, rep: Report):
    spec = cfg.dot_spec(0.0)
    la, lb = cfg.anticross_levels
    pairs = [(la, lb)]
    if la[-1] in "SA" and lb[-1] in "SA":
        other = {"S": "A", "A": "S"}
        pairs.append((la[:-1] + other[la[-1]], lb[:-1] + other[lb[-1]]))
    rows, traces = [], {}
    for a, b in pairs:
        r = find_anticrossing(spec, a, b, cfg.anticross_range, cfg.basis, cfg.coupling_source, cfg.band(),
                              cfg.levels, xtol=cfg.anticross_xtol)
        rows.append([a, b, r.field_kv_cm, None if r.gap is None else _ueV(r.gap), r.is_anticrossing,
                     _ueV(r.crossing_bound), r.message])
        traces[f"{a}/{b}"] = r.trace
    rep.table("anticross.csv", ["level_a", "level_b", "field_kV_cm", "gap_ueV", "is_anticrossing",
                                "crossing_bound_ueV", "message"], rows)
    rep.table("anticross_trace.csv", ["pair", "field_kV_cm", "gap_ueV"],
              [[k, f, _ueV(g)] for k, tr in traces.items() for f, g in tr])
    rep.figure("anticross.png", plots.plot_gap_trace, traces)


def _qubit_parameters(cfg: RunConfig, field: float) -> tuple[float, float]:
    if cfg.qubit_eps is not None and cfg.qubit_delta is not None and field == cfg.field:
        return cfg.qubit_eps, cfg.qubit_delta
    r = splitting_and_coupling(cfg.dot_spec(field), cfg.basis, cfg.coupling_source, cfg.band())
    eps = cfg.qubit_eps if cfg.qubit_eps is not None and field == cfg.field else r.eps
    return eps, r.delta


def cmd_rabi(cfg: RunConfig, rep: Report):
    eps, delta = _qubit_parameters(cfg, cfg.field)
    model = QubitModel(eps, delta, cfg.qubit_variant)
    t = np.asarray(cfg.rabi_times) * 1e-9
    p0, p1 = rabi_trace(model, t)
    rep.table("rabi.csv", ["t_ns", "p0", "p1"], [[tn, a, b] for tn, a, b in zip(cfg.rabi_times, p0, p1)])
    rep.figure("rabi.png", plots.plot_rabi, t * 1e9, p0, p1)

    low = _qubit_parameters(cfg, cfg.pulse_low_field)
    hold = 0.5 * population_period(model)
    rise = cfg.pulse_rise_time * 1e-12
    header = ["field_kV_cm", "eps_ueV", "delta_ueV", "rabi_GHz", "hbar_over_delta_ps", "low_field_kV_cm",
              "delta_low_ueV", "rise_ps", "hold_ps", "protocol_valid", "p1_after_hold"]
    if delta > 0:
        pr = pulse_protocol(low, (eps, delta), hold, rise, cfg.qubit_variant)
        row = [cfg.field, _ueV(eps), _ueV(delta), rabi_frequency(eps, delta), HBAR_EVS / delta * 1e12,
               cfg.pulse_low_field, _ueV(low[1]), cfg.pulse_rise_time, hold * 1e12, pr.valid, pr.p1]
    else:
        rep.notes.append("delta vanishes at the operating field; pulse protocol skipped")
        row = [cfg.field, _ueV(eps), 0.0, rabi_frequency(eps, delta), math.inf, cfg.pulse_low_field,
               _ueV(low[1]), cfg.pulse_rise_time, math.inf, False, None]
    rep.table("rabi_summary.csv", header, [row])


def cmd_swap(cfg: RunConfig, rep: Report):
    d = cfg.swap_delta
    rows = []
    for ratio in cfg.swap_ratio_grid:
        if ratio <= 0:
            raise ConfigError("swap_ratio_grid values must be positive")
        m = TwoQubitModel.special_case(d / ratio, d)
        t = swap_time(m, "printed-t")
        uc, ue = evolve_closed_form(m, t), evolve_exact(m, t)
        rows.append([ratio, t * HBAR_EVS, abs(uc[2, 1]) ** 2, abs(ue[2, 1]) ** 2, unitarity_defect(uc)])
    rep.table("swap.csv", ["delta_over_Delta", "t", "fidelity_closed", "fidelity_exact", "unitarity_defect"], rows)
    rep.figure("swap.png", plots.plot_swap, *zip(*[(r[0], r[2], r[3], r[4]) for r in rows]))

    vrows = []
    for v in SWAP_VARIANTS:
        s = swap_protocol(d, v)
        vrows.append([v, _ueV(s.Delta), _ueV(s.delta), s.t * HBAR_EVS, s.closed_01.real, s.closed_01.imag,
                      s.exact_01.real, s.exact_01.imag, s.closed_10.real, s.fidelity_closed, s.fidelity_exact,
                      s.unitarity_defect, s.printed_residual])
    rep.table("swap_variants.csv", ["variant", "Delta_ueV", "delta_ueV", "t_s", "closed_01_re", "closed_01_im",
                                    "exact_01_re", "exact_01_im", "closed_10_re", "fidelity_closed",
                                    "fidelity_exact", "unitarity_defect", "printed_residual"], vrows)

    cm = CoulombModel(cfg.screening_length, parity_case=cfg.parity_case, n_samples=cfg.coulomb_samples,
                      seed=cfg.seed)
    w, sep = cfg.coulomb_width, cfg.coulomb_separation
    val, err = coulomb_matrix_element(GaussianOrbital((0.0, 0.0, 0.0), w), GaussianOrbital((sep, 0.0, 0.0), w),
                                      cm, threads=cfg.threads)
    rep.table("coulomb.csv", ["separation_nm", "width_nm", "screening_nm", "parity_case", "samples", "seed",
                              "value_ueV", "stderr_ueV", "point_charge_ueV"],
              [[sep, w, cfg.screening_length, cfg.parity_case, cfg.coulomb_samples, cfg.seed, _ueV(val),
                _ueV(err), _ueV(point_charge_limit(sep, cm))]])


def cmd_phonon(cfg: RunConfig, rep: Report):
    rows = fig7_tables(cfg.phonon_dE_grid, cfg.phonon_T_grid)
    rep.table("phonon.csv", ["deltaE_ueV", "T_K", "rate_per_s", "tau_s"],
              [[r.deltaE_ueV, r.T_K, r.rate_per_s, r.tau_s] for r in rows])
    tau = np.array([r.tau_s for r in rows]).reshape(len(cfg.phonon_dE_grid), len(cfg.phonon_T_grid))
    rep.figure("phonon_vs_T.png", plots.plot_phonon, cfg.phonon_T_grid,
               {f"{de:g} ueV": tau[i] for i, de in enumerate(cfg.phonon_dE_grid)}, "T (K)")
    rep.figure("phonon_vs_dE.png", plots.plot_phonon, cfg.phonon_dE_grid,
               {f"{T:g} K": tau[:, j] for j, T in enumerate(cfg.phonon_T_grid)}, "dE (ueV)")
    # operation budget at the configured coupling, if one is given
    if cfg.qubit_delta is not None and cfg.qubit_delta > 0:
        rep.table("operation_budget.csv", ["deltaE_ueV", "T_K", "delta_ueV", "operations"],
                  [[r.deltaE_ueV, r.T_K, _ueV(cfg.qubit_delta),
                    None if math.isinf(r.tau_s) else operation_budget(cfg.qubit_delta, r.tau_s)] for r in rows])


def cmd_crosstalk(cfg: RunConfig, rep: Report):
    rows = []
    for f in cfg.field_grid:
        r = cross_axis_coupling(cfg.dot_spec(f), cfg.basis, cfg.coupling_source, cfg.band())
        rows.append([float(f), _ueV(r.numerator), _ueV(r.denominator), r.ratio])
    rep.table("crosstalk.csv", ["field_kV_cm", "delta15_ueV", "delta56_ueV", "ratio"], rows)
    rep.figure("crosstalk.png", plots.plot_crosstalk, [r[0] for r in rows], [r[3] for r in rows])


COMMANDS = {
    "spectrum": cmd_spectrum,
    "coupling": cmd_coupling,
    "anticross": cmd_anticross,
    "rabi": cmd_rabi,
    "swap": cmd_swap,
    "phonon": cmd_phonon,
    "crosstalk": cmd_crosstalk,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sivalley", description="Inter-valley coupling in a Si quantum dot.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", type=Path, help="run configuration file (defaults used if omitted)")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    p.add_argument("--seed", type=int, help="override the configured seed")
    p.add_argument("--threads", type=int, help="override the configured thread count")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
        if args.threads is not None:
            if args.threads < 1:
                raise ConfigError("--threads must be positive")
            cfg = replace(cfg, threads=args.threads)
        if args.command in ("spectrum", "anticross"):
            cfg = _spectrum_cfg(cfg)
    except ConfigError as exc:
        print(f"sivalley: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    t0 = time.perf_counter()
    try:
        args.out.mkdir(parents=True, exist_ok=True)
        rep = Report(args.out)
        (args.out / "resolved_config.txt").write_text(cfg.render())
        COMMANDS[args.command](cfg, rep)
        rep.outputs.insert(0, {"file": "resolved_config.txt", "kind": "config",
                               "sha256": sha256(args.out / "resolved_config.txt")})
        write_manifest(args.out / f"{args.command}.manifest.json", args.command, cfg.seed,
                       cfg.resolved(), rep.outputs, rep.notes)
        (args.out / "timing.json").write_text(json.dumps(
            {"command": args.command, "threads": cfg.threads,
             "wall_seconds": round(time.perf_counter() - t0, 3)}, indent=2) + "\n")
    except ConfigError as exc:
        print(f"sivalley: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (EigensolverError, ValleyOrderError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"sivalley: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"sivalley: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"sivalley: invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
