"""Report figures, rendered off-screen to PNG next to the CSV tables."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# no timestamps or version strings, so identical data gives identical bytes
_META = {"Software": None}


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata=_META)
    plt.close(fig)
    return Path(path)


def plot_coupling(path, fields, eps_ueV, delta_ueV) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.6))
    ax.plot(fields, eps_ueV, "o-", ms=3, label="valley splitting")
    ax.plot(fields, delta_ueV, "s-", ms=3, label="inter-valley coupling")
    ax.set_xlabel("F (kV/cm)")
    ax.set_ylabel("energy (ueV)")
    ax.legend(frameon=False)
    return _save(fig, path)


def plot_spectrum(path, fields, ids, energies_meV, extra: dict | None = None) -> Path:
    fig, ax = plt.subplots(figsize=(5.5, 4.2))
    for j, lid in enumerate(ids):
        ls = "-" if lid.endswith("S") else "--"
        ax.plot(fields, energies_meV[:, j], ls, lw=1, label=lid)
    for name, e in (extra or {}).items():
        ax.plot(fields, e, ":", lw=1.2, color="k", label=name)
    ax.set_xlabel("F (kV/cm)")
    ax.set_ylabel("E (meV)")
    ax.legend(frameon=False, fontsize=6, ncol=2)
    return _save(fig, path)


def plot_levels(path, fields, curves: dict, ylabel="E (meV)") -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.6))
    for name, y in curves.items():
        ax.plot(fields, y, lw=1, label=name)
    ax.set_xlabel("F (kV/cm)")
    ax.set_ylabel(ylabel)
    ax.legend(frameon=False, fontsize=7)
    return _save(fig, path)


def plot_gap_trace(path, traces: dict) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.6))
    for name, tr in traces.items():
        tr = sorted(tr)
        ax.semilogy([t[0] for t in tr], [max(t[1], 1e-12) * 1e6 for t in tr], ".-", ms=2, lw=0.8, label=name)
    ax.set_xlabel("F (kV/cm)")
    ax.set_ylabel("|E_b - E_a| (ueV)")
    ax.legend(frameon=False, fontsize=7)
    return _save(fig, path)


def plot_rabi(path, t_ns, p0, p1) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.plot(t_ns, p0, label="P0")
    ax.plot(t_ns, p1, label="P1")
    ax.set_xlabel("t (ns)")
    ax.set_ylabel("population")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(frameon=False)
    return _save(fig, path)


def plot_swap(path, ratio, f_closed, f_exact, defect) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.6))
    ax.plot(ratio, f_closed, label="closed form |<01|U|10>|^2")
    ax.plot(ratio, f_exact, label="exact |<01|U|10>|^2")
    ax.plot(ratio, defect, "--", label="closed-form unitarity defect")
    ax.set_xlabel("delta / Delta")
    ax.legend(frameon=False, fontsize=7)
    return _save(fig, path)


def plot_phonon(path, x, series: dict, xlabel) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.6))
    for name, y in series.items():
        ax.semilogy(x, y, "o-", ms=3, label=name)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("tau (s)")
    ax.legend(frameon=False, fontsize=7)
    return _save(fig, path)


def plot_crosstalk(path, fields, ratio) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.2))
    r = np.asarray(ratio, dtype=float)
    ax.semilogy(fields, np.where(r > 0, r, np.nan), "o-", ms=3)
    ax.set_xlabel("F (kV/cm)")
    ax.set_ylabel("|Delta_15| / Delta_56")
    return _save(fig, path)
