"""Run configuration: ``key = value [unit]`` lines, ``#`` comments.

Values may be a scalar (``400 kV/cm``), a list (``0, 100, 200 kV/cm``) or
an inclusive range ``start:stop:step unit``.  Unknown keys and units of the
wrong dimension are rejected.
"""

from __future__ import annotations

import re
import dataclasses
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .dot import DotSpec
from .units import SILICON, UnitError, convert, dimension
from .valley import BandModel


class ConfigError(ValueError):
    pass


# key -> (kind, canonical unit or None)
#   kinds: float, floats (list/range), int, ints, str, strs
_SCHEMA: dict[str, tuple[str, str | None]] = {
    "dims": ("floats", "nm"),
    "barrier_mode": ("str", None),
    "barrier_height": ("float", "eV"),
    "padding": ("float", "nm"),
    "basis": ("ints", None),
    "field": ("float", "kV/cm"),
    "field_grid": ("floats", "kV/cm"),
    "b_field": ("float", "T"),
    "coupling_source": ("str", None),
    "magnetic_gauge": ("str", None),
    "band_T": ("float", "eV*nm"),
    "band_gap": ("float", "eV"),
    "k_fraction": ("float", None),
    "m_l": ("float", None),
    "m_t": ("float", None),
    "levels": ("int", None),
    "other_valleys": ("ints", None),
    "anticross_levels": ("strs", None),
    "anticross_range": ("floats", "kV/cm"),
    "anticross_xtol": ("float", "kV/cm"),
    "fine_points": ("int", None),
    "qubit_variant": ("str", None),
    "qubit_eps": ("float", "eV"),
    "qubit_delta": ("float", "eV"),
    "rabi_times": ("floats", "ns"),
    "pulse_low_field": ("float", "kV/cm"),
    "pulse_rise_time": ("float", "ps"),
    "swap_delta": ("float", "eV"),
    "swap_ratio_grid": ("floats", None),
    "coulomb_separation": ("float", "nm"),
    "coulomb_width": ("float", "nm"),
    "screening_length": ("float", "nm"),
    "coulomb_samples": ("int", None),
    "parity_case": ("str", None),
    "phonon_dE_grid": ("floats", "ueV"),
    "phonon_T_grid": ("floats", "K"),
    "seed": ("int", None),
    "threads": ("int", None),
}


@dataclass
class RunConfig:
    dims: tuple[float, ...] = (8.0, 12.0, 6.0)
    barrier_mode: str = "hard-wall"
    barrier_height: float = SILICON.barrier_eV
    padding: float = 2.0
    basis: tuple[int, ...] = (8, 10, 12)
    field: float = 400.0
    field_grid: tuple[float, ...] = tuple(np.arange(0.0, 501.0, 20.0))
    b_field: float = 0.0
    coupling_source: str = "field-only"
    magnetic_gauge: str = "printed"
    band_T: float = BandModel().T
    band_gap: float = BandModel().eps_g
    k_fraction: float = SILICON.valley_fraction
    m_l: float = SILICON.m_l
    m_t: float = SILICON.m_t
    levels: int = 6
    other_valleys: tuple[int, ...] = (1, 3)
    anticross_levels: tuple[str, ...] = ("E3S", "E5S")
    anticross_range: tuple[float, ...] = (0.0, 300.0)
    anticross_xtol: float = 0.1
    fine_points: int = 41
    qubit_variant: str = "printed"
    qubit_eps: float | None = None
    qubit_delta: float | None = None
    rabi_times: tuple[float, ...] = tuple(np.linspace(0.0, 0.5, 201))
    pulse_low_field: float = 100.0
    pulse_rise_time: float = 50.0
    swap_delta: float = 1e-6
    swap_ratio_grid: tuple[float, ...] = tuple(np.round(np.linspace(0.001, 0.2, 200), 6))
    coulomb_separation: float = 30.0
    coulomb_width: float = 0.01
    screening_length: float = 10.0
    coulomb_samples: int = 1_000_000
    parity_case: str = "same"
    phonon_dE_grid: tuple[float, ...] = (30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0)
    phonon_T_grid: tuple[float, ...] = (0.05, 0.1, 0.15, 0.2, 0.25, 0.3)
    seed: int = 0
    threads: int = 1
    explicit: frozenset = dataclasses.field(default_factory=frozenset, repr=False)

    # -- derived objects ---------------------------------------------------
    def material(self):
        return replace(SILICON, m_l=self.m_l, m_t=self.m_t, valley_fraction=self.k_fraction,
                       barrier_eV=self.barrier_height)

    def dot_spec(self, field_kv_cm: float | None = None) -> DotSpec:
        return DotSpec(dims=tuple(self.dims), barrier_mode=self.barrier_mode,
                       barrier_eV=self.barrier_height, padding=self.padding,
                       field_kv_cm=self.field if field_kv_cm is None else field_kv_cm,
                       b_tesla=self.b_field, magnetic_gauge=self.magnetic_gauge,
                       material=self.material())

    def band(self) -> BandModel:
        return BandModel(self.band_T, self.band_gap)

    def resolved(self) -> dict:
        """Plain dict of every result-affecting setting in canonical units.

        ``threads`` only changes wall time and is left out, so manifests do
        not depend on it.
        """
        out = {}
        for f in fields(self):
            if f.name in ("explicit", "threads"):
                continue
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = [x.item() if hasattr(x, "item") else x for x in v]
            out[f.name] = {"value": v, "unit": _SCHEMA[f.name][1]}
        return out

    def render(self) -> str:
        """Config text that parses back to this configuration."""
        lines = []
        for key, entry in self.resolved().items():
            v, unit = entry["value"], entry["unit"]
            if v is None:
                continue
            text = ", ".join(_fmt(x) for x in v) if isinstance(v, list) else _fmt(v)
            lines.append(f"{key} = {text}" + (f" {unit}" if unit else ""))
        return "\n".join(lines) + "\n"


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_VALUE_RE = re.compile(rf"^(?P<body>(?:{_NUM}\s*[,:]\s*)*{_NUM})\s*(?P<unit>\S.*)?$")


def _parse_numbers(key: str, text: str, unit_want: str | None, lineno: int) -> list[float]:
    m = _VALUE_RE.match(text)
    if not m:
        raise ConfigError(f"line {lineno}: cannot parse numeric value for {key!r}: {text!r}")
    body, unit = m.group("body"), (m.group("unit") or "").strip()
    if ":" in body:
        parts = [float(p) for p in body.split(":")]
        if len(parts) != 3 or "," in body:
            raise ConfigError(f"line {lineno}: range for {key!r} must be start:stop:step")
        start, stop, step = parts
        if step <= 0:
            raise ConfigError(f"line {lineno}: range step must be positive")
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        nums = [start + i * step for i in range(max(n, 0))]
    else:
        nums = [float(p) for p in body.split(",")]
    if unit_want is None:
        if unit:
            raise ConfigError(f"line {lineno}: {key!r} is dimensionless, got unit {unit!r}")
        return nums
    if not unit:
        raise ConfigError(f"line {lineno}: {key!r} needs a unit of {dimension(unit_want)}")
    try:
        return [convert(x, unit, unit_want) for x in nums]
    except UnitError as exc:
        raise ConfigError(f"line {lineno}: {key!r}: {exc}") from None


def parse_config(text: str) -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, text_val = (s.strip() for s in line.split("=", 1))
        if key not in _SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        kind, unit = _SCHEMA[key]
        if kind in ("str", "strs"):
            items = [s.strip() for s in text_val.split(",") if s.strip()]
            if not items:
                raise ConfigError(f"line {lineno}: empty value for {key!r}")
            if kind == "str" and len(items) != 1:
                raise ConfigError(f"line {lineno}: {key!r} takes a single value")
            values[key] = items[0] if kind == "str" else tuple(items)
            continue
        nums = _parse_numbers(key, text_val, unit, lineno)
        if kind in ("int", "ints"):
            if any(x != int(x) for x in nums):
                raise ConfigError(f"line {lineno}: {key!r} must be integer")
            nums = [int(x) for x in nums]
        if kind in ("float", "int"):
            if len(nums) != 1:
                raise ConfigError(f"line {lineno}: {key!r} takes a single value")
            values[key] = nums[0]
        else:
            if not nums:
                raise ConfigError(f"line {lineno}: empty grid for {key!r}")
            values[key] = tuple(nums)
    cfg = RunConfig(**values, explicit=frozenset(values))
    validate(cfg)
    return cfg


def validate(cfg: RunConfig):
    if len(cfg.dims) != 3 or min(cfg.dims) <= 0:
        raise ConfigError("dims needs three positive lengths")
    if len(cfg.basis) != 3 or min(cfg.basis) < 1:
        raise ConfigError("basis needs three positive mode counts")
    if cfg.fine_points < 3:
        raise ConfigError("fine_points must be at least 3")
    if cfg.levels < 1:
        raise ConfigError("levels must be positive")
    if cfg.threads < 1:
        raise ConfigError("threads must be positive")
    if len(cfg.anticross_levels) != 2:
        raise ConfigError("anticross_levels needs two level ids")
    if len(cfg.anticross_range) != 2 or cfg.anticross_range[0] >= cfg.anticross_range[1]:
        raise ConfigError("anticross_range needs two increasing fields")
    choices = {"coupling_source": ("field-only", "full"), "qubit_variant": ("printed", "detuning"),
               "parity_case": ("same", "opposite-preserved", "opposite-changed")}
    for key, allowed in choices.items():
        if getattr(cfg, key) not in allowed:
            raise ConfigError(f"{key} must be one of {allowed}, got {getattr(cfg, key)!r}")
    try:
        cfg.dot_spec()
        cfg.band()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)
