"""TOML experiment descriptions for the command-line front end.

All rates are in units of a reference rate gamma0 and all times in the
unit declared by the pulse widths; the config file is the single source
of truth for one run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .model import FanoParams
from .propagate import AutoTrap, DetuningPolicy, Static
from .pulses import (ConstantPulse, GaussianPulse, PulseShape, PulseTriple,
                     SharedEnvelope, default_window)


class ConfigError(ValueError):
    """Malformed or inconsistent configuration; the message names the
    offending table and key."""


def _table(data: dict, name: str, required: bool = True) -> dict | None:
    t = data.get(name)
    if t is None:
        if required:
            raise ConfigError(f"missing table [{name}]")
        return None
    if not isinstance(t, dict):
        raise ConfigError(f"[{name}] must be a table")
    return t


def _num(table: dict, key: str, where: str, default=None) -> float:
    v = table.get(key, default)
    if v is None:
        raise ConfigError(f"[{where}] missing key '{key}'")
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"[{where}] key '{key}' must be a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(f"[{where}] key '{key}' must be finite, got {v}")
    return v


def _int(table: dict, key: str, where: str, default=None) -> int:
    v = table.get(key, default)
    if v is None:
        raise ConfigError(f"[{where}] missing key '{key}'")
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"[{where}] key '{key}' must be an integer, got {v!r}")
    return v


def _str(table: dict, key: str, where: str, choices=None) -> str:
    v = table.get(key)
    if v is None:
        raise ConfigError(f"[{where}] missing key '{key}'")
    if not isinstance(v, str):
        raise ConfigError(f"[{where}] key '{key}' must be a string, got {v!r}")
    if choices is not None and v not in choices:
        raise ConfigError(
            f"[{where}] key '{key}' must be one of {sorted(choices)}, got {v!r}")
    return v


@dataclass(frozen=True)
class GridSettings:
    """Integration window and sampling controls.

    t_span = None means the window is derived from the pulse extents.
    """

    t_span: float | None = None
    tolerance: float = 1e-10
    samples: int = 512


@dataclass(frozen=True)
class SystemConfig:
    """One full experiment: couplings, pulses, detuning policy, numerics."""

    fano: FanoParams
    pulses: PulseTriple
    policy: DetuningPolicy
    grid: GridSettings
    initial_state: int = 1

    def window(self) -> tuple[float, float]:
        if self.grid.t_span is not None:
            return (-self.grid.t_span, self.grid.t_span)
        try:
            return default_window(self.pulses)
        except ValueError as e:
            raise ConfigError(f"[grid] {e}") from e

    def initial_amplitudes(self) -> tuple[float, float, float]:
        c = [0.0, 0.0, 0.0]
        c[self.initial_state - 1] = 1.0
        return tuple(c)


@dataclass(frozen=True)
class AreaScan:
    """Coincident-pulse scan over the total pulse area."""

    lo: float
    hi: float
    steps: int
    q: float
    weights: tuple[float, float, float]


@dataclass(frozen=True)
class WidthScan:
    """Scan over the pump/Stokes width T (in 1/gamma0) at fixed delay
    ratio, unit peak rates and a constant control rate, with the
    detunings locked to the trapping conditions."""

    lo: float
    hi: float
    steps: int
    tau_over_width: float
    gamma3: float


@dataclass(frozen=True)
class DetuningGrid:
    """Static-detuning scan over (delta1 + delta2, delta1 - delta2) for a
    list of constant control rates."""

    sum_lo: float
    sum_hi: float
    diff_lo: float
    diff_hi: float
    steps: int
    gamma3: tuple[float, ...]


@dataclass(frozen=True)
class Experiment:
    """Parsed configuration: the system plus any scan sections present."""

    system: SystemConfig
    area: AreaScan | None = None
    width: WidthScan | None = None
    detuning: DetuningGrid | None = None


def _parse_shape(tab: dict, where: str, envelope: GaussianPulse | None) -> PulseShape:
    kind = _str(tab, "shape", where, choices={"gaussian", "constant", "shared"})
    try:
        if kind == "gaussian":
            return GaussianPulse(gamma=_num(tab, "gamma", where),
                                 center=_num(tab, "center", where, 0.0),
                                 width=_num(tab, "width", where, 1.0))
        if kind == "constant":
            return ConstantPulse(gamma=_num(tab, "gamma", where))
        if envelope is None:
            raise ConfigError(
                f"[{where}] shape 'shared' needs a [pulses.envelope] table")
        return SharedEnvelope(gamma=_num(tab, "gamma", where), envelope=envelope)
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"[{where}] {e}") from e


def _parse_pulses(data: dict) -> PulseTriple:
    tab = _table(data, "pulses")
    env_tab = tab.get("envelope")
    envelope = None
    if env_tab is not None:
        envelope = GaussianPulse(gamma=1.0,
                                 center=_num(env_tab, "center", "pulses.envelope", 0.0),
                                 width=_num(env_tab, "width", "pulses.envelope", 1.0))
    shapes = {}
    for role in ("pump", "stokes", "control"):
        sub = tab.get(role)
        if sub is None:
            raise ConfigError(f"missing table [pulses.{role}]")
        shapes[role] = _parse_shape(sub, f"pulses.{role}", envelope)
    return PulseTriple(**shapes)


def _parse_policy(data: dict) -> DetuningPolicy:
    tab = _table(data, "detuning", required=False)
    if tab is None:
        return AutoTrap()
    kind = _str(tab, "policy", "detuning", choices={"autotrap", "static"})
    if kind == "autotrap":
        return AutoTrap()
    return Static(delta1=_num(tab, "delta1", "detuning", 0.0),
                  delta2=_num(tab, "delta2", "detuning", 0.0))


def _parse_grid(data: dict) -> GridSettings:
    tab = _table(data, "grid", required=False)
    if tab is None:
        return GridSettings()
    span = tab.get("t_span")
    if span is not None:
        span = _num(tab, "t_span", "grid")
        if span <= 0:
            raise ConfigError(f"[grid] t_span must be > 0, got {span}")
    tol = _num(tab, "tolerance", "grid", 1e-10)
    if tol <= 0:
        raise ConfigError(f"[grid] tolerance must be > 0, got {tol}")
    samples = _int(tab, "samples", "grid", 512)
    if samples < 2:
        raise ConfigError(f"[grid] samples must be >= 2, got {samples}")
    return GridSettings(t_span=span, tolerance=tol, samples=samples)


def _parse_initial(data: dict) -> int:
    tab = _table(data, "initial", required=False)
    if tab is None:
        return 1
    idx = _int(tab, "state", "initial", 1)
    if idx not in (1, 2, 3):
        raise ConfigError(f"[initial] state must be 1, 2 or 3, got {idx}")
    return idx


def _parse_range(tab: dict, where: str, lo_key: str = "min",
                 hi_key: str = "max") -> tuple[float, float]:
    lo = _num(tab, lo_key, where)
    hi = _num(tab, hi_key, where)
    if lo >= hi:
        raise ConfigError(f"[{where}] needs {lo_key} < {hi_key}, "
                          f"got ({lo}, {hi})")
    return lo, hi


def _parse_steps(tab: dict, where: str) -> int:
    steps = _int(tab, "steps", where)
    if steps < 2:
        raise ConfigError(f"[{where}] steps must be >= 2, got {steps}")
    return steps


def _parse_area(tab: dict) -> AreaScan:
    lo, hi = _parse_range(tab, "scan.area")
    if lo < 0:
        raise ConfigError(f"[scan.area] min must be >= 0, got {lo}")
    weights = tab.get("weights", [1.0, 1.0, 1.0])
    if (not isinstance(weights, list) or len(weights) != 3
            or any(isinstance(w, bool) or not isinstance(w, (int, float))
                   for w in weights)):
        raise ConfigError("[scan.area] weights must be a list of 3 numbers")
    return AreaScan(lo=lo, hi=hi, steps=_parse_steps(tab, "scan.area"),
                    q=_num(tab, "q", "scan.area"),
                    weights=tuple(float(w) for w in weights))


def _parse_width(tab: dict) -> WidthScan:
    lo, hi = _parse_range(tab, "scan.width")
    if lo <= 0:
        raise ConfigError(f"[scan.width] min must be > 0, got {lo}")
    gamma3 = _num(tab, "gamma3", "scan.width")
    if gamma3 < 0:
        raise ConfigError(f"[scan.width] gamma3 must be >= 0, got {gamma3}")
    return WidthScan(lo=lo, hi=hi, steps=_parse_steps(tab, "scan.width"),
                     tau_over_width=_num(tab, "tau_over_width", "scan.width", 0.5),
                     gamma3=gamma3)


def _parse_detuning_grid(tab: dict) -> DetuningGrid:
    sum_lo, sum_hi = _parse_range(tab, "scan.detuning", "sum_min", "sum_max")
    diff_lo, diff_hi = _parse_range(tab, "scan.detuning", "diff_min", "diff_max")
    g3 = tab.get("gamma3")
    if (not isinstance(g3, list) or not g3
            or any(isinstance(g, bool) or not isinstance(g, (int, float))
                   or g < 0 for g in g3)):
        raise ConfigError(
            "[scan.detuning] gamma3 must be a nonempty list of rates >= 0")
    return DetuningGrid(sum_lo=sum_lo, sum_hi=sum_hi,
                        diff_lo=diff_lo, diff_hi=diff_hi,
                        steps=_parse_steps(tab, "scan.detuning"),
                        gamma3=tuple(float(g) for g in g3))


def load_experiment(path: str) -> Experiment:
    """Parse a TOML config file into an Experiment.

    Raises ConfigError for schema violations; TOML syntax errors and I/O
    errors propagate as their own exception types.
    """
    with open(path, "rb") as fh:
        data = tomllib.load(fh)

    fano_tab = _table(data, "fano")
    try:
        fano = FanoParams(q12=_num(fano_tab, "q12", "fano"),
                          q13=_num(fano_tab, "q13", "fano"),
                          q23=_num(fano_tab, "q23", "fano"))
    except ValueError as e:
        raise ConfigError(f"[fano] {e}") from e

    system = SystemConfig(
        fano=fano,
        pulses=_parse_pulses(data),
        policy=_parse_policy(data),
        grid=_parse_grid(data),
        initial_state=_parse_initial(data),
    )

    scan = _table(data, "scan", required=False) or {}
    area = _parse_area(scan["area"]) if "area" in scan else None
    width = _parse_width(scan["width"]) if "width" in scan else None
    detuning = (_parse_detuning_grid(scan["detuning"])
                if "detuning" in scan else None)
    return Experiment(system=system, area=area, width=width, detuning=detuning)
