"""Parameter presets and the flat ``key = value`` run configuration.

Rates are angular frequencies (rad/s), written as ``2*pi*Hz`` products.
"""
from __future__ import annotations

import math

from .laser_clamp import CavityParams
from .medium import MediumParams
from .pump_probe import PumpProbeParams, effective_rabi

TWO_PI = 2.0 * math.pi

LASER_KEYS = ("gamma", "nu0", "q", "gq")
PROBE_KEYS = ("gamma", "gamma_ba", "r_op", "delta_pump", "omega1", "gain_g")
RUN_KEYS = ("grid_min", "grid_max", "grid_n", "kk_window", "seed")

_FIG4_BASE = {"gamma": TWO_PI * 1e7, "gamma_ba": TWO_PI * 5e6, "gain_g": 1.0}

PRESETS = {
    "fig1": {"gamma": TWO_PI * 1e9, "nu0": TWO_PI * 3.8e14, "q": 3.8e8, "gq": 3.0},
    "fig4a": {**_FIG4_BASE, "r_op": 0.0, "delta_pump": 0.0, "omega1": TWO_PI * 36e6},
    "fig4b": {**_FIG4_BASE, "r_op": 2 * TWO_PI * 1e7, "delta_pump": 0.0,
              "omega1": TWO_PI * 36e6},
    "fig4c": {**_FIG4_BASE, "r_op": 0.0, "delta_pump": TWO_PI * 2e7,
              "omega1": TWO_PI * 66e6},
    "fig4d": {**_FIG4_BASE, "r_op": 2 * TWO_PI * 1e7, "delta_pump": TWO_PI * 2e7,
              "omega1": TWO_PI * 66e6},
}

FIG1_GRID_N, FIG4_GRID_N, KK_GRID_N = 4001, 4096, 2 ** 14


class ConfigError(ValueError):
    pass


def kind_of(cfg):
    """``"laser"`` or ``"probe"`` depending on which parameter set is present."""
    if "q" in cfg or "gq" in cfg or "nu0" in cfg:
        return "laser"
    return "probe"


def parse_config(text):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    cfg = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key == "preset":
            cfg[key] = value
            continue
        try:
            cfg[key] = int(value) if key in ("grid_n", "seed") else float(value)
        except ValueError:
            raise ConfigError(f"line {lineno}: {key} needs a number, got {value!r}")
    return cfg


def dump_config(cfg):
    lines = []
    for key in sorted(cfg):
        v = cfg[key]
        lines.append(f"{key} = {v if isinstance(v, (str, int)) else repr(float(v))}")
    return "\n".join(lines) + "\n"


def merge(preset=None, file_cfg=None, overrides=None):
    """Preset values, then config-file values, then explicit overrides."""
    cfg = {}
    file_cfg = dict(file_cfg or {})
    name = preset or file_cfg.pop("preset", None)
    file_cfg.pop("preset", None)
    if name is not None:
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        cfg.update(PRESETS[name])
        cfg["preset"] = name
    cfg.update(file_cfg)
    cfg.update({k: v for k, v in (overrides or {}).items() if v is not None})
    allowed = set(LASER_KEYS) | set(PROBE_KEYS) | set(RUN_KEYS) | {"preset"}
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")
    return cfg


def laser_params(cfg):
    missing = [k for k in LASER_KEYS if k not in cfg]
    if missing:
        raise ConfigError(f"laser run needs {missing}")
    q, gq = float(cfg["q"]), float(cfg["gq"])
    if q <= 0:
        raise ConfigError("q must be > 0")
    m = MediumParams(float(cfg["gamma"]), float(cfg["nu0"]), gq / q)
    return m, CavityParams(q, float(cfg["nu0"]))


def probe_params(cfg):
    missing = [k for k in PROBE_KEYS if k not in cfg and k != "gain_g"]
    if missing:
        raise ConfigError(f"probe run needs {missing}")
    return PumpProbeParams(float(cfg["gamma"]), float(cfg["gamma_ba"]), float(cfg["r_op"]),
                           float(cfg["delta_pump"]), float(cfg["omega1"]),
                           float(cfg.get("gain_g", 1.0)))


def grid_spec(cfg, purpose):
    """``(min, max, n)`` of the detuning grid for a run.

    ``purpose`` is ``"spectrum"`` or ``"kk"``. Explicit grid keys win.
    """
    if kind_of(cfg) == "laser":
        gam = float(cfg["gamma"])
        lo, hi, n = ((-3 * gam, 3 * gam, FIG1_GRID_N) if purpose == "spectrum"
                     else (-10 * gam, 10 * gam, KK_GRID_N))
    else:
        p = probe_params(cfg)
        if purpose == "spectrum":
            span = 5 * effective_rabi(p)
            if span == 0:
                span = 5 * p.eta
            lo, hi, n = -span, span, FIG4_GRID_N
        else:
            span = float(cfg.get("kk_window", 100.0)) * p.eta
            lo, hi, n = -span, span, KK_GRID_N
    lo = float(cfg.get("grid_min", lo))
    hi = float(cfg.get("grid_max", hi))
    n = int(cfg.get("grid_n", n))
    if not (hi > lo and n >= 5):
        raise ConfigError("grid needs grid_max > grid_min and grid_n >= 5")
    return lo, hi, n
