"""Simulation configuration: plain ``key = value`` files plus command-line overrides."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from .chain_complex import PLANES, LatticeError, check_period

INTEGRATORS = ("euler", "rk4", "midpoint")
INIT_RECIPES = ("random", "single_mode", "taylor_green")
SCALAR_MODES = ("float", "rational")
GREEN_METHODS = ("cg", "closed_form")


class ConfigError(ValueError):
    pass


def _parse_int(key, text):
    try:
        return int(text, 0)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None


def _parse_float(key, text):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}") from None


def _parse_choice(choices):
    def parse(key, text):
        if text not in choices:
            raise ConfigError(f"{key}: expected one of {', '.join(choices)}, got {text!r}")
        return text
    return parse


def _parse_kvec(key, text):
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != 3:
        raise ConfigError(f"{key}: expected three integers like '1,0,0', got {text!r}")
    return tuple(_parse_int(key, p) for p in parts)


@dataclass(frozen=True)
class SimConfig:
    N: int = 5
    dt: float = 1e-3
    steps: int = 100
    integrator: str = "midpoint"
    midpoint_tol: float = 1e-10
    midpoint_max_iter: int = 50
    seed: int = 0
    init: str = "random"
    init_k: tuple = (1, 0, 0)
    init_orientation: str = "xy"
    diag_every: int = 1
    snapshot_every: int = 0
    out_dir: Path = field(default=Path("out"))
    scalar_mode: str = "float"
    green_method: str = "cg"

    def __post_init__(self):
        try:
            check_period(self.N)
        except LatticeError as exc:
            raise ConfigError(f"N: {exc}") from None
        if not self.dt > 0:
            raise ConfigError(f"dt: must be positive, got {self.dt}")
        if self.steps < 0:
            raise ConfigError(f"steps: must be non-negative, got {self.steps}")
        if not self.midpoint_tol > 0:
            raise ConfigError(f"midpoint_tol: must be positive, got {self.midpoint_tol}")
        if self.midpoint_max_iter < 1:
            raise ConfigError("midpoint_max_iter: must be at least 1")
        if self.diag_every < 1:
            raise ConfigError("diag_every: must be at least 1")
        if self.snapshot_every < 0:
            raise ConfigError("snapshot_every: must be non-negative (0 disables)")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed: must fit in an unsigned 64-bit integer")
        for key, choices in (
            ("integrator", INTEGRATORS),
            ("init", INIT_RECIPES),
            ("scalar_mode", SCALAR_MODES),
            ("green_method", GREEN_METHODS),
            ("init_orientation", PLANES),
        ):
            _parse_choice(choices)(key, getattr(self, key))


_PARSERS = {
    "N": _parse_int,
    "dt": _parse_float,
    "steps": _parse_int,
    "integrator": _parse_choice(INTEGRATORS),
    "midpoint_tol": _parse_float,
    "midpoint_max_iter": _parse_int,
    "seed": _parse_int,
    "init": _parse_choice(INIT_RECIPES),
    "init_k": _parse_kvec,
    "init_orientation": _parse_choice(PLANES),
    "diag_every": _parse_int,
    "snapshot_every": _parse_int,
    "out_dir": lambda key, text: Path(text),
    "scalar_mode": _parse_choice(SCALAR_MODES),
    "green_method": _parse_choice(GREEN_METHODS),
}

CONFIG_KEYS = tuple(_PARSERS)


def parse_text(text: str, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key] = _convert(key, value, f"{source}:{lineno}")
    return values


def _convert(key, value, where):
    if key not in _PARSERS:
        raise ConfigError(f"{where}: unknown key {key!r}")
    return _PARSERS[key](key, value)


def parse_config(overrides=(), file=None) -> SimConfig:
    """Build a validated config from an optional file and ``(key, value)`` overrides.

    Overrides win over file values.
    """
    values = {}
    if file is not None:
        path = Path(file)
        values.update(parse_text(path.read_text(), str(path)))
    for key, value in overrides:
        values[key] = _convert(key, value, "command line")
    return SimConfig(**values)


def format_config(cfg: SimConfig) -> str:
    lines = []
    for f in dataclasses.fields(cfg):
        v = getattr(cfg, f.name)
        if f.name == "init_k":
            v = ",".join(str(c) for c in v)
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"
