"""Run configurations for the command-line tools, with field-level validation."""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np


class ConfigError(ValueError):
    def __init__(self, message, field=None, line=None, source=None):
        where = []
        if source is not None:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = ", ".join(where) + ": " if where else ""
        super().__init__(prefix + message)
        self.field = field
        self.line = line


def _positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ConfigError(f"must be a positive number, got {value!r}", field=name)


@dataclass
class JCConfig:
    omega: float = 1.0
    gamma: float = 0.05
    alpha: float = 6.0
    n_cut: int | None = None
    t_max: float = 4.0
    dt: float = 0.001
    gauge: str = "fixed"
    output: str = "."

    def validate(self):
        _positive("omega", self.omega)
        _positive("t_max", self.t_max)
        _positive("dt", self.dt)
        if not (math.isfinite(self.gamma) and self.gamma >= 0):
            raise ConfigError(f"must be >= 0, got {self.gamma!r}", field="gamma")
        if not math.isfinite(self.alpha):
            raise ConfigError(f"must be finite, got {self.alpha!r}", field="alpha")
        if self.n_cut is not None and (int(self.n_cut) != self.n_cut or self.n_cut < 2):
            raise ConfigError(f"must be an integer >= 2, got {self.n_cut!r}", field="n_cut")
        if self.gauge not in ("fixed", "raw"):
            raise ConfigError(f"must be 'fixed' or 'raw', got {self.gauge!r}", field="gauge")
        return self


PRESET_KEYS = {"omega": float, "gamma": float, "alpha": float, "n_cut": int, "t_max": float, "dt": float}


def read_preset(path):
    """Parse a ``key = value`` preset file into a dict of typed values."""
    values = {}
    path = Path(path)
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno, source=path)
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in PRESET_KEYS:
            raise ConfigError(f"unknown key (allowed: {', '.join(PRESET_KEYS)})", field=key, line=lineno, source=path)
        try:
            values[key] = PRESET_KEYS[key](val)
        except ValueError:
            raise ConfigError(f"cannot parse {val!r} as {PRESET_KEYS[key].__name__}",
                              field=key, line=lineno, source=path) from None
    return values


def write_preset(path, cfg):
    keys = [f.name for f in fields(cfg) if f.name in PRESET_KEYS]
    lines = [f"{k} = {getattr(cfg, k)}" for k in keys if getattr(cfg, k) is not None]
    Path(path).write_text("\n".join(lines) + "\n")


@dataclass
class TheoremBConfig:
    n_I: int = 2
    n_II: int = 2
    trials: int = 100
    interaction_free: int = 0
    seed: int = 0
    workers: int = 1
    output: str = "."

    def validate(self):
        for name in ("n_I", "n_II"):
            if getattr(self, name) < 2:
                raise ConfigError("must be >= 2", field=name)
        if self.n_I * self.n_II > 36:
            raise ConfigError(f"n_I * n_II must be <= 36, got {self.n_I * self.n_II}", field="n_I")
        if self.trials < 0 or self.interaction_free < 0:
            raise ConfigError("trial counts must be non-negative", field="trials")
        if self.workers < 1:
            raise ConfigError("must be >= 1", field="workers")
        return self


@dataclass
class CompareConfig:
    l1: str
    l2: str
    w: str
    init_i: str
    init_ii: str
    t_max: float = 1.0
    dt: float = 0.01
    gauge: str = "fixed"
    output: str = "."

    def validate(self):
        _positive("t_max", self.t_max)
        _positive("dt", self.dt)
        if self.gauge not in ("fixed", "raw"):
            raise ConfigError(f"must be 'fixed' or 'raw', got {self.gauge!r}", field="gauge")
        return self


def read_matrix(path):
    """Plain-text complex matrix: one row per line, whitespace-separated entries like ``0.5-1j``."""
    path = Path(path)
    rows = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([complex(tok) for tok in line.split()])
        except ValueError:
            raise ConfigError(f"cannot parse entries {line!r}", line=lineno, source=path) from None
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ConfigError("matrix rows are empty or ragged", source=path)
    return np.array(rows, dtype=complex)


def read_vector(path):
    return read_matrix(path).reshape(-1)


def write_matrix(path, a):
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    with open(path, "w") as fh:
        for row in a:
            fh.write(" ".join(f"{z.real:.17g}{z.imag:+.17g}j" for z in row) + "\n")
