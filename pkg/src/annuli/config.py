"""Flat ``key=value`` experiment configs.

One assignment per line; ``#`` starts a comment line; blank lines are
ignored.  Rendering a parsed config and parsing it again yields an equal
config.  Every error carries the line (or ``--set`` argument) it came from.

Keys (defaults in brackets)::

    function        zoo spec string (see annuli.zoo)                 [z]
    R0              outer modulus, > 1                                [required]
    grid_count      number of radii, >= 2                             [50]
    grid_geometric  true: radii geometric in (R0 - r); false: linear  [true]
    grid_start      first radius, > 1                                 [1.05]
    grid_margin     gap between the last radius and R0, > 0           [0.05]
    a               target point, complex or inf                      [inf]
    epsilon         epsilon of the log-derivative bound, > 0          [1.0]
    lambda          exponent of the exceptional-set weight, > 0       [1.0]
    k_max           largest truncation level scanned, >= 1            [8]
    levels          truncation levels, comma separated, int or inf    [1,inf]
    lattice         torus lattice generators "w1,w2"                  [1,i]
    phi             growth-lemma test function                        [recip]
    t               radius for locate (default R0 - grid_margin)      [auto]
    seed            recorded for reproducibility                      [0]
    output          output path, "-" for stdout                       [-]
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .annulus import INF, Annulus, RadiusGrid
from .errors import ConfigError


def _parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    if t.endswith("j") and (len(t) == 1 or t[-2] in "+-"):
        t = t[:-1] + "1j"
    try:
        return complex(t)
    except ValueError:
        raise ValueError(f"not a complex number: {text!r}") from None


def _render_complex(c: complex) -> str:
    if c.imag == 0:
        return repr(c.real)
    if c.real == 0:
        return f"{c.imag!r}i"
    sign = "+" if c.imag >= 0 or math.isnan(c.imag) else "-"
    return f"{c.real!r}{sign}{abs(c.imag)!r}i"


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_level(text: str):
    t = text.strip().lower()
    if t in ("inf", "infinity"):
        return INF
    k = int(t)
    if k < 1:
        raise ValueError("truncation levels must be >= 1")
    return k


@dataclass(frozen=True)
class ExperimentConfig:
    R0: float
    function: str = "z"
    grid_count: int = 50
    grid_geometric: bool = True
    grid_start: float = 1.05
    grid_margin: float = 0.05
    a: complex | None = None  # None is the point at infinity
    epsilon: float = 1.0
    lam: float = 1.0
    k_max: int = 8
    levels: tuple = (1, INF)
    lattice: tuple = (1 + 0j, 1j)
    phi: str = "recip"
    t: float | None = None
    seed: int = 0
    output: str = "-"

    # key in the file -> attribute
    KEYMAP = {"lambda": "lam"}

    def annulus(self) -> Annulus:
        return Annulus(self.R0)

    def grid(self) -> RadiusGrid:
        build = RadiusGrid.geometric if self.grid_geometric else RadiusGrid.linear
        return build(self.annulus(), self.grid_count, self.grid_start, self.grid_margin)

    @property
    def locate_radius(self) -> float:
        return self.t if self.t is not None else self.R0 - self.grid_margin

    def items(self) -> list[tuple[str, str]]:
        """Canonical ``(key, rendered value)`` pairs in file order."""
        out = [("function", self.function), ("R0", repr(self.R0)), ("grid_count", str(self.grid_count)),
               ("grid_geometric", "true" if self.grid_geometric else "false"),
               ("grid_start", repr(self.grid_start)), ("grid_margin", repr(self.grid_margin)),
               ("a", "inf" if self.a is None else _render_complex(self.a)),
               ("epsilon", repr(self.epsilon)), ("lambda", repr(self.lam)), ("k_max", str(self.k_max)),
               ("levels", ",".join("inf" if k == INF else str(k) for k in self.levels)),
               ("lattice", ",".join(_render_complex(w) for w in self.lattice)),
               ("phi", self.phi), ("t", "auto" if self.t is None else repr(self.t)),
               ("seed", str(self.seed)), ("output", self.output)]
        return out

    def render(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in self.items())

    def with_overrides(self, assignments: list[str]) -> "ExperimentConfig":
        values = dict(self.items())
        for i, text in enumerate(assignments, 1):
            key, value = _split_assignment(text, f"--set argument {i}")
            values[key] = value
        return _build(values, {k: f"--set {k}" for k in values})


_PARSERS = {
    "function": lambda v: v.strip(),
    "R0": float,
    "grid_count": int,
    "grid_geometric": _parse_bool,
    "grid_start": float,
    "grid_margin": float,
    "a": lambda v: None if v.strip().lower() in ("inf", "infinity") else _parse_complex(v),
    "epsilon": float,
    "lambda": float,
    "k_max": int,
    "levels": lambda v: tuple(sorted({_parse_level(x) for x in v.split(",") if x.strip()})),
    "lattice": lambda v: tuple(_parse_complex(x) for x in v.split(",")),
    "phi": lambda v: v.strip(),
    "t": lambda v: None if v.strip().lower() == "auto" else float(v),
    "seed": int,
    "output": lambda v: v.strip(),
}


def _split_assignment(line: str, where: str) -> tuple[str, str]:
    if "=" not in line:
        raise ConfigError(f"expected key=value, got {line.strip()!r}", position=where)
    key, value = line.split("=", 1)
    key = key.strip()
    if key not in _PARSERS:
        raise ConfigError(f"unknown key {key!r}", position=where)
    return key, value.strip()


def _check(cfg: ExperimentConfig, where: dict):
    def bad(key, msg):
        raise ConfigError(msg, position=where.get(key, key))

    if not (math.isfinite(cfg.R0) and cfg.R0 > 1):
        bad("R0", "R0 must be a finite number > 1")
    if cfg.grid_count < 2:
        bad("grid_count", "grid_count must be >= 2")
    if not (cfg.grid_margin > 0):
        bad("grid_margin", "grid_margin must be > 0")
    if not (1 < cfg.grid_start < cfg.R0 - cfg.grid_margin):
        bad("grid_start", "grid_start must satisfy 1 < grid_start < R0 - grid_margin")
    if not cfg.epsilon > 0:
        bad("epsilon", "epsilon must be > 0")
    if not cfg.lam > 0:
        bad("lambda", "lambda must be > 0")
    if cfg.k_max < 1:
        bad("k_max", "k_max must be >= 1")
    if not cfg.levels:
        bad("levels", "at least one truncation level is required")
    if len(cfg.lattice) != 2:
        bad("lattice", "lattice needs exactly two generators")
    w1, w2 = cfg.lattice
    if w1 == 0 or abs((w2 / w1).imag) < 1e-12 * abs(w2 / w1):
        bad("lattice", "lattice generators must be R-linearly independent")
    if cfg.t is not None and not (1 < cfg.t <= cfg.R0):
        bad("t", "t must satisfy 1 < t <= R0")
    if not cfg.function:
        bad("function", "function spec is empty")


def _build(values: dict, where: dict) -> ExperimentConfig:
    if "R0" not in values:
        raise ConfigError("missing required key 'R0'", position="config")
    kwargs = {}
    for key, text in values.items():
        try:
            kwargs[ExperimentConfig.KEYMAP.get(key, key)] = _PARSERS[key](text)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad value for {key}: {exc}", position=where.get(key, key)) from None
    cfg = ExperimentConfig(**kwargs)
    _check(cfg, where)
    return cfg


def parse_config(text: str) -> ExperimentConfig:
    """Parse a config file body."""
    values, where = {}, {}
    for n, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        key, value = _split_assignment(s, f"line {n}")
        if key in values:
            raise ConfigError(f"duplicate key {key!r} (first set on {where[key]})", position=f"line {n}")
        values[key] = value
        where[key] = f"line {n}"
    return _build(values, where)


def default_config(**kwargs) -> ExperimentConfig:
    cfg = ExperimentConfig(**kwargs)
    _check(cfg, {})
    return cfg


__all__ = ["ExperimentConfig", "parse_config", "default_config"]
