"""Run configuration: a YAML file with dotted or nested keys, plus overrides.

Every key has a default; unknown keys and wrongly typed values are rejected
before any computation starts.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from .forcing import FORCING_KINDS, ForcingSpec
from .function_spaces import Grid
from .ns_solver import SolverConfig

OUTPUT_ENV = "NSAPRIORI_OUTPUT_DIR"
DEFAULT_OUTPUT = "nsap_out"


class ConfigError(ValueError):
    pass


def _is_num(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


# key -> (default, validator, help text)
SCHEMA = {
    "grid.n": (17, lambda v: isinstance(v, int) and not isinstance(v, bool), "grid nodes per axis, 2^k+1"),
    "fluid.nu": (1.0, lambda v: _is_num(v) and v > 0, "viscosity"),
    "forcing.kind": ("manufactured", lambda v: v in FORCING_KINDS, "one of " + ", ".join(FORCING_KINDS)),
    "forcing.amplitude": (0.1, _is_num, "forcing amplitude used by solve"),
    "sweep.amplitudes": ([0.1, 0.2, 0.5, 1.0],
                         lambda v: isinstance(v, list) and len(v) > 0 and all(_is_num(a) for a in v),
                         "amplitudes for verify-estimate"),
    "norms.alpha": (0.5, lambda v: _is_num(v) and 0 < v < 1, "Hölder exponent"),
    "norms.q": (6.0, lambda v: _is_num(v) and v > 1, "Lebesgue index"),
    "solver.tol": (1e-8, lambda v: _is_num(v) and v > 0, "Picard update tolerance"),
    "solver.inner_tol": (1e-10, lambda v: _is_num(v) and v > 0, "Stokes momentum tolerance"),
    "solver.div_tol": (1e-8, lambda v: _is_num(v) and v > 0, "discrete divergence tolerance"),
    "solver.max_picard": (200, lambda v: isinstance(v, int) and not isinstance(v, bool) and v > 0,
                          "Picard iteration cap"),
    "solver.damping": (1.0, lambda v: _is_num(v) and 0 < v <= 1, "Picard damping in (0, 1]"),
    "seed": (0, lambda v: isinstance(v, int) and not isinstance(v, bool) and v >= 0, "seed for pair sampling and families"),
    "output.dir": (None, lambda v: v is None or isinstance(v, str), f"output directory (default ${OUTPUT_ENV} or ./{DEFAULT_OUTPUT})"),
    "interp.count": (50, lambda v: isinstance(v, int) and not isinstance(v, bool) and v > 0, "members of the mixed interpolation family"),
    "interp.stability_tol": (0.1, lambda v: _is_num(v) and v >= 0, "allowed relative C_emp change under refinement"),
}


def describe_schema() -> str:
    width = max(map(len, SCHEMA))
    return "\n".join(f"  {k:<{width}}  {d[0]!r:>24}  {d[2]}" for k, d in SCHEMA.items())


def _flatten(d, prefix=""):
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


@dataclass(frozen=True)
class RunConfig:
    values: dict = field(default_factory=lambda: {k: d[0] for k, d in SCHEMA.items()})

    @classmethod
    def load(cls, path=None, overrides=()) -> "RunConfig":
        raw = {}
        if path is not None:
            try:
                data = yaml.safe_load(Path(path).read_text())
            except (OSError, yaml.YAMLError) as exc:
                raise ConfigError(f"cannot read config {path}: {exc}") from exc
            if data is None:
                data = {}
            if not isinstance(data, dict):
                raise ConfigError("config must be a mapping")
            raw.update(_flatten(data))
        for item in overrides:
            if "=" not in item:
                raise ConfigError(f"override {item!r} is not KEY=VALUE")
            k, v = item.split("=", 1)
            raw[k.strip()] = yaml.safe_load(v)
        return cls().updated(raw)

    def updated(self, raw: dict) -> "RunConfig":
        vals = dict(self.values)
        for k, v in raw.items():
            if k not in SCHEMA:
                raise ConfigError(f"unknown config key {k!r}")
            if isinstance(v, str) and isinstance(SCHEMA[k][0], float):
                # YAML reads "1e6" as a string
                try:
                    v = float(v)
                except ValueError:
                    pass
            if isinstance(v, int) and not isinstance(v, bool) and isinstance(SCHEMA[k][0], float):
                v = float(v)
            if k == "sweep.amplitudes" and isinstance(v, list):
                v = [float(a) if _is_num(a) else a for a in v]
            if not SCHEMA[k][1](v):
                raise ConfigError(f"invalid value {v!r} for {k}: expected {SCHEMA[k][2]}")
            vals[k] = v
        try:
            Grid(vals["grid.n"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return replace(self, values=vals)

    def __getitem__(self, key):
        return self.values[key]

    @property
    def grid(self) -> Grid:
        return Grid(self["grid.n"])

    @property
    def solver(self) -> SolverConfig:
        return SolverConfig(
            tol=self["solver.tol"], inner_tol=self["solver.inner_tol"], div_tol=self["solver.div_tol"],
            max_picard=self["solver.max_picard"], damping=self["solver.damping"],
        )

    @property
    def forcing(self) -> ForcingSpec:
        return ForcingSpec(self["forcing.kind"], self["forcing.amplitude"])

    @property
    def output_dir(self) -> Path:
        d = self["output.dir"] or os.environ.get(OUTPUT_ENV) or DEFAULT_OUTPUT
        return Path(d)

    def as_yaml(self) -> str:
        return yaml.safe_dump(self.values, sort_keys=True)

