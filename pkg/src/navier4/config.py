"""Declarative experiment configuration for the command-line front end.

One YAML file describes a whole experiment: domain, the two parameter
pairs, nonlinearities, discretization sizes, solver strategy, and output
location.  Every value has a documented default and every scalar can be
overridden by the command-line flag of the same name, so a config plus a
seed is a complete, reproducible experiment record.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

import yaml

from .domain import DEFAULT_GRID, DEFAULT_TRUNCATION, Domain
from .errors import ConfigError, NonlinearityContractError
from .factorization import ParamPair
from .nonlinear import Nonlinearity

_STRATEGIES = ("auto", "picard", "newton")


@dataclass
class ExperimentConfig:
    """Validated experiment description; see navier4 --help for defaults."""

    domain: Domain = field(default_factory=lambda: Domain.unit(1))
    p1: ParamPair = field(default_factory=lambda: ParamPair(0.0, 0.0))
    p2: ParamPair = field(default_factory=lambda: ParamPair(0.0, 0.0))
    f1: dict = field(default_factory=lambda: {"kind": "power", "c": 1.0, "p": 2.0})
    f2: dict = field(default_factory=lambda: {"kind": "power", "c": 1.0, "p": 2.0})
    truncation: Optional[int] = None  # None -> per-dimension default
    grid: Optional[int] = None
    fd_grid: Optional[int] = None
    omega0_frac: float = 0.5
    strategy: str = "auto"
    tol: float = 1e-6
    max_iter: int = 100
    damping: float = 0.5
    init_amplitude: Optional[float] = None  # None -> 10 / min(L1, L2)
    seed: int = 42
    out: str = "out"
    forcing: dict = field(default_factory=lambda: {"kind": "mode", "k": [1]})
    base_dir: str = "."

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not 0.0 < self.omega0_frac < 1.0:
            raise ConfigError(f"omega0_frac must be in (0,1), got {self.omega0_frac}")
        if self.strategy not in _STRATEGIES:
            raise ConfigError(f"strategy must be one of {_STRATEGIES}, got {self.strategy!r}")
        if not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if not 0.0 < self.damping <= 1.0:
            raise ConfigError(f"damping must be in (0,1], got {self.damping}")
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter}")
        for label in ("truncation", "grid", "fd_grid"):
            v = getattr(self, label)
            if v is not None and int(v) < 1:
                raise ConfigError(f"{label} must be >= 1, got {v}")
        for label, spec in (("f1", self.f1), ("f2", self.f2), ("forcing", self.forcing)):
            if not isinstance(spec, dict) or "kind" not in spec:
                raise ConfigError(f"{label} must be a mapping with a 'kind' key")
            path = spec.get("path")
            if path is not None and not os.path.exists(self.resolve_path(path)):
                raise ConfigError(f"{label}: file not found: {path}")

    # -- derived values ----------------------------------------------------

    def resolve_path(self, path: str) -> str:
        return path if os.path.isabs(path) else os.path.join(self.base_dir, path)

    def truncation_for(self) -> int:
        return int(self.truncation) if self.truncation else DEFAULT_TRUNCATION[self.domain.dim]

    def grid_for(self) -> int:
        return int(self.grid) if self.grid else DEFAULT_GRID[self.domain.dim]

    def fd_grid_for(self) -> int:
        if self.fd_grid:
            return int(self.fd_grid)
        return {1: 256, 2: 64}.get(self.domain.dim, 16)

    def nonlinearity(self, which: int) -> Nonlinearity:
        return build_nonlinearity(self.f1 if which == 1 else self.f2, self.base_dir)

    def as_dict(self) -> dict:
        return {
            "domain": list(self.domain.lengths),
            "equations": [
                {"alpha": self.p1.alpha, "beta": self.p1.beta},
                {"alpha": self.p2.alpha, "beta": self.p2.beta},
            ],
            "f1": self.f1,
            "f2": self.f2,
            "truncation": self.truncation_for(),
            "grid": self.grid_for(),
            "fd_grid": self.fd_grid_for(),
            "omega0_frac": self.omega0_frac,
            "strategy": self.strategy,
            "tol": self.tol,
            "max_iter": self.max_iter,
            "damping": self.damping,
            "init_amplitude": self.init_amplitude,
            "seed": self.seed,
        }


def _pair_from(entry, label: str) -> ParamPair:
    if not isinstance(entry, dict):
        raise ConfigError(f"{label} must be a mapping with alpha/beta")
    try:
        return ParamPair(float(entry.get("alpha", 0.0)), float(entry.get("beta", 0.0)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{label}: bad alpha/beta: {exc}") from exc


def config_from_dict(data: dict, base_dir: str = ".") -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    known = {
        "domain", "equations", "f1", "f2", "truncation", "grid", "fd_grid",
        "omega0_frac", "strategy", "tol", "max_iter", "damping",
        "init_amplitude", "seed", "out", "forcing",
    }
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    kwargs = {"base_dir": base_dir}
    if "domain" in data:
        dom = data["domain"]
        lengths = dom.get("lengths") if isinstance(dom, dict) else dom
        try:
            kwargs["domain"] = Domain(tuple(float(a) for a in lengths))
        except Exception as exc:
            raise ConfigError(f"bad domain spec {dom!r}: {exc}") from exc
    eqs = data.get("equations")
    if eqs is not None:
        if not isinstance(eqs, (list, tuple)) or len(eqs) != 2:
            raise ConfigError("equations must list exactly two {alpha, beta} maps")
        kwargs["p1"] = _pair_from(eqs[0], "equations[0]")
        kwargs["p2"] = _pair_from(eqs[1], "equations[1]")
    for key in ("f1", "f2", "forcing"):
        if key in data:
            kwargs[key] = data[key]
    for key in ("truncation", "grid", "fd_grid", "max_iter", "seed"):
        if data.get(key) is not None:
            try:
                kwargs[key] = int(data[key])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{key} must be an integer: {exc}") from exc
    for key in ("omega0_frac", "tol", "damping", "init_amplitude"):
        if data.get(key) is not None:
            try:
                kwargs[key] = float(data[key])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{key} must be a number: {exc}") from exc
    for key in ("strategy", "out"):
        if data.get(key) is not None:
            kwargs[key] = str(data[key])
    return ExperimentConfig(**kwargs)


def load_config(path: Optional[str]) -> ExperimentConfig:
    """Parse a YAML config file; None means all defaults."""
    if path is None:
        return ExperimentConfig()
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path) as fh:
        try:
            data = yaml.safe_load(fh) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: not valid YAML: {exc}") from exc
    return config_from_dict(data, base_dir=os.path.dirname(os.path.abspath(path)))


def build_nonlinearity(spec: dict, base_dir: str = ".") -> Nonlinearity:
    """Construct a Nonlinearity from its config mapping."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("nonlinearity spec must be a mapping with a 'kind' key")
    kind = spec["kind"]
    try:
        if kind == "power":
            return Nonlinearity.power(spec.get("c", 1.0), spec.get("p", 2.0))
        if kind in ("linear", "linear_resonant"):
            return Nonlinearity.linear(spec.get("c1", 0.0), spec.get("c2", 0.0))
        if kind == "constant":
            return Nonlinearity.constant(spec.get("value", 1.0))
        if kind == "saturating":
            return Nonlinearity.saturating(spec.get("c", 1.0))
        if kind == "tabulated":
            path = spec.get("path")
            if not path:
                raise ConfigError("tabulated nonlinearity needs a 'path'")
            full = path if os.path.isabs(path) else os.path.join(base_dir, path)
            return Nonlinearity.tabulated(full)
    except ConfigError:
        raise
    except (TypeError, ValueError, NonlinearityContractError) as exc:
        raise ConfigError(f"bad nonlinearity parameters for kind {kind!r}: {exc}") from exc
    raise ConfigError(f"unknown nonlinearity kind {kind!r}")
