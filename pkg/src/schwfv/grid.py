"""Uniform radial grid on [2M, L] and run configuration."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

# Two-point Gauss-Legendre nodes as offsets in units of dr from the left interface.
GAUSS2_OFFSETS = (0.5 - 0.5 / math.sqrt(3.0), 0.5 + 0.5 / math.sqrt(3.0))

MODELS = ("burgers", "euler")
BURGERS_FLUXES = ("godunov",)
EULER_FLUXES = ("roe_type", "lax_friedrichs")
AVERAGING_RULES = ("midpoint", "gauss2", "exact")
RIGHT_BCS = ("transmissive", "stationary_extension")


class ConfigError(ValueError):
    """Invalid run configuration."""


class SolverAbort(RuntimeError):
    """Numerical failure during a run (NaN, invalid state, ...)."""

    def __init__(self, message, *, cell=None, stage=None, step=None, t=None):
        super().__init__(message)
        self.cell = cell
        self.stage = stage
        self.step = step
        self.t = t

    def __str__(self):
        parts = [super().__str__()]
        for name in ("cell", "stage", "step", "t"):
            val = getattr(self, name)
            if val is not None:
                parts.append(f"{name}={val}")
        return " ".join(parts)


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform mesh of n cells on [2M, L]; r = 2M is the horizon."""

    M: float
    L: float
    n: int
    dr: float
    interfaces: np.ndarray  # (n+1,), interfaces[0] == 2M, interfaces[-1] == L exactly
    centers: np.ndarray  # (n,), r_i = (r_{i-1/2} + r_{i+1/2})/2

    def gauss_nodes(self):
        """Per-cell two-point Gauss nodes, shape (n, 2)."""
        offs = np.asarray(GAUSS2_OFFSETS)
        return self.interfaces[:-1, None] + self.dr * offs[None, :]

    def extended_centers(self, ng=2):
        """Cell centers with ng ghost cells appended on each side."""
        left = self.centers[0] - self.dr * np.arange(ng, 0, -1)
        right = self.centers[-1] + self.dr * np.arange(1, ng + 1)
        return np.concatenate([left, self.centers, right])

    def extended_gauss_nodes(self, ng=2):
        """Per-cell Gauss nodes for interior plus ng ghost cells per side, (n+2ng, 2)."""
        offs = np.asarray(GAUSS2_OFFSETS)
        lefts = np.concatenate(
            [
                self.interfaces[0] - self.dr * np.arange(ng, 0, -1),
                self.interfaces[:-1],
                self.interfaces[-1] + self.dr * np.arange(0, ng),
            ]
        )
        return lefts[:, None] + self.dr * offs[None, :]


def build_grid(M: float, L: float, n: int) -> Grid:
    if M <= 0.0:
        raise ConfigError(f"M must be positive, got {M}")
    if L <= 2.0 * M:
        raise ConfigError(f"domain right end L={L} must exceed the horizon 2M={2 * M}")
    if n < 4:
        raise ConfigError(f"need at least 4 cells, got {n}")
    interfaces = np.linspace(2.0 * M, L, n + 1)
    centers = 0.5 * (interfaces[:-1] + interfaces[1:])
    dr = (L - 2.0 * M) / n
    return Grid(M=M, L=L, n=n, dr=dr, interfaces=interfaces, centers=centers)


@dataclass
class RunConfig:
    """Flat run configuration; '' fields are filled by resolved()."""

    model: str = "burgers"
    order: int = 1
    well_balanced: bool = True
    flux: str = ""  # '' -> godunov (burgers) / roe_type (euler)
    averaging: str = ""  # '' -> midpoint (orders 1-2) / gauss2 (order 3)
    cfl: float = 0.5
    k: float = 0.3  # Euler sound speed
    M: float = 1.0
    L: float = 4.0
    n_cells: int = 256
    t_end: float = 50.0
    right_bc: str = "transmissive"
    snapshot_dt: float = 0.0  # 0 -> snapshots at t=0 and t_end only
    root_tol: float = 1e-14
    root_maxit: int = 200
    sonic_eps: float = 1e-12
    v_min: float = 1e-10
    steady_tol: float = 1e-13
    steady_window: int = 10
    max_steps: int = 50_000_000

    def resolved(self) -> "RunConfig":
        """Copy with model-dependent defaults filled in, validated."""
        cfg = dataclasses.replace(self)
        if not cfg.flux:
            cfg.flux = "godunov" if cfg.model == "burgers" else "roe_type"
        if not cfg.averaging:
            cfg.averaging = "gauss2" if (cfg.model == "burgers" and cfg.order == 3) else "midpoint"
        cfg.validate()
        return cfg

    def validate(self):
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; choose from {MODELS}")
        if self.model == "burgers":
            if self.order not in (1, 2, 3):
                raise ConfigError(f"burgers supports orders 1-3, got {self.order}")
            if self.flux and self.flux not in BURGERS_FLUXES:
                raise ConfigError(f"burgers flux must be one of {BURGERS_FLUXES}, got {self.flux!r}")
            if self.averaging and self.averaging not in AVERAGING_RULES:
                raise ConfigError(f"averaging must be one of {AVERAGING_RULES}, got {self.averaging!r}")
        else:
            if self.order == 3:
                raise ConfigError("order 3 unsupported for euler")
            if self.order not in (1, 2):
                raise ConfigError(f"euler supports orders 1-2, got {self.order}")
            if self.flux and self.flux not in EULER_FLUXES:
                raise ConfigError(f"euler flux must be one of {EULER_FLUXES}, got {self.flux!r}")
            if self.averaging and self.averaging != "midpoint":
                raise ConfigError(f"averaging {self.averaging!r} unsupported for euler")
            if not 0.0 < self.k < 1.0:
                raise ConfigError(f"sound speed k must lie in (0, 1), got {self.k}")
        if not 0.0 < self.cfl <= 1.0:
            raise ConfigError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.M <= 0.0:
            raise ConfigError(f"M must be positive, got {self.M}")
        if self.L <= 2.0 * self.M:
            raise ConfigError(f"L={self.L} must exceed 2M={2 * self.M}")
        if self.n_cells < 4:
            raise ConfigError(f"need at least 4 cells, got {self.n_cells}")
        if self.t_end < 0.0:
            raise ConfigError(f"t_end must be nonnegative, got {self.t_end}")
        if self.right_bc not in RIGHT_BCS:
            raise ConfigError(f"right_bc must be one of {RIGHT_BCS}, got {self.right_bc!r}")
        if self.snapshot_dt < 0.0:
            raise ConfigError(f"snapshot_dt must be nonnegative, got {self.snapshot_dt}")
        for name in ("root_tol", "sonic_eps", "v_min", "steady_tol"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name} must be positive")
        if self.root_maxit < 10 or self.steady_window < 1 or self.max_steps < 1:
            raise ConfigError("iteration/window limits must be positive")

    def stepper(self) -> str:
        return {1: "forward_euler", 2: "tvdrk2", 3: "tvdrk3"}[self.order]

    def build_grid(self) -> Grid:
        return build_grid(self.M, self.L, self.n_cells)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)

    def digest(self) -> str:
        """Stable short hash of the resolved configuration."""
        payload = json.dumps(self.as_dict(), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:12]

    @classmethod
    def from_mapping(cls, mapping) -> "RunConfig":
        known = {f.name: f for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, raw in mapping.items():
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            kwargs[key] = _coerce(key, raw, type(getattr(cls(), key)))
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        """Flat key = value file; '#' starts a comment."""
        mapping = {}
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            for sep in ("=", ":"):
                if sep in body:
                    key, _, val = body.partition(sep)
                    mapping[key.strip()] = val.strip()
                    break
            else:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        return cls.from_mapping(mapping)


def _coerce(name, raw, target):
    if isinstance(raw, target):
        return raw
    text = str(raw).strip()
    try:
        if target is bool:
            low = text.lower()
            if low in ("true", "yes", "on", "1"):
                return True
            if low in ("false", "no", "off", "0"):
                return False
            raise ValueError(text)
        return target(text)
    except ValueError as exc:
        raise ConfigError(f"config key {name!r}: cannot parse {raw!r} as {target.__name__}") from exc


def metric(r, M):
    """Schwarzschild factor 1 - 2M/r; zero at the horizon r = 2M."""
    return 1.0 - 2.0 * M / np.asarray(r, dtype=float)
