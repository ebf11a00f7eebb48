"""Per-feature normalization fitted on training rows only."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeError

METHODS = ("zscore", "minmax")


@dataclass(frozen=True, eq=False)
class NormStats:
    location: np.ndarray
    scale: np.ndarray
    method: str = "zscore"

    def __post_init__(self):
        loc = np.asarray(self.location, dtype=np.float64).ravel()
        scale = np.asarray(self.scale, dtype=np.float64).ravel()
        if loc.shape != scale.shape:
            raise ShapeError("location and scale differ in length")
        if self.method not in METHODS:
            raise DomainError(f"unknown normalization method {self.method!r}")
        if not np.all(scale > 0):
            raise DomainError("every scale must be positive")
        object.__setattr__(self, "location", loc)
        object.__setattr__(self, "scale", scale)

    @property
    def n_features(self) -> int:
        return self.location.size

    @classmethod
    def identity(cls, n_features: int) -> "NormStats":
        return cls(np.zeros(n_features), np.ones(n_features))

    def to_dict(self) -> dict:
        return {"method": self.method,
                "location": [float(v) for v in self.location],
                "scale": [float(v) for v in self.scale]}

    @classmethod
    def from_dict(cls, d) -> "NormStats":
        return cls(np.asarray(d["location"]), np.asarray(d["scale"]), d["method"])


def fit(train, method: str = "zscore") -> NormStats:
    """Fit location/scale per column.  Zero-spread columns get scale 1."""
    X = np.asarray(train, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DomainError("normalization needs at least 2 training rows")
    if method == "zscore":
        loc = X.mean(axis=0)
        scale = X.std(axis=0)
    elif method == "minmax":
        loc = X.min(axis=0)
        scale = X.max(axis=0) - loc
    else:
        raise DomainError(f"unknown normalization method {method!r}")
    # exact test on the range: a constant column's float std can be ~1e-16
    flat = X.max(axis=0) == X.min(axis=0)
    loc = np.where(flat, X[0], loc)
    scale = np.where(flat | ~(scale > 0), 1.0, scale)
    return NormStats(loc, scale, method)


def apply(stats: NormStats, v) -> np.ndarray:
    """Normalize a vector or a matrix of row vectors."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape[-1] != stats.n_features:
        raise ShapeError(f"expected {stats.n_features} features, got {v.shape[-1]}")
    out = (v - stats.location) / stats.scale
    bad = ~np.isfinite(out)
    if np.any(bad):
        idx = int(np.flatnonzero(bad.reshape(-1, stats.n_features).any(axis=0))[0])
        raise DomainError(f"normalized feature {idx} is not finite")
    return out
