"""Probabilistic neural network: a Gaussian radial basis layer over the stored
training vectors followed by a winner-take-all competitive layer.

Training is storage.  With ``Q`` stored rows of ``R`` features and ``K``
classes the network holds

* ``W`` (Q x R): one normalized training vector per row,
* ``b`` (Q): every bias equal to ``sqrt(ln 2) / spread``, so the activation
  ``exp(-(dist * b)**2)`` is exactly 0.5 at ``dist == spread``,
* ``M`` (K x Q): one-hot class indicator per stored row.

A query ``p`` gives ``n = ||W_q - p|| * b_q``, ``a = exp(-n**2)``, ``d = M a``
and the winner is the first class with the largest ``d``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DomainError, ModelMismatchError, ParseError, ShapeError
from .normalize import NormStats
from .normalize import apply as apply_norm

DEFAULT_SPREAD = 0.1
MODEL_FORMAT = "eegpnn-model"
MODEL_VERSION = 1


def radbas(n):
    return np.exp(-np.square(n))


def bias_for_spread(spread: float) -> float:
    if not spread > 0:
        raise DomainError(f"spread must be positive, got {spread}")
    return math.sqrt(math.log(2.0)) / spread


@dataclass(frozen=True, eq=False)
class ClassificationTrace:
    distances: np.ndarray
    activations: np.ndarray
    scores: np.ndarray
    winner: int
    # scores * exp(min(distances)**2); same ordering as ``scores`` but immune
    # to every activation underflowing to zero at tiny spreads
    relative_scores: np.ndarray = field(repr=False)
    # scores divided by the number of stored rows of each class
    class_mean_scores: np.ndarray = field(repr=False)


@dataclass(frozen=True, eq=False)
class PnnModel:
    weights: np.ndarray
    labels: np.ndarray
    n_classes: int
    spread: float = DEFAULT_SPREAD
    norm_stats: NormStats | None = None
    class_names: tuple | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        W = np.array(self.weights, dtype=np.float64, copy=True)
        y = np.array(self.labels, dtype=np.int64, copy=True).ravel()
        if W.ndim != 2:
            raise ShapeError("weight matrix must be two-dimensional")
        if W.shape[0] != y.size:
            raise ShapeError(f"{W.shape[0]} stored vectors but {y.size} labels")
        if not np.all(np.isfinite(W)):
            raise DomainError("weight matrix contains non-finite values")
        k = int(self.n_classes)
        if k < 1:
            raise DomainError("need at least one class")
        if y.size and (y.min() < 0 or y.max() >= k):
            raise DomainError(f"labels must lie in [0, {k})")
        counts = np.bincount(y, minlength=k)
        if np.any(counts == 0):
            raise DomainError(f"classes {np.flatnonzero(counts == 0).tolist()} have no training samples")
        bias_for_spread(self.spread)
        if self.norm_stats is not None and self.norm_stats.n_features != W.shape[1]:
            raise ShapeError("normalization stats and weight matrix disagree on feature count")
        if self.class_names is not None and len(self.class_names) != k:
            raise ShapeError("class_names must have one entry per class")
        W.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "weights", W)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "n_classes", k)
        object.__setattr__(self, "spread", float(self.spread))
        if self.class_names is not None:
            object.__setattr__(self, "class_names", tuple(self.class_names))

    @property
    def n_stored(self) -> int:
        return self.weights.shape[0]

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]

    @property
    def bias(self) -> np.ndarray:
        return np.full(self.n_stored, bias_for_spread(self.spread))

    @property
    def class_matrix(self) -> np.ndarray:
        M = np.zeros((self.n_classes, self.n_stored))
        M[self.labels, np.arange(self.n_stored)] = 1.0
        return M

    @property
    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    def trace(self, p) -> ClassificationTrace:
        p = np.asarray(p, dtype=np.float64).ravel()
        if p.size != self.n_features:
            raise ModelMismatchError(f"model expects {self.n_features} features, got {p.size}")
        if not np.all(np.isfinite(p)):
            raise DomainError("input vector contains non-finite values")
        dist = np.sqrt(np.sum((self.weights - p) ** 2, axis=1))
        n = dist * self.bias
        a = radbas(n)
        shifted = np.exp(-(n * n - np.min(n) ** 2))
        # fsum makes the class sums independent of row order
        scores = np.array([math.fsum(a[self.labels == k]) for k in range(self.n_classes)])
        rel = np.array([math.fsum(shifted[self.labels == k]) for k in range(self.n_classes)])
        winner = int(np.argmax(rel))
        return ClassificationTrace(n, a, scores, winner, rel, scores / self.class_counts)

    def classify(self, p) -> tuple[int, ClassificationTrace]:
        """Class of a normalized vector ``p``; ties go to the lowest class index."""
        tr = self.trace(p)
        return tr.winner, tr

    def classify_raw(self, v) -> tuple[int, ClassificationTrace]:
        """Normalize a raw feature vector with the stored stats, then classify."""
        if self.norm_stats is None:
            return self.classify(v)
        v = np.asarray(v, dtype=np.float64).ravel()
        if v.size != self.n_features:
            raise ModelMismatchError(f"model expects {self.n_features} features, got {v.size}")
        return self.classify(apply_norm(self.norm_stats, v))

    def add_sample(self, v, label: int) -> "PnnModel":
        """New model with ``v`` appended as a stored row; ``self`` is untouched."""
        v = np.asarray(v, dtype=np.float64).ravel()
        if v.size != self.n_features:
            raise ModelMismatchError(f"model expects {self.n_features} features, got {v.size}")
        if not 0 <= label < self.n_classes:
            raise DomainError(f"label {label} outside [0, {self.n_classes})")
        return PnnModel(np.vstack([self.weights, v]), np.append(self.labels, label),
                        self.n_classes, self.spread, self.norm_stats, self.class_names,
                        dict(self.metadata))

    # -- serialization

    def to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "spread": self.spread,
            "n_classes": self.n_classes,
            "class_names": list(self.class_names) if self.class_names is not None else None,
            "n_features": self.n_features,
            "norm_stats": self.norm_stats.to_dict() if self.norm_stats is not None else None,
            "labels": [int(v) for v in self.labels],
            "weights": [[float(v) for v in row] for row in self.weights],
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, d) -> "PnnModel":
        if d.get("format") != MODEL_FORMAT:
            raise ParseError(f"not a model file (format={d.get('format')!r})")
        if d.get("version") != MODEL_VERSION:
            raise ParseError(f"unsupported model version {d.get('version')!r}")
        W = np.asarray(d["weights"], dtype=np.float64).reshape(len(d["labels"]), int(d["n_features"]))
        stats = NormStats.from_dict(d["norm_stats"]) if d.get("norm_stats") else None
        return cls(W, d["labels"], d["n_classes"], d["spread"], stats,
                   d.get("class_names"), d.get("metadata") or {})

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "PnnModel":
        path = Path(path)
        try:
            d = json.loads(path.read_text(encoding="utf-8"))
            return cls.from_dict(d)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", path, exc.lineno) from None
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise ParseError(str(exc), path) from None
            raise ParseError(f"malformed model file: {exc}", path) from None


def train(features, labels: Sequence[int], n_classes: int, spread: float = DEFAULT_SPREAD,
          norm_stats: NormStats | None = None, **kwargs) -> PnnModel:
    """Store normalized training vectors; no iteration is involved."""
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2:
        raise ShapeError("training features must be a 2-D array")
    return PnnModel(X, labels, n_classes, spread, norm_stats, **kwargs)
