"""Leave-one-out cross-validation of the PNN on the four set pairings."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import normalize
from .errors import ConfigError, DomainError, ShapeError
from .features import FeatureTable, extract_many
from .pnn import DEFAULT_SPREAD, PnnModel, train
from .signal_io import SET_TAGS, Segment, check_equal_lengths
from .timedomain import HfdConfig


@dataclass(frozen=True)
class ExperimentDef:
    id: int
    name: str
    class_sets: tuple  # one tuple of set tags per class, class 0 first
    class_names: tuple

    def __post_init__(self):
        seen = set()
        for group in self.class_sets:
            for tag in group:
                if tag not in SET_TAGS:
                    raise DomainError(f"unknown set tag {tag!r}")
                if tag in seen:
                    raise DomainError(f"set {tag} appears in more than one class")
                seen.add(tag)

    @property
    def sets(self) -> tuple:
        return tuple(t for group in self.class_sets for t in group)


EXPERIMENTS = {
    1: ExperimentDef(1, "normal vs interictal", (("A", "B"), ("C", "D")), ("normal", "interictal")),
    2: ExperimentDef(2, "normal vs ictal", (("A", "B"), ("E",)), ("normal", "ictal")),
    3: ExperimentDef(3, "interictal vs ictal", (("C", "D"), ("E",)), ("interictal", "ictal")),
    4: ExperimentDef(4, "set C vs set D (focus localization)", (("C",), ("D",)), ("set C", "set D")),
}


def get_experiment(exp_id: int) -> ExperimentDef:
    try:
        return EXPERIMENTS[int(exp_id)]
    except (KeyError, ValueError):
        raise ConfigError(f"unknown experiment {exp_id!r}; choose from {sorted(EXPERIMENTS)}") from None


def build_experiment(exp: ExperimentDef, corpus: Mapping[str, Sequence[Segment]],
                     lowpass: bool = True, cfg: HfdConfig = HfdConfig(),
                     threads: int = 1) -> FeatureTable:
    """Extract features for every segment the experiment uses and label them."""
    missing = [t for t in exp.sets if not corpus.get(t)]
    if missing:
        raise ConfigError(f"experiment {exp.id} needs sets {missing} which are missing or empty")
    segments, labels, sids = [], [], []
    for label, group in enumerate(exp.class_sets):
        for tag in group:
            for seg in corpus[tag]:
                segments.append(seg)
                labels.append(label)
                sids.append(f"{tag}/{seg.source_id}")
    check_equal_lengths(segments)
    X = extract_many(segments, cfg, lowpass=lowpass, threads=threads)
    return FeatureTable(X, labels, sids)


def experiment_from_tables(exp: ExperimentDef, tables: Mapping[str, FeatureTable]) -> FeatureTable:
    """Assemble an experiment from per-set feature tables (e.g. read from CSV)."""
    missing = [t for t in exp.sets if t not in tables or len(tables[t]) == 0]
    if missing:
        raise ConfigError(f"experiment {exp.id} needs sets {missing} which are missing or empty")
    rows, labels, sids = [], [], []
    for label, group in enumerate(exp.class_sets):
        for tag in group:
            t = tables[tag]
            rows.append(t.X)
            labels += [label] * len(t)
            sids += [f"{tag}/{s}" for s in t.source_ids]
    return FeatureTable(np.vstack(rows), labels, sids)


@dataclass
class EvalReport:
    spread: float
    confusion: np.ndarray
    predictions: list
    fold_times: list = field(default_factory=list)
    experiment_id: int | None = None
    method: str = "zscore"
    class_names: tuple | None = None

    @property
    def n_samples(self) -> int:
        return int(self.confusion.sum())

    @property
    def accuracy(self) -> float:
        return float(np.trace(self.confusion) / self.confusion.sum())

    @property
    def median_fold_time(self) -> float:
        return float(np.median(self.fold_times)) if self.fold_times else float("nan")

    def per_class(self) -> list[dict]:
        """Sensitivity (recall) and specificity of each class, one-vs-rest."""
        C = self.confusion
        total = C.sum()
        out = []
        for k in range(C.shape[0]):
            tp = C[k, k]
            fn = C[k].sum() - tp
            fp = C[:, k].sum() - tp
            tn = total - tp - fn - fp
            out.append({
                "class": k,
                "sensitivity": float(tp / (tp + fn)) if tp + fn else None,
                "specificity": float(tn / (tn + fp)) if tn + fp else None,
            })
        return out

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "experiment": self.experiment_id,
            "spread": self.spread,
            "normalization": self.method,
            "class_names": list(self.class_names) if self.class_names else None,
            "n_samples": self.n_samples,
            "confusion": self.confusion.tolist(),
            "accuracy": self.accuracy,
            "per_class": self.per_class(),
            "predictions": self.predictions,
        }
        if timing:
            d["timing"] = {
                "median_fold_classify_s": self.median_fold_time,
                "fold_classify_s": list(self.fold_times),
            }
        return d


def fold_model(X, labels, held_out: int, spread: float = DEFAULT_SPREAD,
               n_classes: int | None = None, method: str = "zscore") -> PnnModel:
    """Model of one LOO fold: stats and stored rows come from every row but ``held_out``."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    k = int(n_classes if n_classes is not None else y.max() + 1)
    keep = np.arange(X.shape[0]) != held_out
    stats = normalize.fit(X[keep], method)
    return train(normalize.apply(stats, X[keep]), y[keep], k, spread, stats)


def loo_cv(X, labels, spread: float = DEFAULT_SPREAD, n_classes: int | None = None,
           method: str = "zscore", source_ids: Sequence[str] | None = None,
           experiment_id: int | None = None, class_names=None) -> EvalReport:
    """Leave-one-out CV.  Normalization is refit inside every fold."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != y.size:
        raise ShapeError("feature matrix and labels disagree")
    k = int(n_classes if n_classes is not None else y.max() + 1)
    counts = np.bincount(y, minlength=k)
    if np.any(counts < 2):
        raise DomainError(f"every class needs at least 2 samples for LOO-CV, got counts {counts.tolist()}")
    if source_ids is None:
        source_ids = [str(i) for i in range(y.size)]

    confusion = np.zeros((k, k), dtype=np.int64)
    predictions, times = [], []
    for i in range(y.size):
        model = fold_model(X, y, i, spread, k, method)
        p = normalize.apply(model.norm_stats, X[i])
        t0 = time.perf_counter()
        pred, _ = model.classify(p)
        times.append(time.perf_counter() - t0)
        confusion[y[i], pred] += 1
        predictions.append({"source_id": source_ids[i], "true": int(y[i]), "predicted": pred})
    return EvalReport(float(spread), confusion, predictions, times, experiment_id, method,
                      tuple(class_names) if class_names else None)


def loo_cv_table(table: FeatureTable, exp: ExperimentDef | None = None,
                 spread: float = DEFAULT_SPREAD, method: str = "zscore") -> EvalReport:
    return loo_cv(table.X, table.labels, spread,
                  n_classes=len(exp.class_sets) if exp else None, method=method,
                  source_ids=table.source_ids, experiment_id=exp.id if exp else None,
                  class_names=exp.class_names if exp else None)


def spread_sweep(X, labels, spreads: Sequence[float], **kwargs) -> list[tuple[float, float]]:
    """(spread, LOO-CV accuracy) per spread, in the order given."""
    if not len(spreads):
        raise DomainError("no spreads given")
    return [(float(s), loo_cv(X, labels, s, **kwargs).accuracy) for s in spreads]
