"""Assembly of the 38-feature vector and feature-matrix CSV files."""
from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import FeatureError, ParseError, ShapeError
from .signal_io import Segment, lowpass_40hz
from .spectral import N_BANDS, band_powers, fft_magnitudes
from .timedomain import HfdConfig, amplitude_stats, higuchi_fd, hjorth, petrosian_fd

FEATURE_NAMES = (
    tuple(f"psi_{k}" for k in range(1, N_BANDS + 1))
    + tuple(f"rir_{k}" for k in range(1, N_BANDS + 1))
    + ("pfd", "hfd", "hjorth_mobility", "hjorth_complexity",
       "mean_raw", "std_raw", "mean_abs", "std_abs")
)
N_FEATURES = len(FEATURE_NAMES)


def extract_features(seg: Segment, cfg: HfdConfig = HfdConfig()) -> np.ndarray:
    """Feature vector of one segment, ordered as ``FEATURE_NAMES``."""
    steps = (
        ("band_powers", lambda: _bands(seg)),
        ("pfd", lambda: [petrosian_fd(seg)]),
        ("hfd", lambda: [higuchi_fd(seg, cfg)]),
        ("hjorth", lambda: list(hjorth(seg))),
        ("amplitude_stats", lambda: list(amplitude_stats(seg))),
    )
    parts = []
    for name, fn in steps:
        try:
            parts.extend(fn())
        except Exception as exc:
            raise FeatureError(name, seg.source_id, exc) from exc
    v = np.asarray(parts, dtype=np.float64)
    bad = np.flatnonzero(~np.isfinite(v))
    if bad.size:
        raise FeatureError(FEATURE_NAMES[bad[0]], seg.source_id, "non-finite value")
    return v


def _bands(seg):
    bp = band_powers(fft_magnitudes(seg))
    return list(bp.psi) + list(bp.rir)


def preprocess(seg: Segment, lowpass: bool) -> Segment:
    return lowpass_40hz(seg) if lowpass else seg


def extract_many(segments: Sequence[Segment], cfg: HfdConfig = HfdConfig(),
                 lowpass: bool = True, threads: int = 1) -> np.ndarray:
    """Feature matrix (n_segments x 38).  Row order follows ``segments``."""
    def one(seg):
        return extract_features(preprocess(seg, lowpass), cfg)

    if not segments:
        return np.empty((0, N_FEATURES))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, segments))
    else:
        rows = [one(s) for s in segments]
    return np.vstack(rows)


@dataclass
class FeatureTable:
    """Feature rows with their labels and provenance."""

    X: np.ndarray
    labels: list = field(default_factory=list)
    source_ids: list = field(default_factory=list)

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64).reshape(-1, N_FEATURES)
        if not (len(self.labels) == len(self.source_ids) == self.X.shape[0]):
            raise ShapeError("labels, source_ids and feature rows differ in length")

    def __len__(self):
        return self.X.shape[0]


CSV_COLUMNS = FEATURE_NAMES + ("label", "source_id")


def features_to_csv(table: FeatureTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row, label, sid in zip(table.X, table.labels, table.source_ids):
        w.writerow([format(float(v), ".17g") for v in row] + [label, sid])
    return buf.getvalue()


def write_features_csv(table: FeatureTable, path) -> None:
    Path(path).write_text(features_to_csv(table), encoding="utf-8")


def read_features_csv(path) -> FeatureTable:
    """Inverse of ``write_features_csv``.  Labels are returned as strings."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty feature file", path) from None
        if tuple(header) != CSV_COLUMNS:
            raise ParseError("header does not match the 38 canonical feature columns", path, 1)
        rows, labels, sids = [], [], []
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(CSV_COLUMNS):
                raise ParseError(f"expected {len(CSV_COLUMNS)} fields, got {len(rec)}", path, lineno)
            try:
                rows.append([float(v) for v in rec[:N_FEATURES]])
            except ValueError:
                raise ParseError("non-numeric feature value", path, lineno) from None
            labels.append(rec[N_FEATURES])
            sids.append(rec[N_FEATURES + 1])
    return FeatureTable(np.array(rows).reshape(-1, N_FEATURES), labels, sids)
