"""Time-domain descriptors: Petrosian and Higuchi fractal dimensions,
Hjorth mobility/complexity and amplitude statistics."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .signal_io import Segment

DEFAULT_K_MAX = 5


class DegenerateSegmentWarning(UserWarning):
    """A feature fell back to its degenerate-case value."""


@dataclass(frozen=True)
class HfdConfig:
    k_max: int = DEFAULT_K_MAX

    def __post_init__(self):
        if int(self.k_max) != self.k_max or self.k_max < 2:
            raise DomainError(f"k_max must be an integer >= 2, got {self.k_max}")


def _values(seg):
    return seg.samples if isinstance(seg, Segment) else np.asarray(seg, dtype=np.float64)


def _source(seg):
    return seg.source_id if isinstance(seg, Segment) else "<array>"


def sign_changes(x) -> int:
    """Number of sign changes in the first difference of ``x``."""
    d = np.diff(np.asarray(x, dtype=np.float64))
    return int(np.count_nonzero(d[1:] * d[:-1] < 0))


def petrosian_fd(seg) -> float:
    x = _values(seg)
    n = x.size
    if n < 3:
        raise DomainError("Petrosian FD needs at least 3 samples")
    n_delta = sign_changes(x)
    log_n = np.log10(n)
    return float(log_n / (log_n + np.log10(n / (n + 0.4 * n_delta))))


def higuchi_lengths(x, k_max: int) -> np.ndarray:
    """Average curve length L(k) for k = 1..k_max.

    For each start offset m (1-based) the subsampled series
    x_m, x_{m+k}, ... contributes the increments i = 2..floor((N-m)/k),
    normalized by (N-1) / (floor((N-m)/k) * k) and by a further 1/k.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    lengths = np.empty(k_max)
    for k in range(1, k_max + 1):
        total = 0.0
        for m in range(1, k + 1):
            sub = x[m - 1::k]
            n_inc = (n - m) // k
            inc = np.abs(np.diff(sub[: n_inc + 1]))[1:]
            total += inc.sum() * (n - 1) / (n_inc * k) / k
        lengths[k - 1] = total / k
    return lengths


def higuchi_fd(seg, cfg: HfdConfig = HfdConfig()) -> float:
    """Slope of ln L(k) against ln(1/k).

    A signal with zero curve length at any scale (e.g. constant) has no
    defined slope; 0.0 is returned and a DegenerateSegmentWarning issued.
    """
    x = _values(seg)
    if x.size <= 2 * cfg.k_max:
        raise DomainError(f"Higuchi FD with k_max={cfg.k_max} needs more than {2 * cfg.k_max} samples")
    lengths = higuchi_lengths(x, cfg.k_max)
    if np.any(lengths <= 0):
        warnings.warn(f"segment '{_source(seg)}' has zero curve length; HFD set to 0",
                      DegenerateSegmentWarning, stacklevel=2)
        return 0.0
    k = np.arange(1, cfg.k_max + 1)
    slope, _ = np.polyfit(np.log(1.0 / k), np.log(lengths), 1)
    return float(slope)


def hjorth(seg) -> tuple[float, float]:
    """Hjorth (mobility, complexity) from mean squares of x, dx and d2x.

    All three mean squares divide by N, the full series length.
    """
    x = _values(seg)
    n = x.size
    if n < 3:
        raise DomainError("Hjorth parameters need at least 3 samples")
    d = np.diff(x)
    tp = np.sum(x * x) / n
    m2 = np.sum(d * d) / n
    m4 = np.sum(np.diff(d) ** 2) / n
    if tp == 0:
        raise DomainError("Hjorth parameters undefined for an all-zero signal")
    if m2 == 0:
        raise DomainError("Hjorth parameters undefined for a constant signal")
    return float(np.sqrt(m2 / tp)), float(np.sqrt(m4 * tp / (m2 * m2)))


def amplitude_stats(seg) -> tuple[float, float, float, float]:
    """(mean, std, mean of |x|, std of |x|); population statistics."""
    x = _values(seg)
    if x.size < 2:
        raise DomainError("amplitude statistics need at least 2 samples")
    ax = np.abs(x)
    return float(x.mean()), float(x.std()), float(ax.mean()), float(ax.std())
