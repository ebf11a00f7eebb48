"""FFT magnitudes and the 2-32 Hz band features (15 PSI + 15 RIR).

Indexing is 0-based: ``magnitudes[i]`` is the DFT bin at ``i * fs / N`` Hz.
Each band ``[2k, 2k+2)`` Hz sums bins ``floor(N*2k/fs) <= i < floor(N*(2k+2)/fs)``,
so adjacent bands share no bin.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .signal_io import Segment

BAND_EDGES_HZ = tuple(range(2, 34, 2))
N_BANDS = len(BAND_EDGES_HZ) - 1


@dataclass(frozen=True, eq=False)
class Spectrum:
    magnitudes: np.ndarray
    sample_rate_hz: float
    n_samples: int


@dataclass(frozen=True, eq=False)
class BandPowers:
    psi: np.ndarray
    rir: np.ndarray


def fft_magnitudes(seg: Segment) -> Spectrum:
    mags = np.abs(np.fft.fft(seg.samples))
    return Spectrum(mags, seg.sample_rate_hz, seg.n_samples)


def band_bin_ranges(n_samples: int, sample_rate_hz: float) -> list[tuple[int, int]]:
    """Half-open bin index ranges ``[lo, hi)`` of the 15 bands."""
    edges = [int(np.floor(n_samples * f / sample_rate_hz)) for f in BAND_EDGES_HZ]
    return list(zip(edges[:-1], edges[1:]))


def band_powers(spec: Spectrum) -> BandPowers:
    if spec.sample_rate_hz <= 2 * BAND_EDGES_HZ[-1]:
        raise DomainError(
            f"sample rate {spec.sample_rate_hz} Hz cannot resolve the {BAND_EDGES_HZ[-1]} Hz band edge"
        )
    mags = spec.magnitudes
    psi = np.array([mags[lo:hi].sum() for lo, hi in band_bin_ranges(spec.n_samples, spec.sample_rate_hz)])
    total = psi.sum()
    rir = psi / total if total > 0 else np.zeros_like(psi)
    return BandPowers(psi, rir)
