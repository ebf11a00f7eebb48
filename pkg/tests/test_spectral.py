import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import BONN_FS, BONN_N, bin_freq
from eegpnn.errors import DomainError
from eegpnn.signal_io import Segment, synth_segment
from eegpnn.spectral import Spectrum, band_bin_ranges, band_powers, fft_magnitudes
from oracles import dft_magnitudes


class TestFftMagnitudes:
    def test_constant(self):
        spec = fft_magnitudes(Segment(np.full(BONN_N, -3.0)))
        assert spec.magnitudes[0] == pytest.approx(BONN_N * 3.0)
        assert np.max(spec.magnitudes[1:]) < 1e-9

    def test_bin_centred_sine(self):
        k = 200
        x = np.sin(2 * np.pi * k * np.arange(BONN_N) / BONN_N)
        mags = fft_magnitudes(Segment(x)).magnitudes
        assert mags[k] == pytest.approx(BONN_N / 2, rel=1e-9)
        assert mags[BONN_N - k] == pytest.approx(BONN_N / 2, rel=1e-9)
        rest = np.delete(mags, [k, BONN_N - k])
        assert np.max(rest) < 1e-8

    def test_zero(self):
        assert not np.any(fft_magnitudes(Segment(np.zeros(64))).magnitudes)

    @pytest.mark.parametrize("n", [16, 17, 64, 100, 256])
    def test_matches_direct_dft(self, n):
        x = np.random.default_rng(n).normal(0, 100, n)
        got = fft_magnitudes(Segment(x)).magnitudes
        want = np.array(dft_magnitudes(list(x)))
        assert np.max(np.abs(got - want)) <= 1e-6 * np.max(want)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000))
    def test_parseval(self, seed):
        x = np.random.default_rng(seed).normal(0, 30, 512)
        mags = fft_magnitudes(Segment(x)).magnitudes
        assert np.sum(mags ** 2) / x.size == pytest.approx(np.sum(x ** 2), rel=1e-6)


class TestBandPowers:
    def test_sine_in_fifth_band(self):
        # 10.98 Hz: the bin-centred tone nearest 11 Hz
        f = bin_freq(11.0)
        seg = synth_segment("sine", {"freq": f, "amplitude": 100.0}, seed=1)
        bp = band_powers(fft_magnitudes(seg))
        assert bp.rir[4] > 0.99
        assert np.all(np.delete(bp.rir, 4) < 0.01)

    def test_zero_spectrum(self):
        spec = Spectrum(np.zeros(BONN_N), BONN_FS, BONN_N)
        bp = band_powers(spec)
        assert not np.any(bp.psi) and not np.any(bp.rir)

    def test_flat_spectrum_counts_bins(self):
        spec = Spectrum(np.full(BONN_N, 2.5), BONN_FS, BONN_N)
        bp = band_powers(spec)
        # direct summation: count the bins whose frequency falls in each band
        counts = []
        for k in range(1, 16):
            lo = int(np.floor(BONN_N * 2 * k / BONN_FS))
            hi = int(np.floor(BONN_N * (2 * k + 2) / BONN_FS))
            counts.append(sum(1 for i in range(BONN_N) if lo <= i < hi))
        counts = np.array(counts)
        assert np.allclose(bp.psi, 2.5 * counts, rtol=1e-12)
        assert np.allclose(bp.rir, counts / counts.sum(), rtol=1e-12)

    def test_bands_tile_without_overlap(self):
        ranges = band_bin_ranges(BONN_N, BONN_FS)
        assert len(ranges) == 15
        assert ranges[0][0] == int(np.floor(BONN_N * 2 / BONN_FS))
        assert ranges[-1][1] == int(np.floor(BONN_N * 32 / BONN_FS))
        for (lo, hi), (lo2, _) in zip(ranges, ranges[1:]):
            assert lo < hi == lo2

    def test_psi_total_is_2_to_32_hz_sum(self):
        seg = synth_segment("noise", {"sigma": 5.0}, seed=2)
        spec = fft_magnitudes(seg)
        bp = band_powers(spec)
        lo, hi = band_bin_ranges(BONN_N, BONN_FS)[0][0], band_bin_ranges(BONN_N, BONN_FS)[-1][1]
        assert bp.psi.sum() == pytest.approx(spec.magnitudes[lo:hi].sum(), rel=1e-12)

    def test_low_rate_rejected(self):
        with pytest.raises(DomainError):
            band_powers(Spectrum(np.ones(256), 64.0, 256))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000), st.floats(1e-3, 1e3))
    def test_scale_equivariance(self, seed, alpha):
        spec = fft_magnitudes(synth_segment("noise", {"sigma": 1.0, "n_samples": 1024}, seed=seed))
        bp = band_powers(spec)
        scaled = band_powers(Spectrum(alpha * spec.magnitudes, spec.sample_rate_hz, spec.n_samples))
        assert np.allclose(scaled.psi, alpha * bp.psi, rtol=1e-12)
        assert np.allclose(scaled.rir, bp.rir, rtol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000))
    def test_rir_sums_to_one(self, seed):
        bp = band_powers(fft_magnitudes(synth_segment("noise", {"sigma": 3.0, "n_samples": 512}, seed=seed)))
        assert abs(bp.rir.sum() - 1.0) <= 1e-9
        assert np.all((bp.rir >= 0) & (bp.rir <= 1))
