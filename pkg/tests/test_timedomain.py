import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eegpnn.errors import DomainError
from eegpnn.signal_io import Segment, synth_segment
from eegpnn.timedomain import (
    DegenerateSegmentWarning,
    HfdConfig,
    amplitude_stats,
    higuchi_fd,
    hjorth,
    petrosian_fd,
    sign_changes,
)
import oracles

# log10(4096) / (log10(4096) + log10(4096 / (4096 + 0.4 * 4094))), from oracles.petrosian
PFD_ALTERNATING_4096 = 1.0421393876325138


def random_signal(seed, n=256):
    return np.random.default_rng(seed).normal(0, 40, n)


class TestPetrosian:
    def test_ramp_is_one(self):
        assert petrosian_fd(np.arange(4096.0)) == 1.0

    def test_alternating(self):
        x = np.array([(-1.0) ** i for i in range(4096)])
        assert sign_changes(x) == 4094
        assert petrosian_fd(x) == pytest.approx(PFD_ALTERNATING_4096, rel=1e-12)
        assert oracles.petrosian(list(x)) == pytest.approx(PFD_ALTERNATING_4096, rel=1e-12)

    def test_too_short(self):
        with pytest.raises(DomainError):
            petrosian_fd(np.array([1.0, 2.0]))

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_oracle(self, seed):
        x = random_signal(seed, 512)
        assert petrosian_fd(x) == pytest.approx(oracles.petrosian(list(x)), rel=1e-9)


class TestHiguchi:
    def test_line(self):
        assert abs(higuchi_fd(np.arange(4096.0)) - 1.0) <= 0.05

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_white_noise(self, seed):
        x = np.random.default_rng(seed).standard_normal(4096)
        assert abs(higuchi_fd(x) - 2.0) <= 0.15

    def test_brownian_motion_near_one_and_a_half(self):
        x = np.cumsum(np.random.default_rng(0).standard_normal(4096))
        assert abs(higuchi_fd(x) - 1.5) <= 0.1

    def test_constant_degenerate(self):
        with pytest.warns(DegenerateSegmentWarning):
            assert higuchi_fd(Segment(np.full(64, 3.0))) == 0.0

    def test_too_short(self):
        with pytest.raises(DomainError):
            higuchi_fd(np.arange(10.0), HfdConfig(5))

    def test_bad_kmax(self):
        with pytest.raises(DomainError):
            HfdConfig(1)

    @pytest.mark.parametrize("seed,k_max", [(0, 5), (1, 5), (2, 3), (3, 8)])
    def test_matches_oracle(self, seed, k_max):
        x = random_signal(seed, 300)
        assert higuchi_fd(x, HfdConfig(k_max)) == pytest.approx(oracles.higuchi(list(x), k_max), rel=1e-9)


class TestHjorth:
    @pytest.mark.parametrize("omega", [0.05, 0.2, 0.5, 1.0, 2.0])
    def test_sine_mobility(self, omega):
        x = np.sin(omega * np.arange(4096) + 0.3)
        mobility, _ = hjorth(x)
        assert mobility == pytest.approx(2 * math.sin(omega / 2), rel=0.01)

    def test_noise_more_complex_than_sines(self):
        noise = np.random.default_rng(7).standard_normal(4096)
        _, c_noise = hjorth(noise)
        for omega in np.linspace(0.05, 3.0, 25):
            _, c_sine = hjorth(np.sin(omega * np.arange(4096)))
            assert c_noise > c_sine

    def test_zero_signal(self):
        with pytest.raises(DomainError):
            hjorth(np.zeros(64))

    def test_constant_signal(self):
        with pytest.raises(DomainError):
            hjorth(np.full(64, 2.0))

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_oracle(self, seed):
        x = random_signal(seed, 512)
        got = hjorth(x)
        want = oracles.hjorth(list(x))
        assert got[0] == pytest.approx(want[0], rel=1e-9)
        assert got[1] == pytest.approx(want[1], rel=1e-9)


class TestAmplitudeStats:
    def test_alternating(self):
        assert amplitude_stats(np.array([-1.0, 1.0, -1.0, 1.0])) == (0.0, 1.0, 1.0, 0.0)

    def test_constant(self):
        assert amplitude_stats(np.full(10, 4.0)) == (4.0, 0.0, 4.0, 0.0)

    @pytest.mark.parametrize("seed", range(3))
    def test_matches_oracle(self, seed):
        x = random_signal(seed, 400) + 5
        assert np.allclose(amplitude_stats(x), oracles.amplitude_stats(list(x)), rtol=1e-9, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(1e-3, 1e4))
def test_positive_scale_invariance(seed, alpha):
    x = synth_segment("noise", {"sigma": 20.0, "n_samples": 512}, seed=seed).samples
    assert petrosian_fd(alpha * x) == petrosian_fd(x)
    assert higuchi_fd(alpha * x) == pytest.approx(higuchi_fd(x), rel=1e-9)
    assert np.allclose(hjorth(alpha * x), hjorth(x), rtol=1e-9)
    scaled = amplitude_stats(alpha * x)
    assert np.allclose(scaled, alpha * np.array(amplitude_stats(x)), rtol=1e-9)
