"""Loading, writing, filtering and synthesizing single-channel EEG segments.

The Bonn corpus ships one directory per set, one plain-text file per
segment with one amplitude per line.  The public archive names its sets
Z, O, N, F, S; the pipeline refers to them as A, B, C, D, E.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, ParseError, ShapeError

BONN_SAMPLE_RATE = 173.61
BONN_N_SAMPLES = 4096
LOWPASS_CUTOFF_HZ = 40.0
MIN_SAMPLES = 16

SET_TAGS = ("A", "B", "C", "D", "E")
# archive letter for each set, as published
BONN_LETTERS = {"A": "Z", "B": "O", "C": "N", "D": "F", "E": "S"}

MANIFEST_FORMAT = "eegpnn-synthetic-manifest"
MANIFEST_VERSION = 1


@dataclass(frozen=True, eq=False)
class Segment:
    """One single-channel EEG window.  Samples are stored read-only."""

    samples: np.ndarray
    sample_rate_hz: float = BONN_SAMPLE_RATE
    source_id: str = ""

    def __post_init__(self):
        x = np.array(self.samples, dtype=np.float64, copy=True).ravel()
        if x.size < MIN_SAMPLES:
            raise ShapeError(f"segment '{self.source_id}' has {x.size} samples, need >= {MIN_SAMPLES}")
        if not np.all(np.isfinite(x)):
            raise DomainError(f"segment '{self.source_id}' contains non-finite samples")
        if not self.sample_rate_hz > 0:
            raise DomainError(f"sample rate must be positive, got {self.sample_rate_hz}")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))

    @property
    def n_samples(self) -> int:
        return self.samples.size

    def with_samples(self, samples) -> "Segment":
        return Segment(samples, self.sample_rate_hz, self.source_id)


@dataclass(frozen=True, eq=False)
class LabeledSegment:
    segment: Segment
    class_label: int
    set_tag: str

    def __post_init__(self):
        if self.set_tag not in SET_TAGS:
            raise DomainError(f"unknown set tag {self.set_tag!r}")
        if self.class_label < 0:
            raise DomainError(f"class label must be non-negative, got {self.class_label}")


# --------------------------------------------------------------------------
# Bonn text format


def read_bonn_file(path, sample_rate_hz: float = BONN_SAMPLE_RATE) -> Segment:
    """Read one segment file.  A 4097-line file is cut to 4096 samples."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise OSError(f"cannot read segment file {path}: {exc.strerror or exc}") from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError("file is not UTF-8/ASCII text", path) from exc

    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s:
            continue
        try:
            values.append(float(s))
        except ValueError:
            raise ParseError(f"non-numeric value {s!r}", path, lineno) from None
    if len(values) == BONN_N_SAMPLES + 1:
        values = values[:-1]
    if len(values) < MIN_SAMPLES:
        raise ParseError(f"only {len(values)} samples, need at least {MIN_SAMPLES}", path)
    try:
        return Segment(np.asarray(values), sample_rate_hz, path.stem)
    except DomainError as exc:
        raise ParseError(str(exc), path) from None


def _segment_files(directory: Path) -> list[Path]:
    return sorted(
        (p for p in directory.iterdir() if p.is_file() and p.suffix.lower() == ".txt"),
        key=lambda p: p.name,
    )


def load_bonn_dir(path, set_tag: str | None = None,
                  sample_rate_hz: float = BONN_SAMPLE_RATE) -> list[Segment]:
    """Load every ``*.txt`` segment in ``path`` in lexicographic filename order.

    All segments must end up the same length; a mismatch raises ShapeError.
    ``set_tag`` is only validated here, it does not change what is read.
    """
    if set_tag is not None and set_tag not in SET_TAGS:
        raise DomainError(f"unknown set tag {set_tag!r}")
    directory = Path(path)
    if not directory.is_dir():
        raise FileNotFoundError(f"segment directory not found: {directory}")
    segments = [read_bonn_file(p, sample_rate_hz) for p in _segment_files(directory)]
    check_equal_lengths(segments)
    return segments


def check_equal_lengths(segments: Sequence[Segment]) -> None:
    if not segments:
        return
    n0 = segments[0].n_samples
    for seg in segments[1:]:
        if seg.n_samples != n0:
            raise ShapeError(
                f"segment '{seg.source_id}' has {seg.n_samples} samples, "
                f"expected {n0} (from '{segments[0].source_id}')"
            )


def find_set_dir(root, set_tag: str) -> Path | None:
    """Locate the directory of one set under ``root`` by tag or archive letter."""
    root = Path(root)
    if not root.is_dir():
        return None
    wanted = {set_tag.lower(), BONN_LETTERS[set_tag].lower()}
    for p in sorted(root.iterdir()):
        if p.is_dir() and p.name.lower() in wanted:
            return p
    return None


def load_bonn_corpus(root, sets: Iterable[str] = SET_TAGS,
                     sample_rate_hz: float = BONN_SAMPLE_RATE) -> dict[str, list[Segment]]:
    """Load the sets present under ``root``.  Missing sets are simply absent."""
    corpus = {}
    for tag in sets:
        d = find_set_dir(root, tag)
        if d is not None:
            corpus[tag] = load_bonn_dir(d, tag, sample_rate_hz)
    lengths = [segs for segs in corpus.values() if segs]
    check_equal_lengths([s for segs in lengths for s in segs])
    return corpus


def format_samples(samples) -> str:
    x = np.asarray(samples, dtype=np.float64)
    if np.all(x == np.round(x)) and np.all(np.abs(x) < 2**53):
        lines = [str(int(v)) for v in x]
    else:
        lines = [repr(float(v)) for v in x]
    return "\n".join(lines) + "\n"


def write_bonn_file(seg: Segment, path) -> None:
    """Write one value per line; integral data is written as integers."""
    Path(path).write_text(format_samples(seg.samples), encoding="ascii")


# --------------------------------------------------------------------------
# preprocessing


def lowpass_40hz(seg: Segment, cutoff_hz: float = LOWPASS_CUTOFF_HZ) -> Segment:
    """Zero-phase brick-wall low-pass: every DFT bin above ``cutoff_hz`` is zeroed.

    A bin exactly at the cutoff is kept.
    """
    fs = seg.sample_rate_hz
    if fs <= 2 * cutoff_hz:
        raise DomainError(f"sample rate {fs} Hz puts Nyquist at or below the {cutoff_hz} Hz cutoff")
    n = seg.n_samples
    spectrum = np.fft.rfft(seg.samples)
    freqs = np.arange(spectrum.size) * fs / n
    spectrum[freqs > cutoff_hz] = 0.0
    return seg.with_samples(np.fft.irfft(spectrum, n))


# --------------------------------------------------------------------------
# synthetic segments

SYNTH_KINDS = ("sine", "noise", "spikewave", "mixture")


def _check_freq(f, fs, what="frequency"):
    if not f > 0:
        raise DomainError(f"{what} must be positive, got {f}")
    if f >= fs / 2:
        raise DomainError(f"{what} {f} Hz is at or above Nyquist ({fs / 2} Hz)")


def _check_amp(a, what="amplitude"):
    if not a > 0:
        raise DomainError(f"{what} must be positive, got {a}")


def _spikewave(t, freq, amplitude, spike_amplitude, spike_width_s, phase):
    # sharp spike at each cycle start followed by a slow wave of the same period
    period = 1.0 / freq
    tau = np.mod(t + phase * period / (2 * np.pi) + period / 2, period) - period / 2
    spike = spike_amplitude * np.exp(-0.5 * (tau / spike_width_s) ** 2)
    wave = -amplitude * np.sin(2 * np.pi * freq * t + phase)
    return spike + wave


def synth_segment(kind: str, params: Mapping | None = None, seed: int = 0,
                  source_id: str | None = None) -> Segment:
    """Deterministic synthetic segment.

    Common params: ``n_samples`` (4096), ``sample_rate_hz`` (173.61).

    sine
        ``freq``, ``amplitude`` (1), ``phase`` (0)
    noise
        ``sigma`` (1), ``mean`` (0); Gaussian white noise
    spikewave
        ``freq`` (3), ``amplitude`` (1), ``spike_amplitude`` (= amplitude),
        ``spike_width_s`` (0.02), ``noise_sigma`` (0)
    mixture
        ``components``: list of ``[freq, amplitude]`` sines with random phases,
        optional ``spikewave`` dict (keys as above), ``noise_sigma`` (0)
    """
    p = dict(params or {})
    n = int(p.get("n_samples", BONN_N_SAMPLES))
    fs = float(p.get("sample_rate_hz", BONN_SAMPLE_RATE))
    if n < MIN_SAMPLES:
        raise DomainError(f"n_samples must be >= {MIN_SAMPLES}")
    if not fs > 0:
        raise DomainError("sample_rate_hz must be positive")
    rng = np.random.default_rng(seed)
    t = np.arange(n) / fs

    if kind == "sine":
        f = float(p["freq"])
        a = float(p.get("amplitude", 1.0))
        _check_freq(f, fs)
        _check_amp(a)
        x = a * np.sin(2 * np.pi * f * t + float(p.get("phase", 0.0)))
    elif kind == "noise":
        sigma = float(p.get("sigma", 1.0))
        _check_amp(sigma, "sigma")
        x = float(p.get("mean", 0.0)) + sigma * rng.standard_normal(n)
    elif kind == "spikewave":
        x = _spikewave_from(p, t, fs, rng) + _noise(p, n, rng)
    elif kind == "mixture":
        x = np.zeros(n)
        for f, a in p.get("components", []):
            _check_freq(float(f), fs)
            _check_amp(float(a))
            x += float(a) * np.sin(2 * np.pi * float(f) * t + rng.uniform(0, 2 * np.pi))
        if p.get("spikewave"):
            x += _spikewave_from(p["spikewave"], t, fs, rng)
        x += _noise(p, n, rng)
    else:
        raise DomainError(f"unknown generator kind {kind!r}; expected one of {SYNTH_KINDS}")

    if source_id is None:
        source_id = f"{kind}-seed{seed}"
    return Segment(x, fs, source_id)


def _spikewave_from(p, t, fs, rng):
    f = float(p.get("freq", 3.0))
    a = float(p.get("amplitude", 1.0))
    sa = float(p.get("spike_amplitude", a))
    w = float(p.get("spike_width_s", 0.02))
    _check_freq(f, fs)
    _check_amp(a)
    _check_amp(sa, "spike_amplitude")
    _check_amp(w, "spike_width_s")
    return _spikewave(t, f, a, sa, w, rng.uniform(0, 2 * np.pi))


def _noise(p, n, rng):
    sigma = float(p.get("noise_sigma", 0.0))
    if sigma < 0:
        raise DomainError("noise_sigma must be non-negative")
    if sigma == 0:
        return 0.0
    return sigma * rng.standard_normal(n)


# --------------------------------------------------------------------------
# synthetic corpus manifests


@dataclass
class ManifestEntry:
    source_id: str
    set_tag: str
    kind: str
    seed: int
    params: dict = field(default_factory=dict)


def default_synthetic_manifest(n_per_set: Mapping[str, int] | None = None,
                               seed: int = 2008) -> dict:
    """The corpus shipped with the package.

    A, B: low-frequency background ("normal"), alpha-dominated.
    C, D: slow background with 3 Hz (C) or 6 Hz (D) spike-and-wave bursts.
    E: high-frequency, high-amplitude activity ("ictal").

    A + B against E gives the 50 + 50 normal/ictal corpus.
    """
    counts = {"A": 25, "B": 25, "C": 25, "D": 25, "E": 50}
    if n_per_set:
        counts.update(n_per_set)
    rng = np.random.default_rng(seed)

    def r(lo, hi):
        return round(float(rng.uniform(lo, hi)), 3)

    entries = []
    for tag in SET_TAGS:
        for i in range(counts[tag]):
            if tag == "A":
                params = {"components": [[r(8.0, 12.0), r(30, 60)], [r(14.0, 20.0), r(5, 15)],
                                         [r(1.0, 3.0), r(10, 20)]],
                          "noise_sigma": 8.0}
            elif tag == "B":
                params = {"components": [[r(9.0, 11.0), r(60, 100)], [r(4.0, 7.0), r(10, 20)]],
                          "noise_sigma": 8.0}
            elif tag in ("C", "D"):
                sw = 3.0 if tag == "C" else 6.0
                params = {"components": [[r(1.0, 4.0), r(40, 80)], [r(4.0, 7.0), r(20, 40)]],
                          "spikewave": {"freq": sw, "amplitude": r(50, 70), "spike_amplitude": r(70, 90),
                                        "spike_width_s": 0.02},
                          "noise_sigma": 12.0}
            else:
                params = {"components": [[r(16.0, 24.0), r(300, 600)], [r(24.0, 30.0), r(200, 400)],
                                         [r(6.0, 10.0), r(100, 200)]],
                          "noise_sigma": 50.0}
            entries.append({
                "source_id": f"{tag}{i + 1:03d}",
                "set_tag": tag,
                "kind": "mixture",
                "seed": int(rng.integers(0, 2**31 - 1)),
                "params": params,
            })
    return {
        "format": MANIFEST_FORMAT,
        "version": MANIFEST_VERSION,
        "n_samples": BONN_N_SAMPLES,
        "sample_rate_hz": BONN_SAMPLE_RATE,
        "segments": entries,
    }


def write_manifest(manifest: Mapping, path) -> None:
    Path(path).write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def read_manifest(path) -> dict:
    path = Path(path)
    try:
        m = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", path, exc.lineno) from None
    if m.get("format") != MANIFEST_FORMAT:
        raise ParseError(f"not a synthetic manifest (format={m.get('format')!r})", path)
    if m.get("version") != MANIFEST_VERSION:
        raise ParseError(f"unsupported manifest version {m.get('version')!r}", path)
    return m


def corpus_from_manifest(manifest: Mapping) -> dict[str, list[Segment]]:
    """Generate every segment listed in a manifest, grouped by set tag."""
    base = {"n_samples": manifest.get("n_samples", BONN_N_SAMPLES),
            "sample_rate_hz": manifest.get("sample_rate_hz", BONN_SAMPLE_RATE)}
    corpus: dict[str, list[Segment]] = {}
    for e in manifest["segments"]:
        params = {**base, **e.get("params", {})}
        seg = synth_segment(e["kind"], params, int(e["seed"]), e["source_id"])
        corpus.setdefault(e["set_tag"], []).append(seg)
    check_equal_lengths([s for segs in corpus.values() for s in segs])
    return corpus


def shipped_manifest_path() -> Path:
    return Path(__file__).parent / "data" / "synthetic_manifest.json"


def load_synthetic_corpus(path=None) -> dict[str, list[Segment]]:
    return corpus_from_manifest(read_manifest(path or shipped_manifest_path()))


def write_corpus(corpus: Mapping[str, Sequence[Segment]], root) -> None:
    """Write a corpus in Bonn layout: ``root/<letter>/<source_id>.txt``."""
    root = Path(root)
    for tag, segs in corpus.items():
        d = root / BONN_LETTERS[tag]
        os.makedirs(d, exist_ok=True)
        for seg in segs:
            write_bonn_file(seg, d / f"{seg.source_id}.txt")
