import os
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from eegpnn.signal_io import SET_TAGS, find_set_dir  # noqa: E402

BONN_N = 4096
BONN_FS = 173.61

# filled by test_acceptance, printed after the run
ACCEPTANCE_RESULTS = {}


def bonn_root():
    for cand in (os.environ.get("EEGPNN_DATA"), Path(__file__).parents[1] / "data" / "bonn"):
        if cand and Path(cand).is_dir() and all(find_set_dir(cand, t) for t in SET_TAGS):
            return Path(cand)
    return None


@pytest.fixture(scope="session")
def bonn_corpus():
    root = bonn_root()
    if root is None:
        pytest.skip("Bonn corpus not available (set EEGPNN_DATA to its root)")
    from eegpnn.signal_io import load_bonn_corpus
    return load_bonn_corpus(root)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def bin_freq(freq, n=BONN_N, fs=BONN_FS):
    """Nearest frequency with an integer number of cycles in the segment."""
    return round(freq * n / fs) * fs / n


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        status, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {status}  {detail}")
