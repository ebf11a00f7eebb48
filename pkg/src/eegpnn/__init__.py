"""EEG feature extraction and probabilistic neural network classification
for automated epilepsy diagnosis on single-channel segments."""

__version__ = "0.1.0"
