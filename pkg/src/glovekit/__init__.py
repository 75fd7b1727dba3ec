"""GloVe embedding trainer and evaluation harness with pluggable weighting."""

__version__ = "0.1.0"
