"""Euclidean random fields built from convoluted generalized white noise."""

__version__ = "0.1.0"
