"""Fourier-domain semantic-aware mixup and a desk-scale domain-generalization harness."""

__version__ = "0.1.0"
