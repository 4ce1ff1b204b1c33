"""Minimal resolutions, Margolis homology and cobar computations for the A(2)-based Adams spectral sequence."""

__version__ = "0.1.0"
