"""Exact and numerical bounds for quantum logics, Lüders conditioning and no-signaling boxes."""

__version__ = "1.0.0"
