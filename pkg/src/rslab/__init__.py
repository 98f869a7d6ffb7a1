"""High-precision laboratory for Hecke eigenforms and their tensor L-functions."""

__version__ = "0.1.0"
