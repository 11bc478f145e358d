"""Exact computations with Theta-stratifications of torus quotients of quasi-smooth affine derived schemes."""

__version__ = "0.1.0"
