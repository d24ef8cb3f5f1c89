"""Exact computation of Morse-point attractors of linear deformations
f - t*ell of a bivariate polynomial, with a numeric verification oracle."""

__version__ = "0.1.0"
