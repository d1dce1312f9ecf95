"""Numerical toolkit for a positive semigroup whose generator has no spectral dichotomy."""
