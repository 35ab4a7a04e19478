"""Exact Groebner-basis and local-singularity certificates for boundary divisors on Fano threefolds."""

__version__ = "0.1.0"
