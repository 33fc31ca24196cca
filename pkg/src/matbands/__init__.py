"""Band structure of 1D Schroedinger operators with periodic Hermitian matrix potentials."""

__version__ = "0.1.0"
