"""Abelian vortices with toric targets.

Exact lattice-polytope geometry for moment images, the Delzant lattice data,
existence and moduli classification over Riemann surfaces, and a flat-torus
solver for the C and CP^1 vortex equations.
"""

__version__ = "0.1.0"
