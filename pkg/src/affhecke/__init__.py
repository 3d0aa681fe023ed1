"""Exact multi-parameter affine Hecke algebra computations.

Subpackages cover: exact coefficient rings (coeff), root systems and
finite Weyl groups (rootdata), extended affine Weyl groups (affweyl),
the Hecke algebra in the T-basis (hecke), the commutative spherical
world (spherical), explicit regular buildings for brute-force
verification (building), and the command line (cli).
"""

__version__ = "0.1.0"
