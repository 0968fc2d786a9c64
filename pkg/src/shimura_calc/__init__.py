"""Exact arithmetic for automorphic forms on quaternionic Shimura curves.

Subpackages cover local invariants of quaternion algebras, imaginary
quadratic class numbers and masses, CM-point intersection combinatorics,
the Eichler-Selberg trace formula, exact algebra on the explicit curve
models, and the group-cohomology / spectral-sequence machinery.  Every
computation is carried out in exact arithmetic (integers and Fractions);
no floating point enters any mathematical result.
"""

__version__ = "0.1.0"
