"""Exact arithmetic: integer matrices, finite fields, polynomials over them."""

from .gf import GF, FiniteField, prime_power
from .intmat import (
    IntMatrix,
    charpoly,
    det,
    hnf,
    hnf_basis,
    kernel,
    lattice_member,
    reduce_mod_hnf,
    smith_normal_form,
)
from .fqpoly import FqPoly, FqRat, frobpow_rat, poly_gcd

__all__ = [
    "GF", "FiniteField", "prime_power",
    "IntMatrix", "charpoly", "det", "hnf", "hnf_basis", "kernel",
    "lattice_member", "reduce_mod_hnf", "smith_normal_form",
    "FqPoly", "FqRat", "frobpow_rat", "poly_gcd",
]
