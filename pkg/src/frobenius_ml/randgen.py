"""Random instances for the property suites (``fml check`` and the tests)."""

from __future__ import annotations

import random
from math import gcd

from .frobmod import FgModule, candidate_min_poly, validate
from .fsets import BoundedLatticeCoset, ExponentSet
from .orbitgamma import OrbitSum


def random_module(rng: random.Random, max_free=4, max_tors=2, max_order=12, max_g=4, entry=3,
                  injective=False) -> FgModule:
    while True:
        m = rng.randint(0, max_free)
        s = rng.randint(0, max_tors)
        if m + s == 0:
            continue
        d = [rng.randint(2, max_order) for _ in range(s)]
        A_ff = [[rng.randint(-entry, entry) for _ in range(m)] for _ in range(m)]
        A_tf = [[rng.randint(0, d[i] - 1) for _ in range(m)] for i in range(s)]
        A_tt = [
            [rng.randint(0, gcd(d[i], d[j]) - 1) * (d[i] // gcd(d[i], d[j])) for j in range(s)]
            for i in range(s)
        ]
        draft = FgModule(m, d, A_ff, A_tf, A_tt, f=(0, 1))
        f = candidate_min_poly(draft)
        if len(f) - 1 > max_g:
            continue
        M = FgModule(m, d, A_ff, A_tf, A_tt, f=f)
        if injective and not validate(M, chain_steps=0).passed("iii"):
            continue
        return M


def random_element(rng: random.Random, M: FgModule, entry=4):
    return M.element(
        [rng.randint(-entry, entry) for _ in range(M.free_rank)],
        [rng.randint(0, q - 1) for q in M.torsion_orders],
    )


def random_orbit_instance(rng: random.Random, max_free=3, max_tors=1, max_k=2, max_g=3, entry=4,
                          max_delta=2):
    """A module with injective F, an orbit sum and subgroup generators."""
    M = random_module(rng, max_free, max_tors, max_order=6, max_g=max_g, entry=2, injective=True)
    k = rng.randint(1, max_k)
    Q = random_element(rng, M, entry)
    terms = tuple((random_element(rng, M, entry), rng.randint(1, max_delta)) for _ in range(k))
    gens = [random_element(rng, M, entry) for _ in range(rng.randint(1, 3))]
    return M, OrbitSum(Q, terms), gens


def random_coset(rng: random.Random, k: int, entry=4) -> BoundedLatticeCoset:
    r = rng.randint(0, k)
    gens = [[rng.randint(-entry, entry) for _ in range(k)] for _ in range(r)]
    off = [rng.randint(0, 8) for _ in range(k)]
    low = [rng.randint(0, 5) for _ in range(k)]
    return BoundedLatticeCoset.make(off, gens, low)


def random_exponent_set(rng: random.Random, k: int) -> ExponentSet:
    cosets = [random_coset(rng, k) for _ in range(rng.randint(0, 3))]
    explicit = [tuple(rng.randint(0, 20) for _ in range(k)) for _ in range(rng.randint(0, 3))]
    return ExponentSet(k, explicit, cosets)
