"""Seeded random property suites shared by ``fml check`` and the test-suite."""

from __future__ import annotations

import random

from .errors import RefusalError
from .frobmod import frob_power, frob_power_via_z
from .fsets import es_intersect, es_member
from .orbitgamma import brute_force_intersection, intersect_orbit_subgroup
from .randgen import random_element, random_exponent_set, random_module, random_orbit_instance
from .recsolve import detect_period


def brute_period(f, N):
    """Preperiod and period of the state sequence of ``f`` mod ``N`` by a visited table."""
    g = len(f) - 1
    alpha = [(-c) % N for c in f[:-1]]
    state = tuple([1 % N] + [0] * (g - 1)) if g > 1 else (1 % N,)
    seen = {}
    n = 0
    while state not in seen:
        seen[state] = n
        last = state[-1]
        state = tuple(
            ((state[j - 1] if j else 0) + alpha[j] * last) % N for j in range(g)
        )
        n += 1
    return seen[state], n - seen[state]


def check_z_relation(seed: int, modules: int = 100, n_max: int = 300) -> dict:
    rng = random.Random(seed)
    failures = 0
    for _ in range(modules):
        M = random_module(rng, max_free=4, max_tors=2, max_order=12, max_g=4)
        P = random_element(rng, M)
        for n in range(n_max + 1):
            if frob_power_via_z(M, P, n) != frob_power(M, P, n):
                failures += 1
                break
    return {"name": "z-relation", "cases": modules, "failures": failures}


def check_periods(seed: int, cases: int = 50, n_max: int = 50) -> dict:
    rng = random.Random(seed)
    failures = 0
    for _ in range(cases):
        g = rng.randint(1, 4)
        f = [rng.randint(-5, 5) for _ in range(g)] + [1]
        N = rng.randint(2, n_max)
        pr = detect_period(f, N)
        if (pr.preperiod, pr.period) != brute_period(f, N):
            failures += 1
    return {"name": "periods", "cases": cases, "failures": failures}


def check_pipeline(seed: int, cases: int = 50, box: int = 64) -> dict:
    rng = random.Random(seed)
    failures, complete, refused = 0, 0, 0
    for _ in range(cases):
        M, orbit, gens = random_orbit_instance(rng)
        try:
            res = intersect_orbit_subgroup(M, orbit, gens)
        except RefusalError:
            refused += 1
            continue
        complete += res.status.complete
        if set(res.exponents.points(box)) != set(brute_force_intersection(M, orbit, gens, box)):
            failures += 1
    return {"name": "pipeline", "cases": cases, "failures": failures, "complete": complete, "refused": refused}


def check_exponent_sets(seed: int, pairs: int = 50, samples: int = 1000) -> dict:
    rng = random.Random(seed)
    failures = 0
    per_pair = max(1, samples // pairs)
    for _ in range(pairs):
        k = rng.randint(1, 3)
        E1, E2 = random_exponent_set(rng, k), random_exponent_set(rng, k)
        both = es_intersect(E1, E2)
        for _ in range(per_pair):
            n = tuple(rng.randint(0, 30) for _ in range(k))
            if es_member(both, n) != (es_member(E1, n) and es_member(E2, n)):
                failures += 1
    return {"name": "exponent-sets", "cases": pairs * per_pair, "failures": failures}


def run_checks(seed: int, quick: bool = False) -> list:
    scale = 5 if quick else 1
    return [
        check_z_relation(seed, 100 // scale),
        check_periods(seed),
        check_pipeline(seed, 50 // scale),
        check_exponent_sets(seed),
    ]
