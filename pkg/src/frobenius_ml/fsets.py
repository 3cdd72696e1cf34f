"""F-sets and exponent sets.

A groupless F-set ``b + S(a_1, ..., a_k; d_1, ..., d_k)`` is the set of points
``b + sum F^(d_i n_i) a_i`` over ``n in N^k``.  Exponent sets (finite unions of
bounded lattice cosets in N^k) are what the solvers produce; ``collapse_to_groupless``
turns the nicely shaped ones back into groupless F-sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import InputError
from .exactcore import IntMatrix, hnf_basis, lattice_member, reduce_mod_hnf
from .exactcore.intmat import pivot_rows
from .frobmod import FgModule, ModElement, frob_orbit, frob_power, subgroup_member


# groupless F-sets and F-sets ---------------------------------------------------------


@dataclass(frozen=True)
class GrouplessFSet:
    base: ModElement
    terms: tuple = ()  # ((a_i, delta_i), ...)

    def __post_init__(self):
        terms = tuple((a, int(d)) for a, d in self.terms)
        if any(d < 1 for _, d in terms):
            raise InputError("orbit steps must be >= 1")
        object.__setattr__(self, "terms", terms)

    @property
    def k(self) -> int:
        return len(self.terms)

    def describe(self) -> str:
        if not self.terms:
            return f"{{{self.base}}}"
        inner = ", ".join(str(a) for a, _ in self.terms)
        steps = ", ".join(str(d) for _, d in self.terms)
        return f"{self.base} + S({inner}; {steps})"

    def to_dict(self) -> dict:
        return {
            "base": self.base.flat(),
            "terms": [{"a": a.flat(), "delta": d} for a, d in self.terms],
        }


@dataclass(frozen=True)
class FSet:
    part: GrouplessFSet
    subgroup: tuple = ()
    f_invariant: bool = False

    def to_dict(self) -> dict:
        return {
            "groupless": self.part.to_dict(),
            "subgroup": [h.flat() for h in self.subgroup],
            "f_invariant": self.f_invariant,
        }


def make_fset(module: FgModule, part: GrouplessFSet, subgroup: Sequence[ModElement]) -> FSet:
    """Build an F-set, setting ``f_invariant`` only when F maps every subgroup
    generator back into the subgroup."""
    subgroup = tuple(subgroup)
    inv = all(subgroup_member(module, subgroup, module.apply(h)) for h in subgroup)
    return FSet(part, subgroup, inv)


def points_up_to(S, module: FgModule, bound: int, subgroup_box: int = 0, power: int = 1) -> set:
    """All points with orbit indices ``0 <= n_i <= bound``.

    ``power`` reads the orbits over ``F^power``; for an ``FSet`` the subgroup
    contributes integer combinations with coefficients in ``[-subgroup_box, subgroup_box]``.
    """
    if bound < 0:
        raise InputError("bound must be nonnegative")
    part = S.part if isinstance(S, FSet) else S
    orbits = []
    for a, d in part.terms:
        step = d * power
        pts = frob_orbit(module, a, step * bound + 1)[::step]
        orbits.append(pts)
    out = set()
    for combo in itertools.product(*orbits):
        p = part.base
        for x in combo:
            p = p + x
        out.add(p)
    if isinstance(S, FSet) and S.subgroup:
        hs = set()
        for coeffs in itertools.product(range(-subgroup_box, subgroup_box + 1), repeat=len(S.subgroup)):
            h = module.zero()
            for c, g in zip(coeffs, S.subgroup):
                h = h + c * g
            hs.add(h)
        out = {p + h for p in out for h in hs}
    return out


def scale_delta(S: GrouplessFSet, b: int) -> GrouplessFSet:
    """Read an F^b-set as an F-set: every orbit step gets multiplied by ``b``."""
    if b < 1:
        raise InputError("scale factor must be positive")
    return GrouplessFSet(S.base, tuple((a, d * b) for a, d in S.terms))


# bounded lattice cosets -----------------------------------------------------------------


def _canon_basis(gens: Iterable[Sequence[int]], k: int) -> tuple:
    return tuple(hnf_basis([list(g) for g in gens if any(g)], k))


@dataclass(frozen=True)
class BoundedLatticeCoset:
    """``{x in Z^k : x - offset in L, x_i >= lower_i}`` with ``L`` in HNF."""

    k: int
    offset: tuple
    basis: tuple
    lower: tuple

    @classmethod
    def make(cls, offset: Sequence[int], generators: Iterable[Sequence[int]] = (), lower=None):
        k = len(offset)
        basis = _canon_basis(generators, k)
        lower = tuple(int(x) for x in (lower if lower is not None else [0] * k))
        if len(lower) != k or any(len(b) != k for b in basis):
            raise InputError("coset dimensions disagree")
        off = reduce_mod_hnf(basis, [int(x) for x in offset])
        return cls(k, tuple(off), basis, lower)

    @classmethod
    def full(cls, k: int) -> "BoundedLatticeCoset":
        return cls.make([0] * k, [[int(i == j) for i in range(k)] for j in range(k)], [0] * k)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, x: Sequence[int]) -> bool:
        if len(x) != self.k:
            raise InputError(f"tuple of length {len(x)} tested against a coset in N^{self.k}")
        if any(a < b for a, b in zip(x, self.lower)):
            return False
        return reduce_mod_hnf(self.basis, [a - c for a, c in zip(x, self.offset)]) == (0,) * self.k

    def points(self, hi: int, lo: int = 0) -> list:
        """Members inside the box ``[lo, hi]^k`` in lexicographic order."""
        los = [max(lo, m) for m in self.lower]
        if any(l > hi for l in los):
            return []
        prow = pivot_rows(self.basis)
        col_at = {p: t for t, p in enumerate(prow)}
        out = []
        k = self.k

        def rec(i, x):
            if i == k:
                out.append(tuple(x))
                return
            t = col_at.get(i)
            if t is None:
                if los[i] <= x[i] <= hi:
                    rec(i + 1, x)
                return
            col = self.basis[t]
            piv = col[i]
            y_lo = -((x[i] - los[i]) // piv)  # ceil((los - x)/piv)
            y_hi = (hi - x[i]) // piv
            for y in range(y_lo, y_hi + 1):
                nx = list(x)
                for r in range(i, k):
                    nx[r] += y * col[r]
                rec(i + 1, nx)

        rec(0, list(self.offset))
        return out

    def intersect(self, other: "BoundedLatticeCoset") -> Optional["BoundedLatticeCoset"]:
        if other.k != self.k:
            raise InputError("coset dimensions disagree")
        k = self.k
        lower = tuple(max(a, b) for a, b in zip(self.lower, other.lower))
        diff = [b - a for a, b in zip(self.offset, other.offset)]
        b1, b2 = list(self.basis), list(other.basis)
        if not b1 and not b2:
            return BoundedLatticeCoset.make(self.offset, (), lower) if not any(diff) else None
        # c1 + L1 y1 = c2 + L2 y2  <=>  [L1 | -L2] (y1, y2) = c2 - c1
        cols = b1 + [[-x for x in c] for c in b2]
        A = IntMatrix.from_columns(cols, rows=k)
        sol = lattice_member(A, diff)
        if sol is None:
            return None
        y1 = sol[: len(b1)]
        point = [c + sum(y * col[i] for y, col in zip(y1, b1)) for i, c in enumerate(self.offset)]
        gens = _lattice_meet(b1, b2, k)
        return BoundedLatticeCoset.make(point, gens, lower)

    def to_dict(self) -> dict:
        return {
            "offset": list(self.offset),
            "lattice": [list(b) for b in self.basis],
            "lower_bounds": list(self.lower),
        }

    def sort_key(self):
        return (self.offset, self.basis, self.lower)


def _lattice_meet(b1: list, b2: list, k: int) -> list:
    """Basis of ``L1 ∩ L2`` through the kernel of ``[L1 | -L2]``."""
    if not b1 or not b2:
        return []
    from .exactcore import kernel

    A = IntMatrix.from_columns(b1 + [[-x for x in c] for c in b2], rows=k)
    out = []
    for v in kernel(A):
        y1 = v[: len(b1)]
        out.append([sum(y * col[i] for y, col in zip(y1, b1)) for i in range(k)])
    return out


# exponent sets ----------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentSet:
    k: int
    explicit: tuple = ()
    cosets: tuple = ()

    def __post_init__(self):
        ex = set()
        for t in self.explicit:
            t = tuple(int(x) for x in t)
            if len(t) != self.k:
                raise InputError(f"tuple {t} does not live in N^{self.k}")
            if any(x < 0 for x in t):
                raise InputError(f"exponent tuple {t} has a negative entry")
            ex.add(t)
        cs = {}
        for c in self.cosets:
            if c.k != self.k:
                raise InputError("coset dimension disagrees with the exponent set")
            if any(x < 0 for x in c.lower):
                c = BoundedLatticeCoset(c.k, c.offset, c.basis, tuple(max(0, x) for x in c.lower))
            cs[c.sort_key()] = c
        cosets = tuple(cs[key] for key in sorted(cs))
        ex = {t for t in ex if not any(c.contains(t) for c in cosets)}
        object.__setattr__(self, "explicit", tuple(sorted(ex)))
        object.__setattr__(self, "cosets", cosets)

    @classmethod
    def empty(cls, k: int) -> "ExponentSet":
        return cls(k)

    @classmethod
    def everything(cls, k: int) -> "ExponentSet":
        return cls(k, (), (BoundedLatticeCoset.full(k),))

    def is_empty_syntactically(self) -> bool:
        return not self.explicit and not self.cosets

    def is_finite(self) -> bool:
        return all(c.rank == 0 for c in self.cosets)

    def points(self, hi: int) -> set:
        pts = {t for t in self.explicit if max(t, default=0) <= hi}
        for c in self.cosets:
            pts.update(c.points(hi))
        return pts

    def union(self, other: "ExponentSet") -> "ExponentSet":
        if other.k != self.k:
            raise InputError("exponent sets of different dimension")
        return ExponentSet(self.k, self.explicit + other.explicit, self.cosets + other.cosets)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "explicit": [list(t) for t in self.explicit],
            "cosets": [c.to_dict() for c in self.cosets],
        }


def es_member(E: ExponentSet, n: Sequence[int]) -> bool:
    n = tuple(n)
    if len(n) != E.k:
        raise InputError(f"tuple of length {len(n)} queried against an exponent set in N^{E.k}")
    return n in E.explicit or any(c.contains(n) for c in E.cosets)


def es_intersect(E1: ExponentSet, E2: ExponentSet) -> ExponentSet:
    if E1.k != E2.k:
        raise InputError("exponent sets of different dimension")
    explicit = [t for t in E1.explicit if es_member(E2, t)]
    explicit += [t for t in E2.explicit if es_member(E1, t)]
    cosets = []
    for a in E1.cosets:
        for b in E2.cosets:
            c = a.intersect(b)
            if c is not None:
                cosets.append(c)
    return ExponentSet(E1.k, explicit, cosets)


def es_intersect_all(sets: Sequence[ExponentSet], k: int) -> ExponentSet:
    acc = ExponentSet.everything(k)
    for E in sets:
        acc = es_intersect(acc, E)
    return acc


# from exponents back to groupless F-sets -------------------------------------------------


def _coset_start(c: BoundedLatticeCoset):
    """For a coset whose basis has pairwise disjoint supports with positive
    entries, return the least point (componentwise) or None if empty."""
    start = list(c.offset)
    covered = set()
    for col in c.basis:
        supp = [i for i, x in enumerate(col) if x]
        covered.update(supp)
        # smallest t with offset + t*col >= lower on the support
        t = max(-((start[i] - c.lower[i]) // col[i]) for i in supp)
        for i in supp:
            start[i] += t * col[i]
    for i in range(c.k):
        if i not in covered and start[i] < c.lower[i]:
            return None
    return start


def convertible(c: BoundedLatticeCoset, deltas: Sequence[int]) -> bool:
    """Disjoint supports, and ``delta_i * w_i`` constant and positive on each support."""
    seen = set()
    for col in c.basis:
        supp = [i for i, x in enumerate(col) if x]
        if seen.intersection(supp):
            return False
        seen.update(supp)
        vals = {deltas[i] * col[i] for i in supp}
        if len(vals) != 1 or min(vals) <= 0:
            return False
    return True


def collapse_to_groupless(module: FgModule, orbit, E: ExponentSet):
    """Translate exponent tuples and convertible cosets of an orbit sum into
    groupless F-sets.

    ``orbit`` is ``(Q, [(P_i, delta_i), ...])`` (or an object with ``Q`` and
    ``terms``).  Returns ``(fsets, residual)`` where ``residual`` lists the
    ``(coset, orbit)`` pairs that could not be converted.
    """
    if hasattr(orbit, "terms"):
        Q, terms = orbit.Q, list(orbit.terms)
    else:
        Q, terms = orbit[0], list(orbit[1])
    if len(terms) != E.k:
        raise InputError("orbit length and exponent set dimension disagree")
    deltas = [d for _, d in terms]

    cache = {}

    def term_point(i, n):
        if (i, n) not in cache:
            P, d = terms[i]
            cache[i, n] = frob_power(module, P, d * n)
        return cache[i, n]

    fsets = []
    for t in E.explicit:
        b = Q
        for i, n in enumerate(t):
            b = b + term_point(i, n)
        fsets.append(GrouplessFSet(b))
    residual = []
    for c in E.cosets:
        if not convertible(c, deltas):
            residual.append((c, (Q, tuple(terms))))
            continue
        start = _coset_start(c)
        if start is None:
            continue
        covered = set()
        new_terms = []
        for col in c.basis:
            supp = [i for i, x in enumerate(col) if x]
            covered.update(supp)
            a = module.zero()
            for i in supp:
                a = a + term_point(i, start[i])
            new_terms.append((a, deltas[supp[0]] * col[supp[0]]))
        b = Q
        for i in range(E.k):
            if i not in covered:
                b = b + term_point(i, start[i])
        fsets.append(GrouplessFSet(b, tuple(new_terms)))
    return fsets, residual


def fset_sort_key(S: GrouplessFSet):
    return (S.base.sort_key(), tuple((a.sort_key(), d) for a, d in S.terms))

