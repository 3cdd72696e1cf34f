"""Finitely generated subgroups of the torus (F_q(t)^x)^s meeting a linear relation.

Exponent vectors ``e in Z^r`` parametrize ``Gamma``; Frobenius acts on them as
multiplication by ``q``.  ``intersect_hypersurface`` sweeps a symmetric box and
``cluster_fsets`` sorts the solutions into q-power orbits and lattice cosets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InputError
from .exactcore import GF, FqPoly, FqRat, hnf_basis, prime_power
from .exactcore.intmat import reduce_mod_hnf


def _ord_at(poly: FqPoly, c: int) -> int:
    """Order of vanishing of ``poly`` at ``t = c``."""
    K = poly.field
    lin = FqPoly(K, {0: K.neg(c), 1: 1})
    n = 0
    while True:
        quo, rem = poly.divmod(lin)
        if not rem.is_zero():
            return n
        poly, n = quo, n + 1


def valuation_vector(x: FqRat) -> list:
    """Valuations of ``x`` at every rational place ``t = c`` and at infinity."""
    K = x.field
    out = [_ord_at(x.num, c) - _ord_at(x.den, c) for c in K.elements()]
    out.append(x.den.degree - x.num.degree)
    return out


@dataclass
class TorusSubgroup:
    q: int
    generators: tuple  # r tuples of s nonzero FqRat

    def __post_init__(self):
        gens = tuple(tuple(g) for g in self.generators)
        if not gens:
            raise InputError("a torus subgroup needs at least one generator")
        s = len(gens[0])
        if s == 0 or any(len(g) != s for g in gens):
            raise InputError("all generators need the same positive length")
        for g in gens:
            for x in g:
                if x.is_zero():
                    raise InputError("torus coordinates must be nonzero")
        self.generators = gens

    @classmethod
    def make(cls, q: int, generators) -> "TorusSubgroup":
        """``generators`` as nested ``(num, den)`` coefficient lists or bare numerators."""
        p, e = prime_power(q)
        K = GF(p, e)
        gens = []
        for g in generators:
            row = []
            for x in g:
                num, den = (x, [1]) if _is_coeffs(x) else x
                row.append(FqRat.from_lists(K, [c % K.order for c in num], [c % K.order for c in den]))
            gens.append(tuple(row))
        return cls(q, tuple(gens))

    @property
    def r(self) -> int:
        return len(self.generators)

    @property
    def s(self) -> int:
        return len(self.generators[0])

    @property
    def field(self):
        return self.generators[0][0].field

    def independence(self) -> dict:
        """Certificate that the generators are multiplicatively independent:
        the integer matrix of their valuation vectors has full row rank."""
        rows = [sum((valuation_vector(x) for x in g), []) for g in self.generators]
        rank = len(hnf_basis(rows, len(rows[0])))
        return {
            "status": "independent" if rank == self.r else "unknown",
            "valuation_rank": rank,
            "valuation_vectors": rows,
        }


def _is_coeffs(x) -> bool:
    return all(isinstance(c, int) for c in x)


def gamma_element(G: TorusSubgroup, e: Sequence[int]) -> tuple:
    if len(e) != G.r:
        raise InputError(f"exponent vector needs length {G.r}")
    out = []
    for l in range(G.s):
        x = FqRat.const(G.field, 1)
        for g, ei in zip(G.generators, e):
            if ei:
                x = x * g[l] ** ei
        out.append(x)
    return tuple(out)


@dataclass
class LinearRelation:
    """``sum a_l x_l = b`` with coefficients in F_q(t)."""

    coeffs: tuple
    rhs: FqRat

    def frobenius_fixed(self, q: int) -> bool:
        return all(a == a.frobenius(q) for a in self.coeffs) and self.rhs == self.rhs.frobenius(q)

    def holds(self, x: Sequence[FqRat]) -> bool:
        total = FqRat.const(self.rhs.field, 0)
        for a, xi in zip(self.coeffs, x):
            total = total + a * xi
        return total == self.rhs


def intersect_hypersurface(G: TorusSubgroup, X: LinearRelation, box: int) -> list:
    """All ``e in [-box, box]^r`` with ``gamma_element(e)`` on ``X``, sorted.

    The relation is cleared of denominators once; each candidate is then
    tested by a cross-multiplied polynomial identity, without gcds.
    """
    if box < 0:
        raise InputError("box must be nonnegative")
    if len(X.coeffs) != G.s:
        raise InputError(f"relation needs {G.s} coefficients")
    K = G.field
    one = FqPoly.const(K, 1)
    clear = one
    for a in list(X.coeffs) + [X.rhs]:
        clear = clear * a.den
    alpha = [a.num * (clear // a.den) for a in X.coeffs]
    beta = X.rhs.num * (clear // X.rhs.den)

    # tables[i][l][e] = (num, den) of g_i[l]^e for e in -box..box
    tables = []
    for g in G.generators:
        per = []
        for x in g:
            pos = [(one, one)]
            for _ in range(box):
                n, d = pos[-1]
                pos.append((n * x.num, d * x.den))
            per.append({e: (pos[e] if e >= 0 else pos[-e][::-1]) for e in range(-box, box + 1)})
        tables.append(per)

    sols = []
    rng = range(-box, box + 1)
    for e in itertools.product(rng, repeat=G.r):
        nums, dens = [], []
        for l in range(G.s):
            n, d = one, one
            for i, ei in enumerate(e):
                if ei:
                    tn, td = tables[i][l][ei]
                    n, d = n * tn, d * td
            nums.append(n)
            dens.append(d)
        lhs = FqPoly(K, ())
        for l in range(G.s):
            if alpha[l].is_zero():
                continue
            term = alpha[l] * nums[l]
            for m in range(G.s):
                if m != l:
                    term = term * dens[m]
            lhs = lhs + term
        rhs = beta
        for d in dens:
            rhs = rhs * d
        if lhs == rhs:
            sols.append(e)
    return sols


@dataclass
class Clustering:
    orbits: list  # [(e0, [e0, q e0, ...])]
    cosets: list  # [(base, lattice basis, points)]
    fixed: list  # the zero vector when it is a solution outside any coset
    unexplained: list
    lattice: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "orbits": [{"base": list(e0), "points": [list(p) for p in pts]} for e0, pts in self.orbits],
            "cosets": [
                {"base": list(b), "lattice": [list(v) for v in L], "points": len(pts)}
                for b, L, pts in self.cosets
            ],
            "fixed_points": [list(p) for p in self.fixed],
            "unexplained": [list(p) for p in self.unexplained],
        }


def _periods(sols: set, box: int) -> list:
    """Nonzero differences ``v`` such that translating by ``v`` keeps every
    solution inside the solution set whenever it stays in the box."""
    pts = sorted(sols)
    r = len(pts[0]) if pts else 0
    inside = lambda p: all(-box <= x <= box for x in p)  # noqa: E731
    # differences from one anchor suffice to see the anchor's coset lattice
    cands = {tuple(b - a for a, b in zip(pts[0], p2)) for p2 in pts[1:]} if pts else set()
    good = []
    for v in sorted(cands):
        if v <= tuple([0] * r):
            continue  # -v is tested instead
        ok = True
        for p in pts:
            for sgn in (1, -1):
                w = tuple(a + sgn * b for a, b in zip(p, v))
                if inside(w) and w not in sols:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            good.append(list(v))
    return good


def cluster_fsets(solutions: Sequence[Sequence[int]], q: int, box: int) -> Clustering:
    sols = {tuple(e) for e in solutions}
    if not sols:
        return Clustering([], [], [], [])
    r = len(next(iter(sols)))
    inside = lambda p: all(-box <= x <= box for x in p)  # noqa: E731
    lattice = hnf_basis(_periods(sols, box), r)
    cosets, remaining = [], set(sols)
    if lattice:
        classes = {}
        for p in sorted(sols):
            classes.setdefault(tuple(reduce_mod_hnf(lattice, p)), []).append(p)
        for key, members in sorted(classes.items()):
            # single points are left for the orbit pass
            if len(members) >= 2:
                cosets.append((key, lattice, members))
                remaining -= set(members)
    orbits, fixed, unexplained = [], [], []
    zero = (0,) * r
    if zero in remaining:
        fixed.append(zero)
        remaining.discard(zero)
    roots = sorted(
        p for p in remaining
        if not (all(x % q == 0 for x in p) and tuple(x // q for x in p) in remaining)
    )
    for e0 in roots:
        chain = [e0]
        while True:
            nxt = tuple(q * x for x in chain[-1])
            if not inside(nxt):
                orbits.append((e0, chain))
                break
            if nxt not in remaining:
                unexplained.extend(chain)
                break
            chain.append(nxt)
        remaining -= set(chain)
    unexplained.extend(sorted(remaining))
    return Clustering(orbits, cosets, fixed, sorted(set(unexplained)), lattice)


def exponent_module(r: int, q: int):
    from .frobmod import FgModule

    return FgModule(r, (), [[q if i == j else 0 for j in range(r)] for i in range(r)], f=(-q, 1))


def clustering_fsets(cl: Clustering, r: int, q: int) -> list:
    """The clustering as F-sets of the exponent module ``(Z^r, e -> q e)``."""
    from .fsets import GrouplessFSet, make_fset

    M = exponent_module(r, q)
    zero = M.zero()
    out = []
    for e0, _ in cl.orbits:
        out.append(make_fset(M, GrouplessFSet(zero, ((M.element(e0), 1),)), ()))
    for p in cl.fixed:
        out.append(make_fset(M, GrouplessFSet(M.element(p), ()), ()))
    for base, L, _ in cl.cosets:
        out.append(make_fset(M, GrouplessFSet(M.element(base), ()), [M.element(v) for v in L]))
    return out


def gm_report(G: TorusSubgroup, X: LinearRelation, box: int) -> dict:
    sols = intersect_hypersurface(G, X, box)
    cl = cluster_fsets(sols, G.q, box)
    sol_set = set(sols)
    if X.frobenius_fixed(G.q):
        closure = all(
            tuple(G.q * x for x in e) in sol_set
            for e in sols
            if all(abs(G.q * x) <= box for x in e)
        )
    else:
        closure = None
    accounted = sorted(
        [p for _, pts in cl.orbits for p in pts]
        + [p for _, _, pts in cl.cosets for p in pts]
        + cl.fixed + cl.unexplained
    )
    downstairs = [
        "S((" + ", ".join(str(x) for x in gamma_element(G, e0)) + "); 1)" for e0, _ in cl.orbits
    ]
    return {
        "q": G.q,
        "box": box,
        "generators": [[str(x) for x in g] for g in G.generators],
        "relation": {"coeffs": [str(a) for a in X.coeffs], "rhs": str(X.rhs)},
        "independence": G.independence()["status"],
        "solutions": [list(e) for e in sols],
        "clusters": cl.to_dict(),
        "fsets_downstairs": downstairs,
        "frobenius_closure": closure,
        "exact_cover": accounted == sorted(sols),
    }
