"""Intersecting an orbit sum with a finitely generated subgroup.

Given ``O = Q + S(P_1, ..., P_k; d_1, ..., d_k)`` and ``Gamma = <G_1, ..., G_r>``
inside an FgModule, every point of O is ``Q + sum_{i,j} z_{j, d_i n_i} F^j P_i``.
Membership in Gamma splits along torsion: a point with torsion part ``h`` lies in
Gamma iff ``h`` is hit by Gamma's torsion projection and its free part differs
from a fixed lift ``U_h`` by an element of ``Gamma_1 = Gamma ∩ Z^m``.  The Smith
form of Gamma_1 turns the second condition into congruences and equations in the
``z``'s, which ``recsolve`` handles.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InputError, RefusalError
from .exactcore import IntMatrix, hnf_basis, kernel, smith_normal_form
from .frobmod import FgModule, ModElement, frob_orbit, validate
from .fsets import ExponentSet, GrouplessFSet, collapse_to_groupless, fset_sort_key
from .recsolve import CompletenessStatus, combine_status, default_sieve_moduli, solve_system


@dataclass(frozen=True)
class OrbitSum:
    Q: ModElement
    terms: tuple  # ((P_i, delta_i), ...)

    def __post_init__(self):
        terms = tuple((P, int(d)) for P, d in self.terms)
        if any(d < 1 for _, d in terms):
            raise InputError("orbit steps must be >= 1")
        object.__setattr__(self, "terms", terms)

    @property
    def k(self) -> int:
        return len(self.terms)

    @property
    def steps(self) -> tuple:
        return tuple(d for _, d in self.terms)

    def point(self, module: FgModule, n: Sequence[int]) -> ModElement:
        out = self.Q
        for (P, d), ni in zip(self.terms, n):
            out = out + frob_orbit(module, P, d * ni + 1)[-1]
        return out

    def as_groupless(self) -> GrouplessFSet:
        return GrouplessFSet(self.Q, self.terms)


def split_point(module: FgModule, P: ModElement):
    """``P = T + Q`` with ``T`` torsion and ``Q`` in the standard free complement."""
    return module.element((), P.tors), module.element(P.free, ())


@dataclass
class SubgroupData:
    generators: tuple
    gamma1: tuple  # HNF basis of Gamma ∩ Z^m (free coordinates)
    cosets: dict  # torsion tuple h -> free lift U_h
    congruence_rows: list  # (u, s): u . w = 0 mod s
    equation_rows: list  # u: u . w = 0

    def to_dict(self) -> dict:
        return {
            "gamma1_basis": [list(b) for b in self.gamma1],
            "torsion_cosets": [{"h": list(h), "U_h": list(self.cosets[h])} for h in sorted(self.cosets)],
            "congruence_rows": [{"u": list(u), "modulus": s} for u, s in self.congruence_rows],
            "equation_rows": [list(u) for u in self.equation_rows],
        }


def subgroup_analyze(module: FgModule, generators: Sequence[ModElement]) -> SubgroupData:
    m, s = module.free_rank, module.s
    d = module.torsion_orders
    gens = tuple(generators)
    r = len(gens)

    # torsion projection of Gamma, with a lift for every reachable h
    zero_h = (0,) * s
    lifts = {zero_h: (0,) * m}
    queue = deque([zero_h])
    while queue:
        h = queue.popleft()
        for gen in gens:
            nh = tuple((a + b) % q for a, b, q in zip(h, gen.tors, d))
            if nh not in lifts:
                lifts[nh] = tuple(a + b for a, b in zip(lifts[h], gen.free))
                queue.append(nh)

    # Gamma_1: free images of coefficient vectors whose torsion image vanishes
    if s == 0:
        cols = [list(g.free) for g in gens]
    else:
        A = IntMatrix.from_columns(
            [list(g.tors) for g in gens] + [[q if i == t else 0 for i in range(s)] for t, q in enumerate(d)],
            rows=s,
        ) if (r + s) else IntMatrix.zeros(s, 0)
        cols = []
        for v in kernel(A):
            c = v[:r]
            cols.append([sum(ci * g.free[row] for ci, g in zip(c, gens)) for row in range(m)])
    gamma1 = tuple(hnf_basis(cols, m)) if m else ()

    # residue system via Smith form: w in Gamma_1 iff U w in D Z^rank
    cong, eqs = [], []
    if m:
        if gamma1:
            B = IntMatrix.from_columns(gamma1, rows=m)
            D, U, _ = smith_normal_form(B)
            diag = [D[i, i] for i in range(min(D.rows, D.cols))]
            rank = sum(1 for x in diag if x)
        else:
            U = IntMatrix.identity(m)
            diag, rank = [], 0
        for i in range(m):
            row = U.row(i)
            if i < rank:
                if diag[i] >= 2:
                    cong.append((row, diag[i]))
            else:
                eqs.append(row)
    return SubgroupData(gens, gamma1, lifts, cong, eqs)


def membership_system(module: FgModule, orbit: OrbitSum, sub: SubgroupData, h: Sequence[int]):
    """Congruences ``(d, D1, D2)`` and forms ``(d, D)`` (coefficients ``d[j][i]``
    against ``z_{j, delta_i n_i}``) describing ``point(n) in h + U_h + Gamma_1``."""
    h = tuple(h)
    if h not in sub.cosets:
        raise InputError(f"torsion element {h} is not in the torsion projection of the subgroup")
    g, k = module.g, orbit.k
    FP = [frob_orbit(module, P, g) for P, _ in orbit.terms]  # FP[i][j] = F^j P_i
    Q = orbit.Q
    congruences, forms = [], []
    for t, q in enumerate(module.torsion_orders):
        dmat = [[FP[i][j].tors[t] for i in range(k)] for j in range(g)]
        congruences.append((dmat, (h[t] - Q.tors[t]) % q, q))
    U_h = sub.cosets[h]
    rhs_base = [a - b for a, b in zip(U_h, Q.free)]

    def block(u):
        return [[sum(a * b for a, b in zip(u, FP[i][j].free)) for i in range(k)] for j in range(g)]

    for u, smod in sub.congruence_rows:
        congruences.append((block(u), sum(a * b for a, b in zip(u, rhs_base)) % smod, smod))
    for u in sub.equation_rows:
        forms.append((block(u), sum(a * b for a, b in zip(u, rhs_base))))
    # drop constraints that are vacuous for every n
    congruences = [c for c in congruences if any(any(x % c[2] for x in row) for row in c[0]) or c[1] % c[2]]
    forms = [fm for fm in forms if any(any(row) for row in fm[0]) or fm[1]]
    return congruences, forms


@dataclass
class OrbitIntersection:
    fsets: list
    residual: list
    status: CompletenessStatus
    exponents: ExponentSet
    per_coset: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "fsets": [S.to_dict() for S in self.fsets],
            "fsets_readable": [S.describe() for S in self.fsets],
            "residual": [{"coset": c.to_dict()} for c, _ in self.residual],
            "status": self.status.to_dict(),
            "exponents": self.exponents.to_dict(),
            "per_coset": self.per_coset,
        }


def intersect_orbit_subgroup(
    module: FgModule,
    orbit: OrbitSum,
    generators: Sequence[ModElement],
    N_max: int = 64,
    sieve_moduli: Optional[Sequence[int]] = None,
) -> OrbitIntersection:
    report = validate(module, chain_steps=0)
    if not report.passed("iii"):
        raise RefusalError(
            "F is a zero divisor on this module; the orbit pipeline needs axiom (iii)",
            report.checks["iii"].to_dict(),
        )
    if not report.passed("ii"):
        raise RefusalError("f(F) does not vanish on the module", report.checks["ii"].to_dict())
    if sieve_moduli is None:
        sieve_moduli = default_sieve_moduli([module.torsion_exponent] if module.s else [])
    sub = subgroup_analyze(module, generators)
    k = orbit.k
    total = ExponentSet.empty(k)
    statuses, per = [], []
    for h in sorted(sub.cosets):
        cons, forms = membership_system(module, orbit, sub, h)
        E, st = solve_system(module.f, cons, forms, k, N_max, sieve_moduli, orbit.steps)
        total = total.union(E)
        statuses.append(st)
        per.append({
            "h": list(h),
            "congruences": len(cons),
            "equations": len(forms),
            "status": st.tag,
        })
    status = combine_status(statuses) if statuses else CompletenessStatus("complete")
    fsets, residual = collapse_to_groupless(module, orbit, total)
    fsets = sorted(set(fsets), key=fset_sort_key)
    return OrbitIntersection(fsets, residual, status, total, per)


def brute_force_intersection(module: FgModule, orbit: OrbitSum, generators, box: int) -> dict:
    """``{n: point}`` for all ``n in [0, box]^k`` whose point lies in Gamma
    (independent oracle: one HNF of the generator lattice, then reductions)."""
    from .exactcore import reduce_mod_hnf

    n_all = module.free_rank + module.s
    cols = [g.flat() for g in generators]
    cols += [[q if r == module.free_rank + t else 0 for r in range(n_all)] for t, q in enumerate(module.torsion_orders)]
    H = hnf_basis(cols, n_all) if cols else []
    orbits = [frob_orbit(module, P, d * box + 1)[::d] for P, d in orbit.terms]
    out = {}
    for n in itertools.product(range(box + 1), repeat=orbit.k):
        p = orbit.Q
        for o, ni in zip(orbits, n):
            p = p + o[ni]
        v = p.free + tuple(p.tors)
        if not any(reduce_mod_hnf(H, v)):
            out[n] = p
    return out
