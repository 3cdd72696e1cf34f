"""Solvers over the fundamental sequences z_{j,n}.

Write ``s(n) = (z_{0,n}, ..., z_{g-1,n})``; it is the coefficient vector of
``X^n mod f``, so ``s(n+1)`` is obtained from ``s(n)`` by one multiplication by
``X``.  Everything here runs on that state: periods modulo N, congruence
systems (decided exactly) and integer equations (bounded search, a modular
sieve and a pre-pass for two-coordinate families).

A system in ``k`` exponent variables is described by

* congruences ``(d, D1, D2)``: ``sum_{j,i} d[j][i] z_{j, s_i n_i} = D1 (mod D2)``
* forms ``(d, D)``: the same left-hand side, required to equal ``D`` in Z

where ``s_i`` (default 1) is a per-variable step, so that orbits under ``F^s``
are handled by reading ``z`` along ``n -> s*n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Optional, Sequence

from .errors import InputError, RefusalError
from .fsets import BoundedLatticeCoset, ExponentSet, es_intersect

PERIODIC_CAP = 300
SIEVE_PERIOD_CAP = 4096
MARGINAL_PERIOD_CAP = 100_000
FAMILY_STEP_MAX = 3
# exact solution sets needing more pieces than this are refused, not built
MAX_PIECES = 100_000


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _check_f(f) -> tuple:
    f = tuple(int(c) for c in f)
    if len(f) < 2 or f[-1] != 1:
        raise InputError(f"expected a monic polynomial of degree >= 1, got {list(f)}")
    return f


def _step(state: tuple, alpha: tuple, N: Optional[int]) -> tuple:
    top = state[-1]
    g = len(state)
    if g == 1:
        new = (alpha[0] * top,)
    else:
        new = (alpha[0] * top,) + tuple(state[j - 1] + alpha[j] * top for j in range(1, g))
    if N is not None:
        new = tuple(x % N for x in new)
    return new


def _initial(g: int, N: Optional[int]) -> tuple:
    s = (1,) + (0,) * (g - 1)
    return tuple(x % N for x in s) if N is not None else s


class ExactStates:
    """Lazily extended exact states ``s(0), s(1), ...`` for one polynomial."""

    def __init__(self, f):
        self.f = _check_f(f)
        self.alpha = tuple(-c for c in self.f[:-1])
        self.states = [_initial(len(self.alpha), None)]

    def __getitem__(self, n: int) -> tuple:
        st = self.states
        while len(st) <= n:
            st.append(_step(st[-1], self.alpha, None))
        return st[n]


@lru_cache(maxsize=64)
def exact_states(f: tuple) -> ExactStates:
    return ExactStates(f)


# periods -------------------------------------------------------------------------------


@dataclass(frozen=True)
class PeriodProfile:
    modulus: int
    preperiod: int
    period: int

    def to_dict(self) -> dict:
        return {"modulus": self.modulus, "preperiod": self.preperiod, "period": self.period}


@lru_cache(maxsize=1024)
def _brent(f: tuple, N: int):
    alpha = tuple(-c for c in f[:-1])
    x0 = _initial(len(alpha), N)
    power = lam = 1
    tortoise = x0
    hare = _step(x0, alpha, N)
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = _step(hare, alpha, N)
        lam += 1
    tortoise = hare = x0
    for _ in range(lam):
        hare = _step(hare, alpha, N)
    mu = 0
    while tortoise != hare:
        tortoise = _step(tortoise, alpha, N)
        hare = _step(hare, alpha, N)
        mu += 1
    return mu, lam


def detect_period(f: Sequence[int], N: int) -> PeriodProfile:
    """Minimal preperiod and period of the state ``s(n) mod N``."""
    f = _check_f(f)
    if N < 2:
        raise InputError("modulus must be >= 2")
    mu, lam = _brent(f, int(N))
    return PeriodProfile(int(N), mu, lam)


def stepped_profile(prof: PeriodProfile, step: int) -> tuple:
    """``(preperiod, period)`` of ``m -> s(step*m) mod N``."""
    rho = -(-prof.preperiod // step)
    pi = prof.period // gcd(prof.period, step)
    return rho, pi


@lru_cache(maxsize=2048)
def _class_states(f: tuple, N: int, step: int):
    """Profile and the states ``s(step*m) mod N`` for ``m < rho + pi``."""
    if N == 1:
        return 0, 1, ((0,) * (len(f) - 1),)
    prof = detect_period(f, N)
    rho, pi = stepped_profile(prof, step)
    alpha = tuple(-c for c in f[:-1])
    st = _initial(len(alpha), N)
    out = []
    for n in range(step * (rho + pi)):
        if n % step == 0:
            out.append(st)
        st = _step(st, alpha, N)
    return rho, pi, tuple(out)


# completeness --------------------------------------------------------------------------


@dataclass
class CompletenessStatus:
    tag: str  # "complete" | "bounded"
    bound: Optional[int] = None
    certificates: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.tag == "complete"

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "bound": self.bound,
            "certificates": self.certificates,
            "notes": self.notes,
        }


def combine_status(statuses: Sequence[CompletenessStatus]) -> CompletenessStatus:
    statuses = list(statuses)
    if all(s.complete for s in statuses):
        certs = [c for s in statuses for c in s.certificates]
        return CompletenessStatus("complete", None, certs, [n for s in statuses for n in s.notes])
    bound = max((s.bound for s in statuses if s.bound is not None), default=None)
    return CompletenessStatus(
        "bounded",
        bound,
        [c for s in statuses for c in s.certificates],
        [n for s in statuses for n in s.notes],
    )


# per-coordinate class bookkeeping -------------------------------------------------------


def _compress(residues: set, rho: int, pi: int) -> tuple:
    """Smallest divisor ``p`` of ``pi`` such that the residue set (inside
    ``[rho, rho+pi)``) is a union of classes mod ``p``; returns ``(p, reps)``."""
    for p in sorted(d for d in range(1, pi + 1) if pi % d == 0):
        keys = {r % p for r in residues}
        if len(keys) * (pi // p) == len(residues):
            reps = sorted(rho + ((key - rho) % p) for key in keys)
            return p, reps
    return pi, sorted(residues)


def _coordinate_options(explicit: Sequence[int], residues: set, rho: int, pi: int) -> list:
    """Options for one coordinate: ``("pt", m)`` or ``("cls", c, p)`` meaning
    ``{c + p t : t >= 0}``.  Explicit points that extend a class downward are
    folded into it."""
    opts = []
    pts = set(explicit)
    if residues:
        p, reps = _compress(residues, rho, pi)
        for c in reps:
            while c - p >= 0 and (c - p) in pts:
                pts.discard(c - p)
                c -= p
            opts.append(("cls", c, p))
    opts.extend(("pt", m) for m in sorted(pts))
    return opts


def _emit(k: int, choices: Sequence[list]):
    """Product of per-coordinate option lists -> (explicit tuples, cosets)."""
    explicit, cosets = [], []
    for combo in itertools.product(*choices):
        off = [opt[1] for opt in combo]
        gens = []
        for i, opt in enumerate(combo):
            if opt[0] == "cls":
                gens.append([opt[2] if r == i else 0 for r in range(k)])
        if gens:
            cosets.append(BoundedLatticeCoset.make(off, gens, off))
        else:
            explicit.append(tuple(off))
    return explicit, cosets


def _coordinate_classes(f: tuple, N: int, step: int, value_of) -> dict:
    """Group the classes of one coordinate by ``value_of(state)``.

    Returns ``{value: (explicit list, residue set, rho, pi)}``."""
    rho, pi, states = _class_states(f, N, step)
    groups = {}
    for m, st in enumerate(states):
        v = value_of(st)
        ex, res = groups.setdefault(v, ([], set()))
        if m < rho:
            ex.append(m)
        else:
            res.add(m)
    return {v: (ex, res, rho, pi) for v, (ex, res) in groups.items()}


def _norm_steps(steps, k: int) -> tuple:
    if steps is None:
        return (1,) * k
    steps = tuple(int(s) for s in steps)
    if len(steps) != k or any(s < 1 for s in steps):
        raise InputError("steps must be k positive integers")
    return steps


def _check_coeffs(d, g: int, k: int):
    if len(d) != g or any(len(row) != k for row in d):
        raise InputError(f"coefficient block must be {g}x{k}")


# congruences -----------------------------------------------------------------------------


def _normalize_constraints(f: tuple, constraints, k: int) -> list:
    g = len(f) - 1
    cons = []
    for d, D1, D2 in constraints:
        if D2 < 2:
            raise InputError("congruence moduli must be >= 2")
        _check_coeffs(d, g, k)
        cons.append((d, D1 % D2, D2))
    return cons


def _satisfying_combos(f: tuple, cons: list, k: int, steps: tuple):
    """Per-coordinate class groups and the value combinations meeting every
    congruence.  The last coordinate is matched by lookup."""
    g = len(f) - 1
    N = 1
    for _, _, D2 in cons:
        N = _lcm(N, D2)
    per_coord = []
    for i in range(k):
        def value_of(st, i=i):
            return tuple(sum(d[j][i] * st[j] for j in range(g)) % D2 for d, _, D2 in cons)

        per_coord.append(_coordinate_classes(f, N, steps[i], value_of))
    keys = [sorted(pc) for pc in per_coord]
    last = per_coord[-1]
    combos = []
    for head in itertools.product(*keys[:-1]):
        need = tuple((D1 - sum(v[c] for v in head)) % D2 for c, (_, D1, D2) in enumerate(cons))
        if need in last:
            combos.append(head + (need,))
    return per_coord, combos


def solve_congruences(f: Sequence[int], constraints: Sequence, k: int, steps=None) -> ExponentSet:
    """Exact solution set of a congruence system in ``k`` exponent variables."""
    f = _check_f(f)
    steps = _norm_steps(steps, k)
    cons = _normalize_constraints(f, constraints, k)
    if not cons:
        return ExponentSet.everything(k)
    if k == 0:
        ok = all(D1 % D2 == 0 for _, D1, D2 in cons)
        return ExponentSet(0, [()] if ok else [])
    per_coord, combos = _satisfying_combos(f, cons, k, steps)
    all_choices = [[_coordinate_options(*per_coord[i][v]) for i, v in enumerate(combo)] for combo in combos]
    pieces = 0
    for choices in all_choices:
        size = 1
        for opts in choices:
            size *= len(opts)
        pieces += size
    if pieces > MAX_PIECES:
        N = 1
        for _, _, D2 in cons:
            N = _lcm(N, D2)
        period = per_coord[0][combos[0][0]][3] if combos else None
        raise RefusalError(
            f"exact solution set needs {pieces} pieces (limit {MAX_PIECES})",
            {"reason": "solution set too large", "pieces": pieces, "limit": MAX_PIECES,
             "modulus": N, "class_period": period},
        )
    explicit, cosets = [], []
    for choices in all_choices:
        ex, cs = _emit(k, choices)
        explicit += ex
        cosets += cs
    return ExponentSet(k, explicit, cosets)


@dataclass(frozen=True)
class PeriodicSet:
    """``{n < rho : n in explicit} ∪ {n >= rho : n mod period in residues}``."""

    explicit: frozenset
    rho: int
    period: int
    residues: frozenset

    def __contains__(self, n: int) -> bool:
        return n in self.explicit if n < self.rho else (n % self.period) in self.residues

    def is_finite(self) -> bool:
        return not self.residues

    def intersect(self, other: "PeriodicSet") -> "PeriodicSet":
        rho = max(self.rho, other.rho)
        P = _lcm(self.period, other.period)
        ex = frozenset(n for n in range(rho) if n in self and n in other)
        res = frozenset()
        if self.residues and other.residues:
            res = frozenset(
                r for r in range(P) if r % self.period in self.residues and r % other.period in other.residues
            )
        return PeriodicSet(ex, rho, P, res)


def congruence_marginals(f, constraints, k: int, steps, coords: Sequence[int]) -> list:
    """For each variable in ``coords``, the set of values it takes over the
    solutions of the congruence system (as a PeriodicSet)."""
    f = _check_f(f)
    steps = _norm_steps(steps, k)
    cons = _normalize_constraints(f, constraints, k)
    if not cons:
        return [PeriodicSet(frozenset(), 0, 1, frozenset([0])) for _ in coords]
    per_coord, combos = _satisfying_combos(f, cons, k, steps)
    out = []
    for i in coords:
        vals = {combo[i] for combo in combos}
        ex, res, rho, pi = set(), set(), 0, 1
        for v in vals:
            e, r, rho, pi = per_coord[i][v]
            ex.update(e)
            res.update(x % pi for x in r)
        out.append(PeriodicSet(frozenset(ex), rho, pi, frozenset(res)))
    return out


# equations ----------------------------------------------------------------------------------


class _Coordinate:
    """Exact values ``W(m) = (form_r(z_{., step*m}))_r`` of one variable."""

    def __init__(self, f: tuple, forms, i: int, step: int):
        self.states = exact_states(f)
        self.g = len(f) - 1
        self.rows = [[d[j][i] for j in range(self.g)] for d, _ in forms]
        self.step = step
        self.cache = []

    def __call__(self, m: int) -> tuple:
        while len(self.cache) <= m:
            st = self.states[self.step * len(self.cache)]
            self.cache.append(tuple(sum(a * b for a, b in zip(row, st)) for row in self.rows))
        return self.cache[m]

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def exact_period(self, cap: int = PERIODIC_CAP):
        """``(rho, pi)`` if the value sequence is eventually periodic over Z (found
        within ``cap`` steps), else None.  Windows of length g determine the
        future, so a repeated window proves periodicity."""
        if self.is_zero():
            return 0, 1
        seen = {}
        for m in range(cap):
            w = tuple(self(m + t) for t in range(self.g))
            if w in seen:
                return seen[w], m - seen[w]
            seen[w] = m
        return None


def _growing_solutions(coords, idx: list, target: tuple, bound: int) -> list:
    """All tuples (over the coordinates ``idx``) in ``[0, bound]`` whose values sum to ``target``."""
    if not idx:
        return [()] if not any(target) else []
    last = coords[idx[-1]]
    table = {}
    for m in range(bound + 1):
        table.setdefault(last(m), []).append(m)
    out = []
    for pre in itertools.product(range(bound + 1), repeat=len(idx) - 1):
        need = list(target)
        for c, m in zip(idx, pre):
            v = coords[c](m)
            for r in range(len(need)):
                need[r] -= v[r]
        for m in table.get(tuple(need), ()):
            out.append(pre + (m,))
    return out


def _find_families(coords, idx: list, target: tuple, sols: list, g: int) -> list:
    """Two-coordinate families ``start + t*(u e_a + u' e_b)`` (t >= 0) through known
    solutions, each verified on ``2g+1`` consecutive terms, which forces the
    identity for all ``t`` (the value along the line obeys a recurrence of order
    at most ``2g+1`` once the constant target is subtracted)."""
    fams = set()
    nsteps = [(u, v) for u in range(1, FAMILY_STEP_MAX + 1) for v in range(1, FAMILY_STEP_MAX + 1) if gcd(u, v) == 1]
    for s in sols:
        for pa, pb in itertools.combinations(range(len(idx)), 2):
            for u, v in nsteps:
                t0 = min(s[pa] // u, s[pb] // v)
                start = list(s)
                start[pa] -= t0 * u
                start[pb] -= t0 * v
                key = (tuple(start), pa, pb, u, v)
                if key in fams:
                    continue
                ok = True
                for t in range(2 * g + 1):
                    pt = list(start)
                    pt[pa] += t * u
                    pt[pb] += t * v
                    tot = [0] * len(target)
                    for c, m in zip(idx, pt):
                        val = coords[c](m)
                        for r in range(len(tot)):
                            tot[r] += val[r]
                    if tuple(tot) != target:
                        ok = False
                        break
                if ok:
                    fams.add(key)
    return sorted(fams)


def _sieve(f, forms, congruences, k, steps, moduli, growing: list):
    """Look for moduli whose reductions confine every growing variable to
    finitely many values.

    Each solution of the system also solves its reduction modulo ``N``, so the
    values a variable takes on solutions lie in the marginal of the modular
    solution set, and in the intersection of such marginals over several
    moduli.  Returns ``(certificates, sorted candidate values per growing
    variable)`` or ``([], None)``."""
    acc = None
    used = []
    for N in moduli:
        if N < 2:
            continue
        prof = detect_period(f, N)
        if max(sum(stepped_profile(prof, s)) for s in steps) > SIEVE_PERIOD_CAP:
            continue
        cons = list(congruences) + [(d, D % N, N) for d, D in forms]
        marg = congruence_marginals(f, cons, k, steps, growing)
        if all(a.is_finite() for a in marg):
            acc, used = marg, [N]
        elif acc is None:
            acc, used = marg, [N]
        else:
            if any(_lcm(a.period, b.period) > MARGINAL_PERIOD_CAP for a, b in zip(acc, marg)):
                continue
            acc = [a.intersect(b) for a, b in zip(acc, marg)]
            used.append(N)
        if all(a.is_finite() for a in acc):
            vals = [sorted(a.explicit) for a in acc]
            cert = {"kind": "sieve", "moduli": used, "candidates": {str(i): v for i, v in zip(growing, vals)}}
            return [cert], vals
    return [], None


def default_sieve_moduli(extra=()) -> list:
    out = [q for q in range(2, 65) if _is_prime_power(q)]
    for e in extra:
        if e >= 2 and e not in out:
            out.append(e)
    return out


def _is_prime_power(q: int) -> bool:
    p = next(d for d in range(2, q + 1) if q % d == 0)
    while q % p == 0:
        q //= p
    return q == 1


def solve_system(f, congruences, forms, k: int, N_max: int = 64, sieve_moduli=None, steps=None):
    """Solutions of congruences and integer forms together.

    Returns ``(ExponentSet, CompletenessStatus)``.  Congruences are solved
    exactly.  For the forms, variables whose values are periodic over Z are
    handled by residue classes and the remaining ("growing") variables are
    searched in ``[0, N_max]``; the status is complete when the modular sieve
    confines the growing variables to finitely many values, all of which the
    search covered."""
    f = _check_f(f)
    g = len(f) - 1
    steps = _norm_steps(steps, k)
    if N_max < 1:
        raise InputError("N_max must be >= 1")
    forms = [(d, int(D)) for d, D in forms]
    for d, _ in forms:
        _check_coeffs(d, g, k)
    C = solve_congruences(f, congruences, k, steps)
    if not forms:
        return C, CompletenessStatus("complete", None, [{"kind": "congruences-exact"}])

    coords = [_Coordinate(f, forms, i, steps[i]) for i in range(k)]
    periods = [c.exact_period() for c in coords]
    periodic = [i for i in range(k) if periods[i] is not None]
    growing = [i for i in range(k) if periods[i] is None]
    target = tuple(D for _, D in forms)

    certs, shadow = [], None
    if growing:
        if sieve_moduli is None:
            sieve_moduli = default_sieve_moduli()
        certs, shadow = _sieve(f, forms, congruences, k, steps, sieve_moduli, growing)
    bound = N_max
    if shadow is not None:
        top = max((x for v in shadow for x in v), default=0)
        if top <= SIEVE_PERIOD_CAP:
            bound = max(N_max, top)
        else:
            certs, shadow = [], None

    # classes of the periodic coordinates, grouped by value
    pgroups = []
    for i in periodic:
        rho, pi = periods[i]
        groups = {}
        for m in range(rho + pi):
            ex, res = groups.setdefault(coords[i](m), ([], set()))
            (ex.append(m) if m < rho else res.add(m))
        pgroups.append({v: (ex, res, rho, pi) for v, (ex, res) in groups.items()})

    explicit, cosets = [], []
    families_found = []
    memo = {}
    for combo in itertools.product(*[sorted(pg) for pg in pgroups]):
        rest = list(target)
        for v in combo:
            for r in range(len(rest)):
                rest[r] -= v[r]
        rest = tuple(rest)
        if rest not in memo:
            sols = _growing_solutions(coords, growing, rest, bound)
            fams = _find_families(coords, growing, rest, sols, g) if len(growing) >= 2 else []
            memo[rest] = (sols, fams)
        sols, fams = memo[rest]
        if not sols:
            continue
        base_choices = [None] * k
        for i, v, pg in zip(periodic, combo, pgroups):
            base_choices[i] = _coordinate_options(*pg[v])
        for s in sols:
            choices = list(base_choices)
            for i, m in zip(growing, s):
                choices[i] = [("pt", m)]
            ex, cs = _emit(k, choices)
            explicit += ex
            cosets += cs
        for start, pa, pb, u, v in fams:
            families_found.append((growing[pa], growing[pb], u, v))
            vec = [0] * k
            vec[growing[pa]] = u
            vec[growing[pb]] = v
            for popts in itertools.product(*[base_choices[i] for i in periodic]):
                off = [0] * k
                gens = [vec]
                for i, opt in zip(periodic, popts):
                    off[i] = opt[1]
                    if opt[0] == "cls":
                        gens.append([opt[2] if r == i else 0 for r in range(k)])
                for i, m in zip(growing, start):
                    off[i] = m
                cosets.append(BoundedLatticeCoset.make(off, gens, off))
    E = es_intersect(ExponentSet(k, explicit, cosets), C)

    if not growing:
        status = CompletenessStatus("complete", None, [{"kind": "periodic-exact"}])
    elif families_found:
        status = CompletenessStatus(
            "bounded", N_max, certs,
            [f"infinite family along coordinates {a},{b} with steps ({u},{v})" for a, b, u, v in sorted(set(families_found))],
        )
    elif shadow is not None:
        status = CompletenessStatus("complete", None, certs)
    else:
        status = CompletenessStatus("bounded", N_max, [], ["no sieve modulus confined the growing variables"])
    return E, status


def solve_equations(f, forms, k: int, N_max: int = 64, sieve_moduli=None, steps=None, congruences=()):
    """Integer forms (with optional sibling congruences); see ``solve_system``."""
    return solve_system(f, congruences, forms, k, N_max, sieve_moduli, steps)


def evaluate_form(f, d, n: Sequence[int], steps=None) -> int:
    """``sum_{j,i} d[j][i] z_{j, s_i n_i}`` computed exactly."""
    f = _check_f(f)
    st = exact_states(f)
    steps = _norm_steps(steps, len(n))
    total = 0
    for i, ni in enumerate(n):
        s = st[steps[i] * ni]
        total += sum(d[j][i] * s[j] for j in range(len(s)))
    return total
