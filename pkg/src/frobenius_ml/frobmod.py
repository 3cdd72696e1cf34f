"""Finitely generated Z[F]-modules  M = Z^m (+) Z/d_1 (+) ... (+) Z/d_s.

The endomorphism F acts on column vectors (free | torsion) by the block matrix
``[[A_ff, 0], [A_tf, A_tt]]``.  The polynomial ``f`` (low-degree-first integer
coefficients) is expected to be monic with ``f(F) = 0``; ``validate`` checks
that, and the fundamental sequences ``z_{j,n}`` are driven by it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd, prod
from typing import Sequence

import sympy

from .errors import InputError
from .exactcore import IntMatrix, charpoly, det, hnf_basis, lattice_member

TORSION_ENUM_LIMIT = 200_000


@dataclass(frozen=True)
class ModElement:
    """A point of the module: free coordinates plus reduced torsion coordinates."""

    free: tuple
    tors: tuple = ()
    orders: tuple = ()

    def __post_init__(self):
        if len(self.tors) != len(self.orders):
            raise InputError("torsion coordinates do not match the torsion orders")
        object.__setattr__(self, "free", tuple(int(x) for x in self.free))
        object.__setattr__(self, "tors", tuple(int(x) % d for x, d in zip(self.tors, self.orders)))

    def _same(self, other: "ModElement"):
        if len(self.free) != len(other.free) or self.orders != other.orders:
            raise InputError("elements of different modules")

    def __add__(self, other: "ModElement") -> "ModElement":
        self._same(other)
        return ModElement(
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.tors, other.tors)),
            self.orders,
        )

    def __neg__(self) -> "ModElement":
        return ModElement(tuple(-a for a in self.free), tuple(-a for a in self.tors), self.orders)

    def __sub__(self, other: "ModElement") -> "ModElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "ModElement":
        return ModElement(tuple(k * a for a in self.free), tuple(k * a for a in self.tors), self.orders)

    def is_zero(self) -> bool:
        return not any(self.free) and not any(self.tors)

    def flat(self) -> list:
        return list(self.free) + list(self.tors)

    def sort_key(self):
        return (self.free, self.tors)

    def __str__(self):
        if not self.orders:
            return f"({', '.join(map(str, self.free))})"
        return f"({', '.join(map(str, self.free))}; {', '.join(map(str, self.tors))})"


def _as_rows(mat, rows: int, cols: int, name: str) -> tuple:
    if isinstance(mat, IntMatrix):
        mat = mat.tolist()
    mat = [list(r) for r in (mat or [])]
    if rows == 0:
        if any(mat):
            raise InputError(f"{name} must be empty")
        return ()
    if cols == 0 and not any(mat):
        return ((),) * rows
    if len(mat) != rows or any(len(r) != cols for r in mat):
        raise InputError(f"{name} must be {rows}x{cols}, got {len(mat)} rows")
    return tuple(tuple(int(x) for x in r) for r in mat)


@dataclass(frozen=True)
class FgModule:
    free_rank: int
    torsion_orders: tuple
    A_ff: tuple
    A_tf: tuple
    A_tt: tuple
    f: tuple

    def __init__(self, free_rank: int, torsion_orders=(), A_ff=(), A_tf=(), A_tt=(), f=None):
        m = int(free_rank)
        if m < 0:
            raise InputError("free rank must be nonnegative")
        d = tuple(int(x) for x in torsion_orders)
        if any(x < 2 for x in d):
            raise InputError(f"torsion orders must be >= 2, got {d}")
        s = len(d)
        a_ff = _as_rows(A_ff, m, m, "A_ff")
        a_tf = _as_rows(A_tf, s, m, "A_tf")
        a_tt = _as_rows(A_tt, s, s, "A_tt")
        a_tf = tuple(tuple(x % d[i] for x in r) for i, r in enumerate(a_tf))
        a_tt = tuple(tuple(x % d[i] for x in r) for i, r in enumerate(a_tt))
        bad = [
            f"torsion generator {j} (order {d[j]}) -> coordinate {i}: {d[j]}*{a_tt[i][j]} != 0 mod {d[i]}"
            for i in range(s)
            for j in range(s)
            if (d[j] * a_tt[i][j]) % d[i]
        ]
        if bad:
            raise InputError("F is not a homomorphism on torsion: " + "; ".join(bad))
        if f is None:
            raise InputError("a polynomial f must be supplied (see candidate_min_poly)")
        f = tuple(int(c) for c in f)
        while len(f) > 1 and f[-1] == 0:
            f = f[:-1]
        if len(f) < 2:
            raise InputError("f must have degree >= 1")
        for name, val in (("free_rank", m), ("torsion_orders", d), ("A_ff", a_ff),
                          ("A_tf", a_tf), ("A_tt", a_tt), ("f", f)):
            object.__setattr__(self, name, val)

    # shape ---------------------------------------------------------------
    @property
    def s(self) -> int:
        return len(self.torsion_orders)

    @property
    def g(self) -> int:
        return len(self.f) - 1

    @property
    def alpha(self) -> tuple:
        """``f = X^g - sum alpha_i X^i``."""
        return tuple(-c for c in self.f[:-1])

    @property
    def torsion_exponent(self) -> int:
        e = 1
        for d in self.torsion_orders:
            e = e * d // gcd(e, d)
        return e

    def element(self, free=(), tors=()) -> ModElement:
        free = tuple(free) or (0,) * self.free_rank
        tors = tuple(tors) or (0,) * self.s
        if len(free) != self.free_rank or len(tors) != self.s:
            raise InputError(f"element shape ({len(free)};{len(tors)}) vs module ({self.free_rank};{self.s})")
        return ModElement(free, tors, self.torsion_orders)

    def from_flat(self, vec: Sequence[int]) -> ModElement:
        if len(vec) != self.free_rank + self.s:
            raise InputError(f"expected {self.free_rank + self.s} coordinates, got {len(vec)}")
        return self.element(vec[: self.free_rank], vec[self.free_rank:])

    def zero(self) -> ModElement:
        return self.element()

    def generators(self) -> list:
        n = self.free_rank + self.s
        return [self.from_flat([int(i == k) for i in range(n)]) for k in range(n)]

    def block_matrix(self) -> IntMatrix:
        """Integer lift of the full action on Z^(m+s)."""
        m, s = self.free_rank, self.s
        rows = [list(self.A_ff[i]) + [0] * s for i in range(m)]
        rows += [list(self.A_tf[i]) + list(self.A_tt[i]) for i in range(s)]
        return IntMatrix(rows, cols=m + s)

    # action ----------------------------------------------------------------
    def apply(self, P: ModElement) -> ModElement:
        x = P.free
        free = tuple(sum(a * b for a, b in zip(row, x)) for row in self.A_ff)
        tors = tuple(
            sum(a * b for a, b in zip(self.A_tf[i], x)) + sum(a * b for a, b in zip(self.A_tt[i], P.tors))
            for i in range(self.s)
        )
        return ModElement(free, tors, self.torsion_orders)

    def __str__(self):
        return f"Z^{self.free_rank}" + "".join(f" + Z/{d}" for d in self.torsion_orders)


def poly_at_module(module: FgModule, coeffs: Sequence[int], P: ModElement) -> ModElement:
    """``c(F) P`` for an integer polynomial ``c`` (low-degree first)."""
    acc = module.zero()
    cur = P
    for i, c in enumerate(coeffs):
        if c:
            acc = acc + c * cur
        if i + 1 < len(coeffs):
            cur = module.apply(cur)
    return acc


def annihilates(module: FgModule, coeffs: Sequence[int]) -> bool:
    return all(poly_at_module(module, coeffs, e).is_zero() for e in module.generators())


def relation_columns(module: FgModule) -> list:
    """Columns ``d_i e_(m+i)`` that present the torsion relations inside Z^(m+s)."""
    n = module.free_rank + module.s
    return [[d if r == module.free_rank + i else 0 for r in range(n)] for i, d in enumerate(module.torsion_orders)]


def subgroup_member(module: FgModule, generators, P: ModElement) -> bool:
    """Is ``P`` an integer combination of ``generators`` in M?"""
    cols = [g.flat() for g in generators] + relation_columns(module)
    if not cols:
        return P.is_zero()
    A = IntMatrix.from_columns(cols, rows=module.free_rank + module.s)
    return lattice_member(A, P.flat()) is not None


# fundamental sequences ---------------------------------------------------------


_Z_ROWS: dict = {}


def _z_rows(f: tuple, n_max: int) -> list:
    """Per-``f`` table, extended on demand and shared between calls."""
    g = len(f) - 1
    rows = _Z_ROWS.get(f)
    if rows is None:
        rows = [[int(n == j) for n in range(g)] for j in range(g)]
        _Z_ROWS[f] = rows
    alpha = [-c for c in f[:-1]]
    terms = [(l, a) for l, a in enumerate(alpha) if a]
    for z in rows:
        for n in range(len(z), n_max + 1):
            z.append(sum(a * z[n - g + l] for l, a in terms))
    return rows


def z_block(f: Sequence[int], n_max: int) -> tuple:
    """Rows ``z[j] = (z_{j,0}, ..., z_{j,n_max})`` for ``0 <= j < g``."""
    f = _check_monic(f)
    if n_max < 0:
        raise InputError("n_max must be nonnegative")
    return tuple(tuple(z[: n_max + 1]) for z in _z_rows(f, int(n_max)))


def z_value(f: Sequence[int], j: int, n: int) -> int:
    return _z_rows(_check_monic(f), n)[j][n]


def _check_monic(f) -> tuple:
    f = tuple(int(c) for c in f)
    if len(f) < 2 or f[-1] != 1:
        raise InputError("z_block needs a monic polynomial of degree >= 1")
    return f


def _matmul_mod(A, B, mods):
    """Product of square matrices, reducing row ``i`` modulo ``mods[i]`` when set."""
    n = len(A)
    out = []
    for i in range(n):
        row = [sum(A[i][t] * B[t][j] for t in range(n) if A[i][t]) for j in range(n)]
        if mods[i]:
            row = [x % mods[i] for x in row]
        out.append(row)
    return out


def frob_power(module: FgModule, P: ModElement, n: int) -> ModElement:
    """``F^n P`` by square-and-multiply on the block matrix; torsion rows are
    reduced modulo their orders, which leaves the action unchanged."""
    if n < 0:
        raise InputError("Frobenius power must be nonnegative")
    if n < 8:
        for _ in range(n):
            P = module.apply(P)
        return P
    size = module.free_rank + module.s
    mods = [0] * module.free_rank + list(module.torsion_orders)
    base = module.block_matrix().tolist()
    acc = [[int(i == j) for j in range(size)] for i in range(size)]
    while n:
        if n & 1:
            acc = _matmul_mod(acc, base, mods)
        base = _matmul_mod(base, base, mods)
        n >>= 1
    v = P.flat()
    return module.from_flat([sum(a * b for a, b in zip(row, v)) for row in acc])


def frob_orbit(module: FgModule, P: ModElement, count: int) -> list:
    """``[P, FP, ..., F^(count-1) P]``."""
    out = [P]
    for _ in range(count - 1):
        out.append(module.apply(out[-1]))
    return out


def frob_power_via_z(module: FgModule, P: ModElement, n: int) -> ModElement:
    if n < 0:
        raise InputError("Frobenius power must be nonnegative")
    z = _z_rows(_check_monic(module.f), n)
    acc = module.zero()
    for j, FjP in enumerate(frob_orbit(module, P, module.g)):
        c = z[j][n]
        if c:
            acc = acc + c * FjP
    return acc


# candidate polynomials -----------------------------------------------------------


def charpoly_candidate(module: FgModule) -> tuple:
    """Characteristic polynomial of ``A_ff`` (annihilates the free quotient only)."""
    if module.free_rank == 0:
        return (0, 1)
    return tuple(charpoly(IntMatrix(module.A_ff, cols=module.free_rank)))


def _factor(coeffs: Sequence[int]) -> list:
    X = sympy.Symbol("X")
    poly = sympy.Poly(list(reversed(coeffs)), X)
    _, facs = sympy.factor_list(poly)
    return [(tuple(int(c) for c in reversed(fp.all_coeffs())), int(e)) for fp, e in facs]


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> tuple:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def candidate_min_poly(module: FgModule, max_degree: int = None) -> tuple:
    """Smallest-degree monic divisor of the block characteristic polynomial that
    annihilates every generator.  The block polynomial itself always works
    (Cayley-Hamilton on the integer lift)."""
    n = module.free_rank + module.s
    if n == 0:
        return (0, 1)
    block = tuple(charpoly(module.block_matrix()))
    facs = _factor(block)
    best = block
    ranges = [range(e + 1) for _, e in facs]
    for exps in itertools.product(*ranges):
        deg = sum((len(fp) - 1) * k for (fp, _), k in zip(facs, exps))
        if deg == 0 or deg >= len(best) - 1:
            continue
        cand = (1,)
        for (fp, _), k in zip(facs, exps):
            for _ in range(k):
                cand = _poly_mul(cand, fp)
        if annihilates(module, cand):
            best = cand
    if max_degree is not None and len(best) - 1 > max_degree:
        raise InputError(f"no annihilating polynomial of degree <= {max_degree}")
    return best


# validation -------------------------------------------------------------------------


@dataclass
class AxiomCheck:
    name: str
    status: str  # "pass" | "fail"
    detail: str
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"axiom": self.name, "status": self.status, "detail": self.detail, "data": self.data}


@dataclass
class ValidationReport:
    checks: dict

    @property
    def ok(self) -> bool:
        return all(c.status == "pass" for c in self.checks.values())

    def passed(self, axiom: str) -> bool:
        return self.checks[axiom].status == "pass"

    def to_dict(self) -> dict:
        return {k: v.to_dict() for k, v in sorted(self.checks.items())}


def _torsion_injective(module: FgModule):
    d = module.torsion_orders
    size = prod(d)
    if size > TORSION_ENUM_LIMIT:
        raise InputError(f"torsion group of order {size} is too large to enumerate")
    for t in itertools.product(*(range(x) for x in d)):
        if not any(t):
            continue
        img = [sum(a * b for a, b in zip(module.A_tt[i], t)) % d[i] for i in range(module.s)]
        if not any(img):
            return t
    return None


def shortest_vector(hcols: list, dim: int, bound: int):
    """Smallest sup-norm nonzero vector of the lattice with HNF columns ``hcols``
    among those of sup norm ``<= bound``; ``None`` when there is none.

    Lattice points in the box are enumerated row by row through the echelon
    shape, so the cost tracks the number of lattice points, not the box volume."""
    from .exactcore.intmat import pivot_rows

    prow = pivot_rows(hcols)
    col_at = {p: t for t, p in enumerate(prow)}
    best = [None, bound + 1]

    def rec(i, x):
        if i == dim:
            nrm = max((abs(v) for v in x), default=0)
            if 0 < nrm < best[1]:
                best[0], best[1] = tuple(x), nrm
            return
        lim = best[1] - 1
        t = col_at.get(i)
        if t is None:
            if abs(x[i]) <= lim:
                rec(i + 1, x)
            return
        col = hcols[t]
        piv = col[i]
        ys = range(-((lim + x[i]) // piv), (lim - x[i]) // piv + 1)
        # small coordinates first, so the bound tightens early
        for y in sorted(ys, key=lambda y: abs(x[i] + y * piv)):
            if abs(x[i] + y * piv) >= best[1]:
                break
            nx = list(x)
            for r in range(i, dim):
                nx[r] += y * col[r]
            rec(i + 1, nx)

    rec(0, [0] * dim)
    return best[0]


def image_lattice_chain(A_ff: IntMatrix, steps: int = 10, bound: int = None) -> list:
    """Shortest-vector sup norms of ``image(A^n)`` for ``n = 1..steps``.

    An entry ``None`` certifies that ``image(A^n)`` (and so the intersection of the
    whole chain) has no nonzero vector of sup norm ``<= bound``."""
    m = A_ff.rows
    if bound is None:
        bound = 1 << 12
    out = []
    P = IntMatrix.identity(m)
    for _ in range(steps):
        P = A_ff @ P
        h = hnf_basis(P.columns(), m)
        v = shortest_vector(h, m, bound)
        out.append(max(abs(x) for x in v) if v is not None else None)
    return out, bound


def validate(module: FgModule, chain_steps: int = 10) -> ValidationReport:
    checks = {}
    m = module.free_rank

    # (ii) integrality
    monic = module.f[-1] == 1
    killers = [str(e) for e in module.generators() if not poly_at_module(module, module.f, e).is_zero()]
    if monic and not killers:
        checks["ii"] = AxiomCheck("ii", "pass", "f is monic and f(F) kills every generator")
    else:
        why = [] if monic else ["f is not monic"]
        if killers:
            why.append("f(F) is nonzero on generators " + ", ".join(killers))
        checks["ii"] = AxiomCheck("ii", "fail", "; ".join(why))

    # (iii) F not a zero divisor
    dff = det(IntMatrix(module.A_ff, cols=m)) if m else 1
    kern = _torsion_injective(module) if module.s else None
    problems = []
    if dff == 0:
        problems.append("det(A_ff) = 0")
    if kern is not None:
        problems.append(f"A_tt kills the torsion element {kern}")
    checks["iii"] = AxiomCheck(
        "iii",
        "fail" if problems else "pass",
        "; ".join(problems) if problems else "F is injective on M",
        {"det_A_ff": dff, "torsion_kernel_witness": list(kern) if kern is not None else None},
    )

    # (iv) separatedness, on the free part
    if m == 0:
        checks["iv"] = AxiomCheck("iv", "pass", "no free part")
    else:
        cp = charpoly_candidate(module)
        facs = _factor(cp)
        unit_facs = [fp for fp, _ in facs if abs(fp[0]) == 1]
        chain, bound = ([], None)
        if dff != 0:
            chain, bound = image_lattice_chain(IntMatrix(module.A_ff, cols=m), chain_steps)
        data = {
            "charpoly": list(cp),
            "unit_constant_factors": [list(fp) for fp in unit_facs],
            "shortest_vector_chain": chain,
            "search_bound": bound,
        }
        if dff == 0:
            checks["iv"] = AxiomCheck("iv", "fail" if unit_facs else "pass",
                                      "factor test only (A_ff singular)", data)
        elif unit_facs:
            checks["iv"] = AxiomCheck(
                "iv", "fail",
                "charpoly(A_ff) has a factor with constant term +-1: part of the free module is infinitely F-divisible",
                data,
            )
        else:
            cert = chain and chain[-1] is None
            detail = "no factor of charpoly(A_ff) has constant term +-1"
            if cert:
                detail += f"; image(A_ff^{len(chain)}) has no nonzero vector of sup norm <= {bound}"
            checks["iv"] = AxiomCheck("iv", "pass", detail, data)
    return ValidationReport(checks)


def module_summary(module: FgModule) -> dict:
    return {
        "free_rank": module.free_rank,
        "torsion_orders": list(module.torsion_orders),
        "A_ff": [list(r) for r in module.A_ff],
        "A_tf": [list(r) for r in module.A_tf],
        "A_tt": [list(r) for r in module.A_tt],
        "f": list(module.f),
    }
