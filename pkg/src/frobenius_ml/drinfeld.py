"""Twisted polynomials, Drinfeld modules over F_q[t], and two executable examples.

A twisted polynomial ``sum c_i F^i`` over ``F_{q^a}`` multiplies by the rule
``F c = c^q F``, i.e. as composition of the q-linear maps ``x -> sum c_i x^(q^i)``.
A Drinfeld module is fixed by the image ``phi_t`` of ``t``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import InputError
from .exactcore import GF, FqPoly, FqRat, frobpow_rat, prime_power
from .exactcore.gf import FiniteField


class TwistedPoly:
    """Dense twisted polynomial; ``coeffs[i]`` multiplies ``F^i``."""

    __slots__ = ("field", "q", "coeffs")

    def __init__(self, field: FiniteField, q: int, coeffs: Sequence[int] = ()):
        coeffs = [int(c) for c in coeffs]
        for c in coeffs:
            if not 0 <= c < field.order:
                raise InputError(f"coefficient {c} is not an element of {field!r}")
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.field = field
        self.q = q
        self.coeffs = tuple(coeffs)

    @classmethod
    def F(cls, field, q, power: int = 1, c: int = 1) -> "TwistedPoly":
        return cls(field, q, [0] * power + [c])

    @classmethod
    def const(cls, field, q, c: int) -> "TwistedPoly":
        return cls(field, q, [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> int:
        """F-adic valuation: the largest v with ``self = F^v * w``."""
        if self.is_zero():
            raise InputError("the zero twisted polynomial has infinite F-adic valuation")
        return next(i for i, c in enumerate(self.coeffs) if c)

    def support(self) -> list:
        return [i for i, c in enumerate(self.coeffs) if c]

    def _check(self, other: "TwistedPoly"):
        if not isinstance(other, TwistedPoly) or other.field != self.field or other.q != self.q:
            raise InputError("twisted polynomials live over different rings")

    def __eq__(self, other):
        return (
            isinstance(other, TwistedPoly)
            and self.field == other.field
            and self.q == other.q
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.q, self.coeffs))

    def __add__(self, other: "TwistedPoly") -> "TwistedPoly":
        self._check(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        a = a + (0,) * (n - len(a))
        b = b + (0,) * (n - len(b))
        return TwistedPoly(self.field, self.q, [self.field.add(x, y) for x, y in zip(a, b)])

    def __neg__(self) -> "TwistedPoly":
        return TwistedPoly(self.field, self.q, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other: "TwistedPoly") -> "TwistedPoly":
        return self + (-other)

    def __mul__(self, other: "TwistedPoly") -> "TwistedPoly":
        return tw_mul(self, other)

    def scale(self, c: int) -> "TwistedPoly":
        """Left multiplication by the constant ``c``."""
        return TwistedPoly(self.field, self.q, [self.field.mul(c, x) for x in self.coeffs])

    def __pow__(self, k: int) -> "TwistedPoly":
        out = TwistedPoly.const(self.field, self.q, 1)
        for _ in range(k):
            out = tw_mul(out, self)
        return out

    def __repr__(self):
        return f"TwistedPoly({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("F" if i == 1 else f"F^{i}")
            if not mono:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(parts)


def tw_mul(u: TwistedPoly, v: TwistedPoly) -> TwistedPoly:
    u._check(v)
    if u.is_zero() or v.is_zero():
        return TwistedPoly(u.field, u.q, ())
    K, q = u.field, u.q
    out = [0] * (len(u.coeffs) + len(v.coeffs) - 1)
    for i, c in enumerate(u.coeffs):
        if not c:
            continue
        for j, e in enumerate(v.coeffs):
            if e:
                out[i + j] = K.add(out[i + j], K.mul(c, K.frobenius(e, q, i)))
    return TwistedPoly(K, q, out)


def act(P: TwistedPoly, x):
    """Apply ``P`` to a rational function or to a vector of them."""
    if isinstance(x, FqRat):
        return _act_one(P, x)
    return [_act_one(P, xi) for xi in x]


def _act_one(P: TwistedPoly, x: FqRat) -> FqRat:
    K = x.field
    if K != P.field:
        # only prime-field coefficients have the same encoding in every field
        if K.p != P.field.p or any(c >= K.p for c in P.coeffs):
            raise InputError("point and operator live over incompatible fields")
    zero = FqRat(FqPoly(K, ()))
    out = zero
    for i, c in enumerate(P.coeffs):
        if c:
            out = out + frobpow_rat(x, i, P.q).scale(c)
    return out


@dataclass(frozen=True)
class DrinfeldModule:
    q: int
    field: FiniteField  # F_{q^a}
    phi_t: TwistedPoly

    def __post_init__(self):
        if self.phi_t.field != self.field or self.phi_t.q != self.q:
            raise InputError("phi_t must be a twisted polynomial over the module's field")
        if self.phi_t.degree < 1:
            raise InputError("phi_t needs positive F-degree")

    @classmethod
    def make(cls, q: int, phi_t: Sequence[int], a: int = 1) -> "DrinfeldModule":
        p, e = prime_power(q)
        K = GF(p, e * a)
        return cls(q, K, TwistedPoly(K, q, phi_t))

    @property
    def constants(self) -> list:
        """The copy of F_q inside the coefficient field."""
        return self.field.subfield(self.q)

    def check_constants(self, a: Sequence[int]):
        consts = set(self.constants)
        for b in a:
            if b not in consts:
                raise InputError(f"coefficient {b} does not lie in F_{self.q}")


def phi_eval(D: DrinfeldModule, a: Sequence[int]) -> TwistedPoly:
    """``phi_a`` for ``a = sum a[i] t^i`` (Horner in ``phi_t``)."""
    D.check_constants(a)
    out = TwistedPoly(D.field, D.q, ())
    for b in reversed(list(a)):
        out = tw_mul(out, D.phi_t) + TwistedPoly.const(D.field, D.q, b)
    return out


def lucas_binom(n: int, k: int, p: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    while n or k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        num = den = 1
        for j in range(ki):
            num = num * (ni - j) % p
            den = den * (j + 1) % p
        out = out * num * pow(den, -1, p) % p
        n //= p
        k //= p
    return out


def fq_poly_str(a: Sequence[int]) -> str:
    parts = []
    for i, c in enumerate(a):
        if not c:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        parts.append(str(c) if not mono else (mono if c == 1 else f"{c}{mono}"))
    return " + ".join(parts) if parts else "0"


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def two_term_survey(D: DrinfeldModule, deg_bound: int) -> list:
    """All ``a`` of degree at most ``deg_bound`` (any leading coefficient) with
    ``phi_a = F^n + F^m``, sorted by degree then coefficients."""
    if deg_bound < 1:
        raise InputError("deg_bound must be at least 1")
    K = D.field
    consts = D.constants
    powers = [TwistedPoly.const(K, D.q, 1)]
    for _ in range(deg_bound):
        powers.append(tw_mul(powers[-1], D.phi_t))
    width = powers[-1].degree + 1
    scaled = [
        {b: [K.mul(b, c) for c in P.coeffs] + [0] * (width - len(P.coeffs)) for b in consts}
        for P in powers
    ]
    add = K.add
    hits = []

    def walk(i, acc, coeffs):
        if i < 0:
            support = [j for j, c in enumerate(acc) if c]
            if len(support) == 2 and all(acc[j] == 1 for j in support):
                hits.append(_trim(reversed(coeffs)))
            return
        for b in consts:
            vec = scaled[i][b] if b else None
            walk(i - 1, [add(x, y) for x, y in zip(acc, vec)] if vec else acc, coeffs + [b])

    walk(deg_bound, [0] * width, [])
    hits.sort(key=lambda a: (len(a), a[::-1]))
    return hits


def survey_report(D: DrinfeldModule, deg_bound: int) -> dict:
    hits = two_term_survey(D, deg_bound)
    return {
        "q": D.q,
        "field_order": D.field.order,
        "phi_t": str(D.phi_t),
        "deg_bound": deg_bound,
        "two_term": [
            {"a": a, "a_readable": fq_poly_str(a), "phi_a": str(phi_eval(D, a)),
             "support": phi_eval(D, a).support()}
            for a in hits
        ],
    }


# -- the F_q[t][F^2]-module in G_a^2 --------------------------------------------

def sharp_lambda(K: FiniteField, q: int) -> int:
    """Least int-encoded element of ``K`` outside F_q (a generator of F_{q^2} over F_q)."""
    return next(a for a in K.elements() if K.pow(a, q) != a)


def _span(K: FiniteField, consts, vectors):
    """Row-reduced basis of the F_q-span of ``vectors`` (all entries in F_q)."""
    basis = []
    for v in vectors:
        v = list(v)
        for b, piv in basis:
            if v[piv]:
                c = v[piv]
                v = [K.sub(x, K.mul(c, y)) for x, y in zip(v, b)]
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            continue
        inv = K.inv(v[piv])
        v = [K.mul(inv, x) for x in v]
        basis = [(
            [K.sub(x, K.mul(b[piv], y)) for x, y in zip(b, v)] if b[piv] else b, p
        ) for b, p in basis]
        basis.append((v, piv))
    return [b for b, _ in basis]


def _combos(K, q, consts, basis, width):
    for cs in itertools.product(consts, repeat=len(basis)):
        vec = [0] * width
        for c, b in zip(cs, basis):
            if c:
                vec = [K.add(x, K.mul(c, y)) for x, y in zip(vec, b)]
        yield TwistedPoly(K, q, vec)


def sharp_scenario(q: int, deg_bound: int) -> dict:
    """Check the ``phi_t = F + F^3`` example on ``X: y = lambda x`` over an operator box.

    The box is the F_q-span of ``phi_t^i F^(2j)`` with ``3i + 2j <= deg_bound``;
    every module element of the cyclic F_q[t][F^2]-module generated by
    ``(t, lambda t)`` whose operator lies in the box is enumerated.
    """
    p, e = prime_power(q)
    K = GF(p, 2 * e)
    consts = K.subfield(q)
    lam = sharp_lambda(K, q)
    D = DrinfeldModule(q, K, TwistedPoly(K, q, [0, 1, 0, 1]))
    width = deg_bound + 1
    gens = []
    for i in range(deg_bound // 3 + 1):
        phi_i = phi_eval(D, [0] * i + [1])
        for j in range((deg_bound - 3 * i) // 2 + 1):
            op = tw_mul(phi_i, TwistedPoly.F(K, q, 2 * j))
            gens.append(list(op.coeffs) + [0] * (width - len(op.coeffs)))
    basis = _span(K, consts, gens)
    even_basis = [[1 if i == 2 * j else 0 for i in range(width)] for j in range(deg_bound // 2 + 1)]

    t = FqRat.t(K)
    lt = t.scale(lam)

    def on_X(pt):
        return pt[1] == pt[0].scale(lam)

    def point(op):
        return (act(op, t), act(op, lt))

    on_x_ops = [op for op in _combos(K, q, consts, basis, width) if on_X(point(op))]
    even_ops = list(_combos(K, q, consts, even_basis, width))
    on_x_points = {point(op) for op in on_x_ops}
    even_points = {point(op) for op in even_ops}

    phi_t2 = phi_eval(D, [0, 0, 1])
    stable = all(on_X((act(phi_t2, x), act(phi_t2, y))) for x, y in on_x_points)
    image_t = point(D.phi_t)
    return {
        "q": q,
        "field_order": K.order,
        "lambda": lam,
        "phi_t": str(D.phi_t),
        "phi_t2": str(phi_t2),
        "deg_bound": deg_bound,
        "box_dimension": len(basis),
        "box_size": q ** len(basis),
        "on_X_count": len(on_x_ops),
        "on_X_operators": sorted((str(op) for op in on_x_ops), key=lambda s: (len(s), s)),
        "identity_on_X": on_X(point(TwistedPoly.const(K, q, 1))),
        "F_on_X": on_X(point(TwistedPoly.F(K, q))),
        "property_1_on_X_equals_Fq_F2": on_x_points == even_points,
        "property_2_phi_t2_invariant": stable,
        "property_3_phi_t_leaves_X": not on_X(image_t),
    }
