"""Sparse univariate polynomials and rational functions over F_{p^a}.

Points of additive groups over F_q(t) are dominated by q-power exponents
(``t^(3^6)`` and beyond), so polynomials are stored sparsely as sorted
``(exponent, coefficient)`` pairs.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from ..errors import InputError
from .gf import FiniteField


class FqPoly:
    """Immutable sparse polynomial in ``t`` over a finite field."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FiniteField, terms=()):
        self.field = field
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = terms
        self.terms = tuple(sorted((int(e), c) for e, c in items if c))

    @classmethod
    def from_coeffs(cls, field: FiniteField, coeffs: Sequence[int]) -> "FqPoly":
        """Dense coefficient list, constant term first."""
        return cls(field, {i: c for i, c in enumerate(coeffs) if c})

    @classmethod
    def monomial(cls, field: FiniteField, e: int, c: int = 1) -> "FqPoly":
        return cls(field, ((e, c),))

    @classmethod
    def const(cls, field: FiniteField, c: int) -> "FqPoly":
        return cls(field, ((0, c),))

    def _check(self, other):
        if other.field is not self.field and other.field != self.field:
            raise InputError(f"polynomials over different fields: {self.field} vs {other.field}")

    # structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == ((0, 1),)

    @property
    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else -1

    @property
    def lead(self) -> int:
        return self.terms[-1][1] if self.terms else 0

    def coeff(self, e: int) -> int:
        for ee, c in self.terms:
            if ee == e:
                return c
        return 0

    def to_coeffs(self) -> list:
        out = [0] * (self.degree + 1)
        for e, c in self.terms:
            out[e] = c
        return out

    def __eq__(self, other):
        return isinstance(other, FqPoly) and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"FqPoly({self.field}, {list(self.terms)})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in reversed(self.terms):
            cs = "" if (c == 1 and e) else str(c)
            if e == 0:
                parts.append(str(c))
            elif e == 1:
                parts.append(f"{cs}t")
            else:
                parts.append(f"{cs}t^{e}")
        return " + ".join(parts)

    # arithmetic ----------------------------------------------------------
    def __add__(self, other: "FqPoly") -> "FqPoly":
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        F = self.field
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = F.add(acc.get(e, 0), c)
        return FqPoly(F, acc)

    def __neg__(self) -> "FqPoly":
        F = self.field
        return FqPoly(F, tuple((e, F.neg(c)) for e, c in self.terms))

    def __sub__(self, other: "FqPoly") -> "FqPoly":
        return self + (-other)

    def __mul__(self, other):
        F = self.field
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return FqPoly(F)
        if other.is_one():
            return self
        if self.is_one():
            return other
        acc = {}
        mul, add = F.mul, F.add
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                acc[e] = add(acc.get(e, 0), mul(c1, c2))
        return FqPoly(F, acc)

    def scale(self, c: int) -> "FqPoly":
        """Multiply by the field element ``c``."""
        F = self.field
        if c == 0:
            return FqPoly(F)
        if c == 1:
            return self
        return FqPoly(F, tuple((e, F.mul(x, c)) for e, x in self.terms))

    def shift(self, k: int) -> "FqPoly":
        return FqPoly(self.field, tuple((e + k, c) for e, c in self.terms))

    def __pow__(self, k: int) -> "FqPoly":
        if k < 0:
            raise InputError("negative power of a polynomial")
        result = FqPoly.const(self.field, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def divmod(self, other: "FqPoly"):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        db, lb = other.degree, other.lead
        linv = F.inv(lb)
        rem = dict(self.terms)
        quo = {}
        if db == 0:
            return self.scale(linv), FqPoly(F)
        bterms = other.terms[:-1]
        while rem:
            dr = max(rem)
            if dr < db:
                break
            c = F.mul(rem.pop(dr), linv)
            shift = dr - db
            quo[shift] = c
            for e, x in bterms:
                k = e + shift
                v = F.sub(rem.get(k, 0), F.mul(c, x))
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return FqPoly(F, quo), FqPoly(F, rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "FqPoly":
        if not self.terms or self.lead == 1:
            return self
        return self.scale(self.field.inv(self.lead))

    def frobenius(self, q: int, e: int = 1) -> "FqPoly":
        """``self ** (q**e)`` via the Frobenius: coefficients raised, exponents scaled."""
        F = self.field
        Q = q**e
        return FqPoly(F, tuple((ex * Q, F.frobenius(c, q, e)) for ex, c in self.terms))

    def derivative(self) -> "FqPoly":
        F = self.field
        return FqPoly(F, tuple((e - 1, F.mul(F.scalar(e), c)) for e, c in self.terms if e % F.p))


def poly_gcd(a: FqPoly, b: FqPoly) -> FqPoly:
    """Monic gcd (zero if both inputs are zero)."""
    # shared monomial content first; cheap and common for sparse inputs
    if a.terms and b.terms:
        ka = a.terms[0][0]
        kb = b.terms[0][0]
        k = min(ka, kb)
        if len(a.terms) == 1 or len(b.terms) == 1:
            one_term = a if len(a.terms) == 1 else b
            other = b if one_term is a else a
            k = min(one_term.terms[0][0], other.terms[0][0])
            return FqPoly.monomial(a.field, k)
        if ka or kb:
            return poly_gcd(a.shift(-ka), b.shift(-kb)) * FqPoly.monomial(a.field, k)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


class FqRat:
    """Rational function ``num / den`` kept reduced with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: FqPoly, den: FqPoly = None, *, reduced: bool = False):
        if den is None:
            den = FqPoly.const(num.field, 1)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not reduced:
            if num.is_zero():
                den = FqPoly.const(num.field, 1)
            elif not den.is_one():
                g = poly_gcd(num, den)
                if not g.is_one():
                    num = num // g
                    den = den // g
                if den.lead != 1:
                    inv = num.field.inv(den.lead)
                    num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @property
    def field(self) -> FiniteField:
        return self.num.field

    @classmethod
    def from_lists(cls, field: FiniteField, num: Sequence[int], den: Sequence[int] = (1,)) -> "FqRat":
        return cls(FqPoly.from_coeffs(field, num), FqPoly.from_coeffs(field, den))

    @classmethod
    def t(cls, field: FiniteField) -> "FqRat":
        return cls(FqPoly.monomial(field, 1), reduced=True)

    @classmethod
    def const(cls, field: FiniteField, c: int) -> "FqRat":
        return cls(FqPoly.const(field, c), reduced=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_one()

    def __eq__(self, other):
        return isinstance(other, FqRat) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"FqRat({self})"

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __add__(self, other: "FqRat") -> "FqRat":
        if self.den == other.den:
            if self.den.is_one():
                return FqRat(self.num + other.num, self.den, reduced=True)
            return FqRat(self.num + other.num, self.den)
        return FqRat(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "FqRat":
        return FqRat(-self.num, self.den, reduced=True)

    def __sub__(self, other: "FqRat") -> "FqRat":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if self.den.is_one() and other.den.is_one():
            return FqRat(self.num * other.num, self.den, reduced=True)
        return FqRat(self.num * other.num, self.den * other.den)

    def scale(self, c: int) -> "FqRat":
        return FqRat(self.num.scale(c), self.den, reduced=True)

    def inverse(self) -> "FqRat":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return FqRat(self.den, self.num)

    def __truediv__(self, other: "FqRat") -> "FqRat":
        return self * other.inverse()

    def __pow__(self, k: int) -> "FqRat":
        if k < 0:
            return self.inverse() ** (-k)
        # powers of a reduced fraction stay reduced
        return FqRat(self.num**k, self.den**k, reduced=True)

    def frobenius(self, q: int, e: int = 1) -> "FqRat":
        return frobpow_rat(self, e, q)


def frobpow_rat(x: FqRat, e: int, q: int) -> FqRat:
    """``x ** (q**e)``: coefficients go through the field Frobenius and
    exponents are multiplied by ``q**e``.  The result is again reduced with a
    monic denominator, since the Frobenius is an injective ring map."""
    if e < 0:
        raise InputError("Frobenius exponent must be nonnegative")
    if e == 0:
        return x
    return FqRat(x.num.frobenius(q, e), x.den.frobenius(q, e), reduced=True)


def rat_from_ints(field: FiniteField, values: Iterable[int]) -> list:
    return [FqRat.const(field, v) for v in values]
