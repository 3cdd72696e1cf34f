"""Finite fields F_{p^n}.

Elements are plain ints in ``[0, p^n)``: the base-``p`` digits of an element
are the coefficients (constant term first) of its residue modulo the field's
defining polynomial.  Multiplication goes through log/antilog tables, so the
fields here are meant to be small (at most a few hundred thousand elements).
"""

from __future__ import annotations

from functools import lru_cache

from ..errors import InputError

# Conway polynomials, coefficients low-degree first, leading 1 included.
CONWAY = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (11, 1): (9, 1),
    (11, 2): (2, 7, 1),
    (13, 1): (11, 1),
    (13, 2): (2, 12, 1),
}

MAX_ORDER = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int):
    """Return ``(p, e)`` with ``q == p**e``, or raise InputError."""
    if q < 2:
        raise InputError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise InputError(f"{q} is not a prime power")
    return p, e


def _prime_factors(n: int) -> list:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _digits(a: int, p: int, n: int) -> list:
    out = []
    for _ in range(n):
        out.append(a % p)
        a //= p
    return out


def _undigits(ds, p: int) -> int:
    a = 0
    for d in reversed(ds):
        a = a * p + d
    return a


def _mulmod_digits(a: list, b: list, modulus: tuple, p: int) -> list:
    n = len(modulus) - 1
    prod = [0] * (2 * n - 1) if n else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] = (prod[i + j] + x * y) % p
    lead_inv = pow(modulus[-1], p - 2, p)
    for d in range(len(prod) - 1, n - 1, -1):
        c = prod[d] * lead_inv % p
        if c:
            for t in range(n + 1):
                prod[d - n + t] = (prod[d - n + t] - c * modulus[t]) % p
    return (prod + [0] * n)[:n]


def _x_is_primitive(modulus: tuple, p: int) -> bool:
    n = len(modulus) - 1
    order = p**n - 1
    x = [0] * n
    if n == 1:
        x = [(-modulus[0]) % p]
    else:
        x[1] = 1

    def power(e):
        result = [1] + [0] * (n - 1)
        base = x
        while e:
            if e & 1:
                result = _mulmod_digits(result, base, modulus, p)
            base = _mulmod_digits(base, base, modulus, p)
            e >>= 1
        return result

    one = [1] + [0] * (n - 1)
    if power(order) != one:
        return False
    return all(power(order // r) != one for r in _prime_factors(order))


def find_primitive_modulus(p: int, n: int) -> tuple:
    """Lexicographically least monic primitive polynomial of degree ``n``."""
    for code in range(p**n):
        low = tuple(_digits(code, p, n))
        if low[0] == 0:
            continue
        mod = low + (1,)
        if _x_is_primitive(mod, p):
            return mod
    raise InputError(f"no primitive polynomial of degree {n} over F_{p}")


@lru_cache(maxsize=None)
def GF(p: int, n: int = 1, modulus: tuple = None) -> "FiniteField":
    """Cached constructor; equal parameters give the identical field object."""
    return FiniteField(p, n, modulus)


class FiniteField:
    """The field F_{p^n} with table-driven arithmetic on int-encoded elements."""

    def __init__(self, p: int, n: int = 1, modulus: tuple = None):
        if not is_prime(p) or n < 1:
            raise InputError(f"F_{{{p}^{n}}} is not a valid finite field")
        self.p = p
        self.n = n
        self.order = p**n
        if self.order > MAX_ORDER:
            raise InputError(f"field of order {self.order} exceeds the table limit {MAX_ORDER}")
        if modulus is None:
            modulus = CONWAY.get((p, n)) or find_primitive_modulus(p, n)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise InputError("field modulus must be monic of degree n")
        self.modulus = modulus
        self._build_tables()

    def _build_tables(self):
        p, n, order = self.p, self.n, self.order
        # search a multiplicative generator, trying x first
        if order == 2:
            gen_digits = [1]
        else:
            cands = ([p] if n > 1 else []) + [c for c in range(2, order) if c != p or n == 1]
            gen_digits = next(
                (ds for ds in (_digits(c, p, n) for c in cands) if self._order_is_full(ds)), None
            )
        if gen_digits is None:
            raise InputError("field modulus is not irreducible")
        self.generator = _undigits(gen_digits, p)
        exp = [0] * (order - 1)
        log = [0] * order
        cur = [1] + [0] * (n - 1)
        for k in range(order - 1):
            a = _undigits(cur, p)
            exp[k] = a
            log[a] = k
            cur = _mulmod_digits(cur, gen_digits, self.modulus, p)
        if len(set(exp)) != order - 1:
            raise InputError("field modulus is not irreducible")
        self._exp = exp
        self._log = log
        if n > 1 and p != 2 and order <= 1024:
            dig = [_digits(a, p, n) for a in range(order)]
            self._add = [
                [_undigits([(x + y) % p for x, y in zip(dig[a], dig[b])], p) for b in range(order)]
                for a in range(order)
            ]
        else:
            self._add = None
        self._neg = [self._slow_neg(a) for a in range(order)]

    def _order_is_full(self, ds) -> bool:
        order = self.order - 1
        one = [1] + [0] * (self.n - 1)

        def power(e):
            result = one
            base = ds
            while e:
                if e & 1:
                    result = _mulmod_digits(result, base, self.modulus, self.p)
                base = _mulmod_digits(base, base, self.modulus, self.p)
                e >>= 1
            return result

        if power(order) != one:
            return False
        return all(power(order // r) != one for r in _prime_factors(order)) if order > 1 else True

    def _slow_neg(self, a):
        return _undigits([(-d) % self.p for d in _digits(a, self.p, self.n)], self.p)

    # arithmetic -------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.n == 1:
            return (a + b) % self.p
        if self._add is not None:
            return self._add[a][b]
        p = self.p
        return _undigits([(x + y) % p for x, y in zip(_digits(a, p, self.n), _digits(b, p, self.n))], p)

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self._exp[(-self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    def frobenius(self, a: int, q: int, e: int = 1) -> int:
        """``a ** (q ** e)``; the exponent is reduced modulo the group order."""
        if a == 0:
            return 0
        m = self.order - 1
        return self._exp[(self._log[a] * pow(q, e, m)) % m] if m > 1 else a

    def scalar(self, k: int) -> int:
        """Image of the integer ``k`` in the prime field."""
        return k % self.p

    def subfield(self, q: int) -> list:
        """Elements fixed by ``x -> x**q`` (the copy of F_q inside this field)."""
        return [a for a in range(self.order) if self.pow(a, q) == a]

    def elements(self) -> range:
        return range(self.order)

    def digits(self, a: int) -> list:
        return _digits(a, self.p, self.n)

    def __repr__(self):
        return f"GF({self.p}^{self.n})"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and (self.p, self.n, self.modulus) == (other.p, other.n, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))
