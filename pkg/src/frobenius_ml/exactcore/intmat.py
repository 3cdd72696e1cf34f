"""Integer matrices and lattice normal forms.

Lattices are always given by the *columns* of a matrix.  The canonical form
used everywhere in the package is the column Hermite normal form: a lower
echelon matrix whose pivots are positive and whose entries to the left of a
pivot (in the pivot row) are reduced into ``[0, pivot)``.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Optional, Sequence

from ..errors import InputError


class IntMatrix:
    """Immutable integer matrix, stored row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[int]], cols: Optional[int] = None):
        rows = tuple(tuple(int(x) for x in row) for row in data)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != cols:
                raise InputError("ragged matrix rows")
        self._data = rows
        self.rows = len(rows)
        self.cols = cols

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntMatrix":
        columns = [list(c) for c in columns]
        if rows is None:
            if not columns:
                raise InputError("row count needed for an empty column list")
            rows = len(columns[0])
        for c in columns:
            if len(c) != rows:
                raise InputError("columns of unequal length")
        return cls([[c[i] for c in columns] for i in range(rows)], cols=len(columns))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def diag(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list:
        return [list(r) for r in self._data]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.columns(), cols=self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise InputError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
            ocols = other.columns()
            return IntMatrix(
                [[sum(a * b for a, b in zip(r, c)) for c in ocols] for r in self._data],
                cols=other.cols,
            )
        v = list(other)
        if len(v) != self.cols:
            raise InputError("vector length does not match matrix")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self._data)

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self._data == other._data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self._data))

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r})"


def _axpy(dst: list, k: int, src: list) -> None:
    # dst -= k * src, in place
    for t in range(len(dst)):
        dst[t] -= k * src[t]


def _hnf_columns(cols: list, m: int):
    """Column HNF on a list of column lists.  Returns (H cols, U cols, pivots)."""
    n = len(cols)
    cols = [list(c) for c in cols]
    ucols = [[int(i == j) for i in range(n)] for j in range(n)]
    pivots = []  # (row, column)
    r = 0
    for i in range(m):
        if r == n:
            break
        found = False
        while True:
            nz = [j for j in range(r, n) if cols[j][i] != 0]
            if not nz:
                break
            found = True
            j0 = min(nz, key=lambda j: abs(cols[j][i]))
            if j0 != r:
                cols[r], cols[j0] = cols[j0], cols[r]
                ucols[r], ucols[j0] = ucols[j0], ucols[r]
            clean = True
            for j in range(r + 1, n):
                if cols[j][i]:
                    k = cols[j][i] // cols[r][i]
                    _axpy(cols[j], k, cols[r])
                    _axpy(ucols[j], k, ucols[r])
                    if cols[j][i]:
                        clean = False
            if clean:
                break
        if not found:
            continue
        if cols[r][i] < 0:
            cols[r] = [-x for x in cols[r]]
            ucols[r] = [-x for x in ucols[r]]
        piv = cols[r][i]
        for _, pc in pivots:
            k = cols[pc][i] // piv
            if k:
                _axpy(cols[pc], k, cols[r])
                _axpy(ucols[pc], k, ucols[r])
        pivots.append((i, r))
        r += 1
    return cols, ucols, pivots


def hnf(basis: IntMatrix):
    """Column Hermite normal form.

    Returns ``(H, U)`` with ``basis @ U == H`` and ``U`` unimodular.  The
    nonzero columns of ``H`` come first; trailing zero columns of ``U`` span
    the integer kernel of ``basis``.
    """
    hc, uc, _ = _hnf_columns(basis.columns(), basis.rows)
    H = IntMatrix.from_columns(hc, rows=basis.rows) if hc else IntMatrix.zeros(basis.rows, 0)
    U = IntMatrix.from_columns(uc, rows=basis.cols) if uc else IntMatrix.zeros(0, 0)
    return H, U


def hnf_basis(columns: Sequence[Sequence[int]], dim: int) -> list:
    """Nonzero HNF columns of the lattice spanned by ``columns`` in Z^dim."""
    hc, _, pivots = _hnf_columns(list(columns), dim)
    return [tuple(hc[j]) for _, j in pivots]


def pivot_rows(hcols: Sequence[Sequence[int]]) -> list:
    """Pivot row of each column of an HNF basis (first nonzero entry)."""
    out = []
    for c in hcols:
        out.append(next(i for i, x in enumerate(c) if x))
    return out


def solve_hnf(hcols: Sequence[Sequence[int]], v: Sequence[int]) -> Optional[list]:
    """Coordinates of ``v`` with respect to an HNF basis, or None."""
    r = list(v)
    coeffs = []
    prow = pivot_rows(hcols)
    for c, pi in zip(hcols, prow):
        for i in range(len(r)):
            if i >= pi:
                break
            if r[i]:
                return None
        if r[pi] % c[pi]:
            return None
        y = r[pi] // c[pi]
        coeffs.append(y)
        if y:
            for t in range(pi, len(r)):
                r[t] -= y * c[t]
    if any(r):
        return None
    return coeffs


def reduce_mod_hnf(hcols: Sequence[Sequence[int]], v: Sequence[int]) -> tuple:
    """Canonical representative of ``v`` modulo the lattice of an HNF basis.

    Pivot coordinates are brought into ``[0, pivot)``; rows without a pivot are
    left as they are, so two vectors are congruent iff the results agree.
    """
    r = list(v)
    for c, pi in zip(hcols, pivot_rows(hcols)):
        k = r[pi] // c[pi]
        if k:
            for t in range(pi, len(r)):
                r[t] -= k * c[t]
    return tuple(r)


def lattice_member(basis: IntMatrix, v: Sequence[int]) -> Optional[tuple]:
    """Integer coordinates ``x`` with ``basis @ x == v``, or None if ``v`` is
    not in the column lattice of ``basis``."""
    v = [int(x) for x in v]
    if len(v) != basis.rows:
        raise InputError(f"vector of length {len(v)} tested against a lattice in Z^{basis.rows}")
    hc, uc, pivots = _hnf_columns(basis.columns(), basis.rows)
    y = solve_hnf([hc[j] for _, j in pivots], v)
    if y is None:
        return None
    x = [0] * basis.cols
    for yj, (_, j) in zip(y, pivots):
        if yj:
            for t in range(basis.cols):
                x[t] += yj * uc[j][t]
    return tuple(x)


def kernel(A: IntMatrix) -> list:
    """Z-basis of ``{x : A x = 0}`` as a list of column tuples."""
    hc, uc, pivots = _hnf_columns(A.columns(), A.rows)
    rank = len(pivots)
    return [tuple(uc[j]) for j in range(rank, A.cols)]


def smith_normal_form(A: IntMatrix):
    """Smith normal form ``U @ A @ V == D``.

    ``D`` is diagonal with nonnegative entries ``d_1 | d_2 | ...``; ``U`` and
    ``V`` are unimodular.
    """
    m, n = A.rows, A.cols
    D = A.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(a, b):
        D[a], D[b] = D[b], D[a]
        U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for row in D:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]

    def row_op(dst, k, src):  # row dst -= k * row src
        _axpy(D[dst], k, D[src])
        _axpy(U[dst], k, U[src])

    def col_op(dst, k, src):  # col dst -= k * col src
        for row in D:
            row[dst] -= k * row[src]
        for row in V:
            row[dst] -= k * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            changed = False
            for i in range(t + 1, m):
                if D[i][t]:
                    row_op(i, D[i][t] // D[t][t], t)
                    if D[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if D[t][j]:
                    col_op(j, D[t][j] // D[t][t], t)
                    if D[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            # divisibility: every remaining entry must be a multiple of the pivot
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]),
                None,
            )
            if bad is None:
                break
            row_op(t, -1, bad[0])
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return IntMatrix(D, cols=n), IntMatrix(U, cols=m), IntMatrix(V, cols=n)


def det(A: IntMatrix) -> int:
    """Exact determinant (fraction-free Bareiss elimination)."""
    n = A.rows
    if n != A.cols:
        raise InputError("determinant of a non-square matrix")
    if n == 0:
        return 1
    M = A.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if M[i][k]), None)
            if sw is None:
                return 0
            M[k], M[sw] = M[sw], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def charpoly(A: IntMatrix) -> list:
    """Characteristic polynomial ``det(X I - A)``, coefficients low-first.

    Faddeev-LeVerrier over the integers; the divisions are exact.
    """
    n = A.rows
    if n != A.cols:
        raise InputError("characteristic polynomial of a non-square matrix")
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    AM = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        Mk = IntMatrix([[AM[i][j] + (coeffs[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)], cols=n)
        AM = (A @ Mk).tolist()
        coeffs[n - k] = -sum(AM[i][i] for i in range(n)) // k
    return coeffs


def vec_gcd(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g
