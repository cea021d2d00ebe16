"""Exact integer and rational linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`, so
there is no overflow and no rounding. Matrices are small (desk-scale fans have
at most a few dozen rays), so plain nested tuples are fast enough.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

from .errors import DependentGenerators, ZeroVector

RatVector = tuple  # tuple[Fraction, ...], entries always in lowest terms


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major.

    ``ncols`` is kept explicitly so that matrices with zero rows still know
    their width.
    """

    rows: tuple
    ncols: int

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(rows, ncols)

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]], nrows: int) -> "IntMatrix":
        columns = [tuple(c) for c in columns]
        if any(len(c) != nrows for c in columns):
            raise ValueError("column length does not match nrows")
        return cls(tuple(tuple(int(c[i]) for c in columns) for i in range(nrows)), len(columns))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def diagonal(cls, entries: Sequence[int], nrows: int, ncols: int) -> "IntMatrix":
        return cls(
            tuple(
                tuple(entries[i] if i == j and i < len(entries) else 0 for j in range(ncols))
                for i in range(nrows)
            ),
            ncols,
        )

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(r[j] for r in self.rows) for j in range(self.ncols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(self.columns()), self.nrows)

    T = property(transpose)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows),
            other.ncols,
        )

    def det(self) -> int:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_det(self.rows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


@dataclass(frozen=True)
class SnfDecomposition:
    """``left @ original @ right == diag`` with unimodular ``left``/``right``.

    The inverses are carried along because they come for free during the
    elimination and are what one needs to read off saturations.
    """

    left: IntMatrix
    diag: tuple
    right: IntMatrix
    left_inv: IntMatrix
    right_inv: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d != 0)

    def diagonal_matrix(self) -> IntMatrix:
        return IntMatrix.diagonal(self.diag, self.left.nrows, self.right.nrows)


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of a square integer matrix."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def smith_normal_form(m: IntMatrix) -> SnfDecomposition:
    """Smith normal form with unimodular transforms.

    Pivot rule: smallest nonzero absolute value in the active submatrix, ties
    broken by lowest (row, column). The result is a pure function of the input.
    """
    nr, nc = m.shape
    a = [list(r) for r in m.rows]
    left = [[int(i == j) for j in range(nr)] for i in range(nr)]
    left_inv = [[int(i == j) for j in range(nr)] for i in range(nr)]
    right = [[int(i == j) for j in range(nc)] for i in range(nc)]
    right_inv = [[int(i == j) for j in range(nc)] for i in range(nc)]

    # Each helper applies one elementary operation to ``a`` and keeps the four
    # transform matrices consistent.
    def swap_rows(i, j):
        if i == j:
            return
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]
        for row in left_inv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i == j:
            return
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]
        right_inv[i], right_inv[j] = right_inv[j], right_inv[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        if q == 0:
            return
        for mat in (a, left):
            rd, rs = mat[dst], mat[src]
            for k in range(len(rd)):
                rd[k] += q * rs[k]
        for row in left_inv:
            row[src] -= q * row[dst]

    def add_col(dst, src, q):  # col_dst += q * col_src
        if q == 0:
            return
        for mat in (a, right):
            for row in mat:
                row[dst] += q * row[src]
        rd, rs = right_inv[src], right_inv[dst]
        for k in range(len(rd)):
            rd[k] -= q * rs[k]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        left[i] = [-x for x in left[i]]
        for row in left_inv:
            row[i] = -row[i]

    diag = []
    for t in range(min(nr, nc)):
        while True:
            best = None
            for i in range(t, nr):
                row = a[i]
                for j in range(t, nc):
                    x = row[j]
                    if x != 0 and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            swap_rows(t, best[1])
            swap_cols(t, best[2])
            p = a[t][t]
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            if any(a[i][t] for i in range(t + 1, nr)) or any(a[t][j] for j in range(t + 1, nc)):
                continue
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if best is None:
            diag.extend([0] * (min(nr, nc) - t))
            break
        if a[t][t] < 0:
            negate_row(t)
        diag.append(a[t][t])

    return SnfDecomposition(
        left=IntMatrix(tuple(map(tuple, left)), nr),
        diag=tuple(diag),
        right=IntMatrix(tuple(map(tuple, right)), nc),
        left_inv=IntMatrix(tuple(map(tuple, left_inv)), nr),
        right_inv=IntMatrix(tuple(map(tuple, right_inv)), nc),
    )


def lattice_index(generators: IntMatrix) -> int:
    """Index of the column lattice in its saturation.

    Raises DependentGenerators if the columns are rationally dependent.
    """
    snf = smith_normal_form(generators)
    if snf.rank < generators.ncols:
        raise DependentGenerators(f"{generators.ncols} columns span rank {snf.rank}")
    return reduce(lambda x, y: x * y, snf.diag[: snf.rank], 1)


def saturation_basis(generators: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of (Q-span of the columns) intersected with the ambient lattice."""
    snf = smith_normal_form(generators)
    cols = snf.left_inv.columns()
    return cols[: snf.rank]


def quotient_projection(generators: IntMatrix) -> IntMatrix:
    """Matrix of a surjection Z^n -> Z^(n-k) whose kernel is the saturation.

    Rows are the trailing rows of the SNF left transform, so the choice of
    quotient basis is deterministic.
    """
    snf = smith_normal_form(generators)
    return IntMatrix(snf.left.rows[snf.rank :], generators.nrows)


def hermite_rows(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of the row lattice (zero rows dropped).

    Pivots are positive and entries above each pivot lie in [0, pivot).
    """
    a = [list(r) for r in rows]
    out = []
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c] != 0]
            if not nz:
                break
            i = min(nz, key=lambda k: (abs(a[k][c]), k))
            a[r], a[i] = a[i], a[r]
            done = True
            for k in range(r + 1, len(a)):
                if a[k][c]:
                    q = a[k][c] // a[r][c]
                    a[k] = [x - q * y for x, y in zip(a[k], a[r])]
                    if a[k][c]:
                        done = False
            if done:
                break
        if r < len(a) and a[r][c] != 0:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for k in range(r):
                q = a[k][c] // a[r][c]
                if q:
                    a[k] = [x - q * y for x, y in zip(a[k], a[r])]
            r += 1
    out = [tuple(row) for row in a[:r]]
    return out


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Saturated basis of the integer kernel, returned as columns.

    The basis is put in Hermite form so it does not depend on elimination
    order; a full-column-rank ``m`` gives a matrix with no columns.
    """
    snf = smith_normal_form(m)
    raw = snf.right.columns()[snf.rank :]
    basis = hermite_rows(raw, m.ncols)
    return IntMatrix.from_columns(basis, m.ncols)


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = reduce(gcd, v, 0)
    if g == 0:
        raise ZeroVector("primitive() of the zero vector")
    return tuple(x // g for x in v)


def clear_denominators(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Smallest positive integer multiple of a rational vector (not primitivized)."""
    den = reduce(lambda x, y: x * y // gcd(x, y), (Fraction(x).denominator for x in v), 1)
    return tuple(int(Fraction(x) * den) for x in v)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    """Rank over Q of a list of vectors (fraction-free elimination)."""
    a = [list(clear_denominators(r)) if any(isinstance(x, Fraction) for x in r) else list(r) for r in rows]
    a = [r for r in a if any(r)]
    if not a:
        return 0
    r = 0
    for c in range(len(a[0])):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pr = a[r]
        pv = pr[c]
        for i in range(r + 1, len(a)):
            x = a[i][c]
            if x:
                row = [pv * u - x * w for u, w in zip(a[i], pr)]
                g = gcd(*row)
                a[i] = [u // g for u in row] if g > 1 else row
        r += 1
        if r == len(a):
            break
    return r


def cofactor_kernel(columns: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Kernel vector of an n x (n+1) integer matrix by signed maximal minors.

    Entry i is (-1)^i times the minor with column i removed; the result is
    zero exactly when the matrix has rank < n.
    """
    k = len(columns)
    out = []
    for i in range(k):
        rest = columns[:i] + columns[i + 1 :]
        minor = bareiss_det([[c[row] for c in rest] for row in range(k - 1)])
        out.append(minor if i % 2 == 0 else -minor)
    return tuple(out)


def rational_nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of {x in Q^ncols : rows @ x = 0}, one vector per free column."""
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def det_gcd_of_minors(columns: Sequence[Sequence[int]]) -> int:
    """gcd of the maximal minors of an n x k matrix with independent columns.

    This is the lattice index of the columns in their saturation, computed
    without Smith normal form.
    """
    from itertools import combinations

    k = len(columns)
    if k == 0:
        return 1
    n = len(columns[0])
    g = 0
    for rows in combinations(range(n), k):
        g = gcd(g, bareiss_det([[c[i] for c in columns] for i in rows]))
    if g == 0:
        raise DependentGenerators("columns are rationally dependent")
    return g
