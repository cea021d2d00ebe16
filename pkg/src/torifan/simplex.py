"""Exact rational feasibility LPs (phase-one simplex, Bland's rule).

Only feasibility is ever needed by the geometry code: "is this vector a
nonnegative combination of those" and "is there a functional positive on all
of these". Both reduce to finding x >= 0 with A x = b.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

from .linalg import RatVector


def find_nonnegative_solution(a: Sequence[Sequence], b: Sequence) -> RatVector | None:
    """Return some x >= 0 with ``a @ x == b``, or None if there is none.

    Phase-one simplex on the tableau [a | I | b] with one artificial per row,
    minimizing the sum of the artificials. Bland's rule (lowest-index entering
    variable, lowest-index leaving variable among ratio ties) guarantees
    termination. The tableau is kept integral with integer-preserving
    pivoting: the true tableau is ``tab / den``, and every update divides
    exactly by the previous pivot.
    """
    m = len(a)
    if m == 0:
        return tuple()
    n = len(a[0])
    tab = []
    for i in range(m):
        row = [Fraction(x) for x in a[i]] + [Fraction(b[i])]
        scale = reduce(lambda x, y: x * y // gcd(x, y), (x.denominator for x in row), 1)
        if row[-1] < 0:
            scale = -scale
        ints = [int(x * scale) for x in row]
        tab.append(ints[:-1] + [0] * m + [ints[-1]])
    # Artificial columns carry the row scale so that the basis starts as the
    # identity on the scaled rows.
    for i in range(m):
        tab[i][n + i] = 1
    basis = [n + i for i in range(m)]
    width = n + m
    cost = [-sum(tab[i][j] for i in range(m)) for j in range(n)] + [0] * m
    cost.append(-sum(tab[i][-1] for i in range(m)))
    den = 1

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        for i in range(m):
            coef = tab[i][enter]
            if coef > 0:
                if leave is None:
                    leave = i
                    continue
                # compare rhs_i / coef with rhs_leave / coef_leave
                lhs = tab[i][-1] * tab[leave][enter]
                rhs = tab[leave][-1] * coef
                if lhs < rhs or (lhs == rhs and basis[i] < basis[leave]):
                    leave = i
        if leave is None:
            raise AssertionError("phase-one simplex reported unbounded")
        den = _pivot(tab, cost, leave, enter, den)
        basis[leave] = enter

    if cost[-1] != 0:
        return None
    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = Fraction(tab[i][-1], den)
    return tuple(x)


def _pivot(tab, cost, r, c, den):
    prow = tab[r]
    p = prow[c]
    for row in tab:
        if row is not prow:
            f = row[c]
            if f:
                row[:] = [(p * x - f * y) // den for x, y in zip(row, prow)]
            elif p != den:
                row[:] = [p * x // den for x in row]
    f = cost[c]
    if f:
        cost[:] = [(p * x - f * y) // den for x, y in zip(cost, prow)]
    elif p != den:
        cost[:] = [p * x // den for x in cost]
    return p


def in_cone(target: Sequence, generators: Sequence[Sequence]) -> RatVector | None:
    """Coefficients expressing ``target`` as a nonnegative combination, or None."""
    if not generators:
        return tuple() if all(x == 0 for x in target) else None
    dim = len(target)
    a = [[g[i] for g in generators] for i in range(dim)]
    return find_nonnegative_solution(a, list(target))


def lp_strictly_positive_functional(vectors: Sequence[Sequence]) -> RatVector | None:
    """Find w with <w, v> >= 1 for every input vector, or None.

    Such a w exists exactly when the vectors generate a pointed cone and none
    of them is zero, i.e. they all lie in an open half-space.
    """
    vectors = [[Fraction(x) for x in v] for v in vectors]
    if not vectors:
        raise ValueError("need at least one vector")
    d = len(vectors[0])
    k = len(vectors)
    # Variables: w_plus (d), w_minus (d), surplus (k).
    a = []
    for i, v in enumerate(vectors):
        row = list(v) + [-x for x in v] + [Fraction(-int(i == j)) for j in range(k)]
        a.append(row)
    x = find_nonnegative_solution(a, [1] * k)
    if x is None:
        return None
    return tuple(x[j] - x[d + j] for j in range(d))
