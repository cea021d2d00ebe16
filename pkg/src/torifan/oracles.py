"""Brute-force oracles for the Mori cone and foliated lengths.

These deliberately avoid walls(), wall_relation() and Smith normal form:
adjacent cone pairs are found by comparing every pair of maximal cones,
relations come from rational row reduction, and multiplicities from gcds
of maximal minors. Only the LP and rank routines are shared.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd
from functools import reduce

from .fan import Fan
from .linalg import det_gcd_of_minors, rank, rational_nullspace
from .simplex import in_cone


def adjacent_pairs(fan: Fan) -> list:
    """(wall rays, cone i, cone j, extra_i, extra_j) for n-cones sharing n-1 rays."""
    n = fan.ambient_rank
    out = []
    full = [(i, set(c)) for i, c in enumerate(fan.max_cones) if len(c) == n]
    for (i, a), (j, b) in combinations(full, 2):
        common = a & b
        if len(common) == n - 1:
            (ei,) = a - common
            (ej,) = b - common
            out.append((tuple(sorted(common)), i, j, ei, ej))
    return out


def _relation(fan: Fan, ids: list) -> list:
    n = fan.ambient_rank
    rows = [[fan.rays[i][k] for i in ids] for k in range(n)]
    (vec,) = rational_nullspace(rows, len(ids))
    return vec


def _integral(vec) -> tuple:
    den = reduce(lambda x, y: x * y // gcd(x, y), (x.denominator for x in vec), 1)
    ints = [int(x * den) for x in vec]
    g = reduce(gcd, ints, 0)
    return tuple(x // g for x in ints)


def brute_force_wall_classes(fan: Fan) -> list:
    """Primitive relation vector (over all rays) of every adjacent pair."""
    classes = []
    for common, i, j, ei, ej in adjacent_pairs(fan):
        ids = list(common) + [ei, ej]
        vec = _integral(_relation(fan, ids))
        if vec[-1] < 0:
            vec = tuple(-x for x in vec)
        full = [0] * fan.n_rays
        for k, a in zip(ids, vec):
            full[k] = a
        classes.append(tuple(full))
    return classes


def brute_force_extremal_rays(fan: Fan) -> list:
    """Sorted primitive classes that are not nonnegative combinations of the others."""
    classes = sorted(set(brute_force_wall_classes(fan)))
    out = []
    for c in classes:
        if in_cone(c, [d for d in classes if d != c]) is None:
            out.append(c)
    return out


def brute_force_degrees(fan: Fan, common: tuple, cone: int, extra: int, other_extra: int) -> list:
    """(D_rho . C) for the wall curve ``common``, normalized on ``cone``'s extra ray."""
    ids = list(common) + [extra, other_extra]
    vec = _relation(fan, ids)
    n = fan.ambient_rank
    wall_mult = det_gcd_of_minors([fan.rays[i] for i in common]) if common else 1
    cone_mult = det_gcd_of_minors([fan.rays[i] for i in fan.max_cones[cone]])
    target = Fraction(wall_mult, cone_mult)
    scale = target / vec[len(common)]
    degrees = [Fraction(0)] * fan.n_rays
    for k, a in zip(ids, vec):
        degrees[k] = a * scale
    assert n == len(common) + 1
    return degrees


def brute_force_length(fan: Fan, basis, ray_class) -> Fraction:
    """min of sum_{rho in V} D_rho . C over wall curves C whose class lies on the ray."""
    basis = [list(b) for b in basis]
    r = rank(basis)
    in_v = [i for i, v in enumerate(fan.rays) if rank(basis + [list(v)]) == r]
    target = [Fraction(x) for x in ray_class]
    best = None
    for common, i, j, ei, ej in adjacent_pairs(fan):
        deg = brute_force_degrees(fan, common, i, ei, ej)
        if not _positively_proportional(deg, target):
            continue
        val = sum((deg[k] for k in in_v), Fraction(0))
        best = val if best is None else min(best, val)
    if best is None:
        raise ValueError("no wall curve lies on the given ray")
    return best


def _positively_proportional(u, v) -> bool:
    k = next(i for i, x in enumerate(v) if x != 0)
    if u[k] == 0 or (u[k] > 0) != (v[k] > 0):
        return False
    t = u[k] / v[k]
    return all(a == t * b for a, b in zip(u, v))
