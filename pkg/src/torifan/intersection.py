"""Multiplicities, wall relations, divisor-curve intersection numbers and the Mori cone.

Curve classes are kept in the relation lattice: the class of the wall curve
V(w) is the integer relation among the n+1 rays of the two cones next to w.
The actual intersection numbers D_rho . V(w) are a positive multiple of that
vector, so convexity questions can be asked of the relations directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotProjective, RaysDoNotSpan
from .fan import Cone, Fan, Wall, walls
from .linalg import IntMatrix, kernel_basis, lattice_index, smith_normal_form
from .simplex import in_cone, lp_strictly_positive_functional

CurveClass = tuple  # primitive integer vector over all rays, in ker(ray matrix)


@dataclass(frozen=True)
class WallRelation:
    """sum_i a_i v_i = 0 over the rays of the two cones adjacent to ``wall``.

    ``coefficients`` covers all rays of the fan (zeros off the n+1 involved);
    the two extra rays get positive coefficients and the gcd is 1.
    """

    wall: Wall
    coefficients: tuple
    extra_left: int
    extra_right: int

    @property
    def support(self) -> tuple:
        return tuple(i for i, a in enumerate(self.coefficients) if a != 0)


@dataclass(frozen=True)
class ClassGroup:
    rank: int
    torsion: tuple
    projection: IntMatrix  # Z^d -> Z^rank, kernel = principal divisors (mod torsion)


@dataclass(frozen=True)
class DivisorClass:
    coefficients: tuple
    image: tuple  # coordinates in Cl(X) ⊗ Q


@dataclass(frozen=True)
class ExtremalRay:
    id: int
    representative: CurveClass
    wall_ids: tuple


@dataclass(frozen=True)
class MoriCone:
    generators: tuple
    extremal_rays: tuple


def multiplicity(fan: Fan, cone: Cone) -> int:
    gens = IntMatrix.from_columns([fan.rays[i] for i in cone], fan.ambient_rank)
    return lattice_index(gens)


def _extra(fan: Fan, wall: Wall, side: int) -> int:
    (ray,) = set(fan.max_cones[side]) - set(wall.cone)
    return ray


def wall_relation(fan: Fan, wall: Wall) -> WallRelation:
    el = _extra(fan, wall, wall.left)
    er = _extra(fan, wall, wall.right)
    ids = list(wall.cone) + [el, er]
    m = IntMatrix.from_columns([fan.rays[i] for i in ids], fan.ambient_rank)
    ker = kernel_basis(m)
    assert ker.ncols == 1, "two simplicial cones across a wall have a one-dimensional relation"
    (vec,) = ker.columns()
    if vec[-2] < 0:
        vec = tuple(-x for x in vec)
    assert vec[-2] > 0 and vec[-1] > 0, "extra rays lie on opposite sides of the wall"
    coeffs = [0] * fan.n_rays
    for i, a in zip(ids, vec):
        coeffs[i] = a
    return WallRelation(wall, tuple(coeffs), el, er)


def wall_degrees(fan: Fan, wall: Wall, relation: WallRelation | None = None) -> tuple:
    """(D_rho . V(wall)) for every ray rho, as Fractions.

    Uses D_extra . V(w) = mult(w) / mult(sigma) on the right-hand cone and
    scales the relation accordingly.
    """
    rel = relation or wall_relation(fan, wall)
    a_right = rel.coefficients[rel.extra_right]
    scale = Fraction(multiplicity(fan, wall.cone), a_right * multiplicity(fan, fan.max_cones[wall.right]))
    return tuple(a * scale for a in rel.coefficients)


def divisor_curve_intersection(fan: Fan, ray: int, wall: Wall) -> Fraction:
    return wall_degrees(fan, wall)[ray]


def canonical_degree(fan: Fan, wall: Wall) -> Fraction:
    """-K_X . V(wall)."""
    return sum(wall_degrees(fan, wall), Fraction(0))


def class_group(fan: Fan) -> ClassGroup:
    """Cl(X) = Z^d / M, presented via Smith normal form of the transposed ray matrix."""
    mt = fan.ray_matrix.transpose()  # d x n
    snf = smith_normal_form(mt)
    if snf.rank < fan.ambient_rank:
        raise RaysDoNotSpan(f"rays span rank {snf.rank} < {fan.ambient_rank}")
    torsion = tuple(d for d in snf.diag if d > 1)
    proj = IntMatrix(snf.left.rows[snf.rank :], fan.n_rays)
    return ClassGroup(rank=fan.n_rays - snf.rank, torsion=torsion, projection=proj)


def divisor_class(fan: Fan, coefficients: Sequence, group: ClassGroup | None = None) -> DivisorClass:
    group = group or class_group(fan)
    image = tuple(
        sum((Fraction(p) * Fraction(c) for p, c in zip(row, coefficients)), Fraction(0))
        for row in group.projection.rows
    )
    return DivisorClass(tuple(coefficients), image)


def curve_class(fan: Fan, wall: Wall) -> CurveClass:
    return wall_relation(fan, wall).coefficients


def wall_classes(fan: Fan) -> list:
    """Curve class of every wall, in walls() order."""
    return [curve_class(fan, w) for w in walls(fan)]


def mori_cone(fan: Fan) -> MoriCone:
    """Wall classes and the extremal rays of the cone they generate.

    A class is extremal iff it is not a nonnegative combination of the other
    (distinct) classes; each test is one exact LP.
    """
    classes = wall_classes(fan)
    generators = list(dict.fromkeys(classes))
    if lp_strictly_positive_functional(generators) is None:
        raise NotProjective("the cone of curves contains a line")
    rays = []
    for g in generators:
        others = [h for h in generators if h != g]
        if in_cone(g, others) is None:
            ids = tuple(i for i, c in enumerate(classes) if c == g)
            rays.append(ExtremalRay(len(rays), g, ids))
    return MoriCone(tuple(generators), tuple(rays))


def decompose(cone: MoriCone, cls: Sequence) -> tuple | None:
    """Nonnegative coefficients writing ``cls`` over the extremal representatives."""
    return in_cone(cls, [r.representative for r in cone.extremal_rays])
