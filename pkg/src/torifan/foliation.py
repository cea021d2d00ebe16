"""Toric foliations given by rational subspaces V of N_Q.

Every quantity computed here (K_F, degrees, lengths) depends only on the
rank of V and on which rays of the fan lie in V.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ZeroSubspace
from .fan import Fan, Wall, walls
from .intersection import DivisorClass, ExtremalRay, divisor_class, wall_degrees
from .linalg import clear_denominators, primitive, rank


@dataclass(frozen=True)
class FoliationSubspace:
    """A subspace V of N_Q together with the rays of a given fan lying in it.

    ``basis`` holds primitive integer vectors spanning V.
    """

    basis: tuple
    rank: int
    rays_in_v: frozenset

    def contains(self, v: Sequence) -> bool:
        return rank(list(self.basis) + [list(v)]) == self.rank

    def same_subspace(self, other: "FoliationSubspace") -> bool:
        return self.rank == other.rank and rank(list(self.basis) + list(other.basis)) == self.rank

    def to_json(self) -> dict:
        return {"basis": [[f"{x}/1" for x in b] for b in self.basis]}  # integer basis


@dataclass(frozen=True)
class FoliatedCanonicalClass:
    divisor: DivisorClass

    @property
    def coefficients(self) -> tuple:
        return self.divisor.coefficients


def foliation_from_basis(fan: Fan, vectors: Sequence[Sequence]) -> FoliationSubspace:
    """Span the given rational vectors and record which rays of ``fan`` lie in it."""
    n = fan.ambient_rank
    basis = []
    for v in vectors:
        if len(v) != n:
            raise ValueError(f"vector {list(v)} does not have length {n}")
        if all(Fraction(x) == 0 for x in v):
            continue
        w = primitive(clear_denominators([Fraction(x) for x in v]))
        if rank(basis + [w]) > len(basis):
            basis.append(w)
    if not basis:
        raise ZeroSubspace("the foliation subspace is zero")
    r = len(basis)
    inside = frozenset(i for i, v in enumerate(fan.rays) if rank(basis + [list(v)]) == r)
    return FoliationSubspace(tuple(tuple(b) for b in basis), r, inside)


def foliated_canonical_class(fan: Fan, V: FoliationSubspace) -> FoliatedCanonicalClass:
    """K_F = -sum of D_rho over rays rho contained in V."""
    coeffs = tuple(-1 if i in V.rays_in_v else 0 for i in range(fan.n_rays))
    k_f = divisor_class(fan, coeffs)
    # K_F = K_X + sum of D_rho over rays outside V, coefficientwise.
    k_x = [-1] * fan.n_rays
    rhs = [k + (0 if i in V.rays_in_v else 1) for i, k in enumerate(k_x)]
    assert list(coeffs) == rhs
    return FoliatedCanonicalClass(k_f)


def foliated_degree(fan: Fan, V: FoliationSubspace, wall: Wall, degrees: tuple | None = None) -> Fraction:
    """-K_F . V(wall)."""
    degrees = degrees or wall_degrees(fan, wall)
    return sum((degrees[i] for i in V.rays_in_v), Fraction(0))


def length(fan: Fan, V: FoliationSubspace, ray: ExtremalRay, wall_list: Sequence[Wall] | None = None) -> Fraction:
    """Minimum of -K_F . C over the torus-invariant curves C on ``ray``."""
    wall_list = wall_list if wall_list is not None else walls(fan)
    return min(foliated_degree(fan, V, wall_list[i]) for i in ray.wall_ids)
