"""Simplicial fans: validation, walls, star quotients, completeness, projectivity."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd
from functools import reduce
from typing import Any, Mapping

from .errors import ConeNotInFan, FanValidationError, NotComplete
from .linalg import (
    IntMatrix,
    cofactor_kernel,
    primitive,
    quotient_projection,
    rank,
)
from .simplex import find_nonnegative_solution

Cone = tuple  # sorted tuple of ray ids


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    message: str
    data: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {"kind": self.kind, "message": self.message, "data": self.data}


@dataclass(frozen=True)
class Wall:
    """A codimension-one cone and the two maximal cones on either side.

    ``left`` is always the lower maximal-cone id.
    """

    cone: Cone
    left: int
    right: int


@dataclass(frozen=True)
class Fan:
    """A validated simplicial fan, stored by its maximal cones.

    Build instances with :func:`validate_fan`; the constructor itself does not
    check the fan axioms.
    """

    ambient_rank: int
    rays: tuple
    max_cones: tuple

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    @cached_property
    def ray_matrix(self) -> IntMatrix:
        """n x d matrix whose columns are the rays."""
        return IntMatrix.from_columns(self.rays, self.ambient_rank)

    @cached_property
    def cones(self) -> frozenset:
        """Every cone of the fan, faces included, as sorted ray-id tuples."""
        out = set()
        for c in self.max_cones:
            for k in range(len(c) + 1):
                out.update(combinations(c, k))
        return frozenset(out)

    @cached_property
    def facet_adjacency(self) -> dict:
        """Map from each (n-1)-face of an n-cone to the ids of the n-cones containing it."""
        adj: dict = {}
        for idx, c in enumerate(self.max_cones):
            if len(c) != self.ambient_rank:
                continue
            for k in range(len(c)):
                adj.setdefault(c[:k] + c[k + 1 :], []).append(idx)
        return adj

    @cached_property
    def _walls(self) -> tuple:
        if not is_complete(self):
            bad = sorted(f for f, ids in self.facet_adjacency.items() if len(ids) != 2)
            raise NotComplete(f"facets without a partner cone: {bad[:5]}")
        return tuple(
            Wall(cone, *sorted(ids)) for cone, ids in sorted(self.facet_adjacency.items())
        )

    def cone_vectors(self, cone: Cone) -> list:
        return [self.rays[i] for i in cone]

    def to_json(self) -> dict:
        return {
            "ambient_rank": self.ambient_rank,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }


@dataclass(frozen=True)
class QuotientFan:
    """Star of ``tau`` projected to N / N_tau.

    ``projection`` maps ambient coordinates to quotient coordinates and
    ``ray_origin[i]`` is the base ray whose image is quotient ray ``i``.
    """

    base: Fan
    tau: Cone
    projection: IntMatrix
    fan: Fan
    ray_origin: tuple

    @property
    def rank(self) -> int:
        return self.fan.ambient_rank


def _malformed(msg: str) -> list:
    return [Diagnostic("MalformedInput", msg)]


def fan_diagnostics(raw: Mapping[str, Any]) -> list:
    """Return every violation of the fan axioms found in ``raw`` (empty if valid)."""
    if isinstance(raw, Fan):
        raw = raw.to_json()
    try:
        n = raw["ambient_rank"]
        rays = raw["rays"]
        cones = raw["max_cones"]
    except (KeyError, TypeError):
        return _malformed("expected keys ambient_rank, rays, max_cones")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        return _malformed("ambient_rank must be a nonnegative integer")
    if not isinstance(rays, list) or not isinstance(cones, list):
        return _malformed("rays and max_cones must be lists")
    for r in rays:
        if not isinstance(r, (list, tuple)) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in r
        ):
            return _malformed(f"ray {r!r} is not a list of integers")
    for c in cones:
        if not isinstance(c, (list, tuple)) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in c
        ):
            return _malformed(f"cone {c!r} is not a list of integers")

    diags = []
    ok_rays = set()
    seen: dict = {}
    for i, r in enumerate(rays):
        if len(r) != n:
            diags.append(Diagnostic("WrongRayLength", f"ray {i} has length {len(r)}, expected {n}", {"ray": i}))
            continue
        g = reduce(gcd, r, 0)
        if g == 0:
            diags.append(Diagnostic("ZeroRay", f"ray {i} is zero", {"ray": i}))
            continue
        if g != 1:
            diags.append(Diagnostic("NonPrimitiveRay", f"ray {i} = {list(r)} has gcd {g}", {"ray": i, "gcd": g}))
            continue
        key = tuple(r)
        if key in seen:
            diags.append(Diagnostic("DuplicateRay", f"rays {seen[key]} and {i} coincide", {"rays": [seen[key], i]}))
            continue
        seen[key] = i
        ok_rays.add(i)

    if not cones:
        diags.append(Diagnostic("EmptyFan", "no maximal cones given"))
    good_cones = []
    used = set()
    for ci, c in enumerate(cones):
        ids = sorted(c)
        used.update(ids)
        if any(i < 0 or i >= len(rays) for i in ids):
            diags.append(Diagnostic("BadRayIndex", f"cone {ci} references a missing ray", {"cone": ci}))
            continue
        if len(set(ids)) != len(ids):
            diags.append(Diagnostic("RepeatedRayInCone", f"cone {ci} repeats a ray", {"cone": ci}))
            continue
        if not all(i in ok_rays for i in ids):
            continue
        if len(ids) > n or rank([rays[i] for i in ids]) < len(ids):
            diags.append(
                Diagnostic("DependentRays", f"cone {ci} has linearly dependent rays (not simplicial)", {"cone": ci})
            )
            continue
        good_cones.append((ci, tuple(ids)))

    for i in range(len(rays)):
        if i not in used:
            diags.append(Diagnostic("UnusedRay", f"ray {i} lies in no maximal cone", {"ray": i}))

    as_sets = [(ci, set(c)) for ci, c in good_cones]
    for (ci, a), (cj, b) in combinations(as_sets, 2):
        if a <= b or b <= a:
            small, big = (ci, cj) if a <= b else (cj, ci)
            diags.append(
                Diagnostic("NonMaximalCone", f"cone {small} is a face of cone {big}", {"cones": [small, big]})
            )

    rays_t = [tuple(r) for r in rays]
    for (ci, a), (cj, b) in combinations(good_cones, 2):
        w = intersection_witness(rays_t, a, b)
        if w is not None:
            diags.append(
                Diagnostic(
                    "IntersectionNotFace",
                    f"cones {ci} and {cj} meet outside their common face",
                    {"cones": [ci, cj], "witness": [f"{x.numerator}/{x.denominator}" for x in w]},
                )
            )
    return diags


def intersection_witness(rays, s: Cone, t: Cone):
    """A point of cone(s) ∩ cone(t) outside cone(s ∩ t), or None.

    Both cones must be simplicial. A point lies in the common face exactly
    when its coordinates on s vanish off s ∩ t, so a witness is a solution of
    sum_s l v - sum_t m v = 0 with l, m >= 0 and l summing to 1 over s \\ t.
    """
    only_s = [i for i in s if i not in t]
    only_t = [i for i in t if i not in s]
    if not only_s or not only_t:
        return None  # one cone is a face of the other's span; handled elsewhere
    common = [i for i in s if i in t]
    union = only_s + common + only_t
    vecs = [rays[i] for i in union]
    n = len(vecs[0])
    if len(union) <= n and rank(vecs) == len(union):
        return None
    ns, nc = len(only_s), len(common)
    if len(union) == n + 1:
        ker = cofactor_kernel([list(v) for v in vecs])
        if any(ker):
            for sign in (1, -1):
                k = [sign * x for x in ker]
                if all(x >= 0 for x in k[:ns]) and any(x > 0 for x in k[:ns]) and all(
                    x <= 0 for x in k[ns + nc :]
                ):
                    coeffs = k[:ns] + [max(x, 0) for x in k[ns : ns + nc]]
                    return _combine(rays, only_s + common, coeffs)
            return None
    # General case: variables l (over s), m (over t), all >= 0.
    s_ids = only_s + common
    t_ids = common + only_t
    rows = []
    for r in range(n):
        rows.append([rays[i][r] for i in s_ids] + [-rays[i][r] for i in t_ids])
    rows.append([1] * ns + [0] * (len(s_ids) - ns + len(t_ids)))
    sol = find_nonnegative_solution(rows, [0] * n + [1])
    if sol is None:
        return None
    return _combine(rays, s_ids, list(sol[: len(s_ids)]))


def _combine(rays, ids, coeffs):
    n = len(rays[ids[0]])
    return tuple(sum((Fraction(c) * rays[i][r] for i, c in zip(ids, coeffs)), Fraction(0)) for r in range(n))


def validate_fan(raw: Mapping[str, Any] | Fan) -> Fan:
    """Build a :class:`Fan`, raising FanValidationError with all violations."""
    diags = fan_diagnostics(raw)
    if diags:
        raise FanValidationError(diags)
    if isinstance(raw, Fan):
        return raw
    return Fan(
        ambient_rank=raw["ambient_rank"],
        rays=tuple(tuple(r) for r in raw["rays"]),
        max_cones=tuple(tuple(sorted(c)) for c in raw["max_cones"]),
    )


def is_simplicial(fan: Fan | Mapping[str, Any]) -> bool:
    """True iff every maximal cone has linearly independent rays.

    Always true for a validated Fan; mostly useful on raw descriptions.
    """
    if isinstance(fan, Fan):
        raw = fan.to_json()
    else:
        raw = fan
    rays = raw["rays"]
    return all(rank([rays[i] for i in c]) == len(c) for c in raw["max_cones"])


def is_complete(fan: Fan) -> bool:
    n = fan.ambient_rank
    if not fan.max_cones or any(len(c) != n for c in fan.max_cones):
        return False
    return all(len(ids) == 2 for ids in fan.facet_adjacency.values())


def walls(fan: Fan) -> list:
    """Every codimension-one cone with its two adjacent maximal cones.

    Sorted by wall cone. Raises NotComplete when some facet has no partner.
    """
    return list(fan._walls)


def star_quotient(fan: Fan, tau: Cone) -> QuotientFan:
    tau = tuple(sorted(tau))
    if tau not in fan.cones:
        raise ConeNotInFan(f"cone {list(tau)} is not in the fan")
    n = fan.ambient_rank
    gens = IntMatrix.from_columns([fan.rays[i] for i in tau], n)
    proj = quotient_projection(gens)
    tau_set = set(tau)
    star = [c for c in fan.max_cones if tau_set <= set(c)]
    origin = []
    new_id = {}
    for i in range(fan.n_rays):
        if i in tau_set:
            continue
        if any(i in c for c in star):
            new_id[i] = len(origin)
            origin.append(i)
    new_rays = []
    for i in origin:
        v = fan.rays[i]
        image = tuple(sum(p * x for p, x in zip(row, v)) for row in proj.rows)
        new_rays.append(list(primitive(image)))
    cones = []
    for c in star:
        img = sorted(new_id[i] for i in c if i not in tau_set)
        if img not in cones:
            cones.append(img)
    quotient = validate_fan({"ambient_rank": n - len(tau), "rays": new_rays, "max_cones": cones})
    return QuotientFan(base=fan, tau=tau, projection=proj, fan=quotient, ray_origin=tuple(origin))


def is_projective(fan: Fan) -> bool:
    """Complete simplicial fan is projective iff its Mori cone is pointed.

    Tested by looking for a divisor positive on every wall curve class.
    """
    from .intersection import wall_classes
    from .simplex import lp_strictly_positive_functional

    classes = sorted(set(wall_classes(fan)))
    return lp_strictly_positive_functional(classes) is not None
