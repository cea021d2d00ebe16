"""Extremal contractions: sign classification, projective-bundle detection, theorem check."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import InconsistentSigns, TorifanError
from .fan import Fan, validate_fan, walls
from .foliation import FoliationSubspace, foliation_from_basis, length
from .intersection import ExtremalRay, mori_cone, multiplicity, wall_relation
from .linalg import IntMatrix, bareiss_det, lattice_index, primitive, quotient_projection, saturation_basis

log = logging.getLogger(__name__)


class ContractionKind(str, Enum):
    FIBER = "FiberType"
    DIVISORIAL = "Divisorial"
    SMALL = "Small"


@dataclass(frozen=True)
class SplittingCertificate:
    """Witness that N = N_<B ∩ sigma> ⊕ N_<sigma \\ B> for one maximal cone.

    ``fiber_index`` is the index of the fiber rays in their saturation and
    ``determinant`` that of the two saturation bases stacked; both must be ±1.
    """

    max_cone: int
    fiber_basis: tuple
    base_basis: tuple
    fiber_index: int
    determinant: int

    @property
    def ok(self) -> bool:
        return self.fiber_index == 1 and abs(self.determinant) == 1


@dataclass(frozen=True)
class BundleStructure:
    fiber_rays: tuple
    fiber_rank: int
    projection: IntMatrix  # N -> N / (N ∩ span B)
    base: Fan
    base_ray_of: dict = field(compare=False)  # X ray id -> Y ray id, for rays outside B
    certificates: tuple = ()

    def to_json(self) -> dict:
        return {
            "fiber_rays": list(self.fiber_rays),
            "fiber_rank": self.fiber_rank,
            "base": self.base.to_json(),
            "certificates": [
                {"max_cone": c.max_cone, "fiber_index": c.fiber_index, "determinant": c.determinant}
                for c in self.certificates
            ],
        }


@dataclass(frozen=True)
class BundleRejection:
    """Why a ray failed bundle detection.

    ``criterion`` is one of "kind", "i", "ii", "iii", "iv", "quotient".
    ``escalate`` marks the case that passed i-iii but failed the chart
    splitting; those should be looked at by hand.
    """

    criterion: str
    reason: str
    witness: dict = field(default_factory=dict, compare=False)
    escalate: bool = False


@dataclass(frozen=True)
class ContractionReport:
    ray: int
    rank: int
    length: Fraction
    kind: ContractionKind
    bundle: BundleStructure | None
    matches_relative_tangent: bool
    theorem_ok: bool
    rejection: BundleRejection | None = field(default=None, compare=False)

    def to_json(self) -> dict:
        return {
            "ray": self.ray,
            "length": f"{self.length.numerator}/{self.length.denominator}",
            "rank": self.rank,
            "kind": self.kind.value,
            "bundle": self.bundle.to_json() if self.bundle else None,
            "matches_relative_tangent": self.matches_relative_tangent,
            "theorem_ok": self.theorem_ok,
        }


def _kind_of(cls) -> ContractionKind:
    neg = sum(1 for a in cls if a < 0)
    if neg == 0:
        return ContractionKind.FIBER
    if neg == 1:
        return ContractionKind.DIVISORIAL
    return ContractionKind.SMALL


def classify_contraction(fan: Fan, ray: ExtremalRay) -> ContractionKind:
    """Fiber type / divisorial / small from the number of negative relation coefficients."""
    wall_list = walls(fan)
    kinds = {_kind_of(wall_relation(fan, wall_list[i]).coefficients) for i in ray.wall_ids}
    kinds.add(_kind_of(ray.representative))
    if len(kinds) != 1:
        raise InconsistentSigns(f"walls of ray {ray.id} disagree: {sorted(k.value for k in kinds)}")
    return kinds.pop()


def detect_projective_bundle(
    fan: Fan, ray: ExtremalRay, V: FoliationSubspace
) -> BundleStructure | BundleRejection:
    """Certify that the contraction of ``ray`` is a P^r-bundle with fibers along V.

    Checks, in order:
      (i)   the ray's wall relations are sum_{b in B} v_b = 0 for r+1 rays B in V;
      (ii)  every maximal cone contains exactly r rays of B;
      (iii) each wall on the ray has the multiplicity of both adjacent cones;
      (iv)  every maximal cone splits: B ∩ sigma is a basis of its saturation and
            N = N_<B ∩ sigma> ⊕ N_<sigma \\ B>.
    On success the base fan Y is built by projecting along span(B).
    """
    kind = classify_contraction(fan, ray)
    if kind is not ContractionKind.FIBER:
        return BundleRejection("kind", f"contraction is {kind.value}, not of fiber type")
    r = V.rank
    wall_list = walls(fan)
    rep = ray.representative
    B = tuple(i for i, a in enumerate(rep) if a != 0)

    # (i)
    if any(rep[b] != 1 for b in B):
        return BundleRejection("i", "relation has a coefficient other than 0 or 1", {"relation": list(rep)})
    if len(B) != r + 1:
        return BundleRejection("i", f"relation involves {len(B)} rays, expected r+1 = {r + 1}", {"rays": list(B)})
    outside = [b for b in B if b not in V.rays_in_v]
    if outside:
        return BundleRejection("i", "fiber rays not contained in V", {"rays": outside})
    n = fan.ambient_rank
    if any(sum(fan.rays[b][k] for b in B) != 0 for k in range(n)):
        return BundleRejection("i", "fiber rays do not sum to zero", {"rays": list(B)})
    for i in ray.wall_ids:
        if wall_relation(fan, wall_list[i]).coefficients != rep:
            return BundleRejection("i", f"wall {i} carries a different relation", {"wall": i})

    # (ii)
    Bset = set(B)
    for ci, c in enumerate(fan.max_cones):
        if len(Bset.intersection(c)) != r:
            return BundleRejection("ii", f"maximal cone {ci} does not contain exactly r fiber rays", {"cone": ci})

    # (iii)
    for i in ray.wall_ids:
        w = wall_list[i]
        mw = multiplicity(fan, w.cone)
        ml = multiplicity(fan, fan.max_cones[w.left])
        mr = multiplicity(fan, fan.max_cones[w.right])
        if not mw == ml == mr:
            return BundleRejection(
                "iii", f"wall {i} has multiplicity {mw}, adjacent cones {ml} and {mr}", {"wall": i}
            )

    # (iv)
    certs = []
    for ci, c in enumerate(fan.max_cones):
        cert = _splitting_certificate(fan, ci, [i for i in c if i in Bset], [i for i in c if i not in Bset])
        if not cert.ok:
            log.warning(
                "ray %d passes criteria i-iii but cone %d does not split; needs manual review", ray.id, ci
            )
            return BundleRejection(
                "iv",
                f"maximal cone {ci} does not split (fiber index {cert.fiber_index}, det {cert.determinant})",
                {"cone": ci},
                escalate=True,
            )
        certs.append(cert)

    try:
        proj, base, ray_map = _project_along(fan, B)
    except TorifanError as exc:
        return BundleRejection("quotient", f"projected fan is invalid: {exc}")
    return BundleStructure(B, r, proj, base, ray_map, tuple(certs))


def _splitting_certificate(fan: Fan, ci: int, fiber: list, rest: list) -> SplittingCertificate:
    n = fan.ambient_rank
    fmat = IntMatrix.from_columns([fan.rays[i] for i in fiber], n)
    gmat = IntMatrix.from_columns([fan.rays[i] for i in rest], n)
    fb = saturation_basis(fmat)
    gb = saturation_basis(gmat)
    det = bareiss_det([[v[k] for v in fb + gb] for k in range(n)])
    return SplittingCertificate(ci, tuple(fb), tuple(gb), lattice_index(fmat), det)


def _project_along(fan: Fan, B: tuple):
    n = fan.ambient_rank
    proj = quotient_projection(IntMatrix.from_columns([fan.rays[b] for b in B], n))
    images: dict = {}
    ray_map = {}
    for i, v in enumerate(fan.rays):
        if i in B:
            continue
        img = primitive(tuple(sum(p * x for p, x in zip(row, v)) for row in proj.rows)) if proj.nrows else ()
        ray_map[i] = images.setdefault(img, len(images))
    cones = []
    for c in fan.max_cones:
        img = sorted({ray_map[i] for i in c if i not in B})
        if img not in cones:
            cones.append(img)
    base = validate_fan({"ambient_rank": proj.nrows, "rays": [list(v) for v in images], "max_cones": cones})
    return proj, base, ray_map


def relative_tangent_foliation(fan: Fan, bundle: BundleStructure) -> FoliationSubspace:
    """The foliation by fibers: span of the fiber rays."""
    return foliation_from_basis(fan, [fan.rays[b] for b in bundle.fiber_rays])


def verify_theorem(fan: Fan, V: FoliationSubspace) -> list:
    """One ContractionReport per extremal ray; raises NotProjective/NotComplete."""
    cone = mori_cone(fan)
    wall_list = walls(fan)
    r = V.rank
    reports = []
    for ray in cone.extremal_rays:
        ell = length(fan, V, ray, wall_list)
        kind = classify_contraction(fan, ray)
        bundle = None
        rejection = None
        matches = False
        if kind is ContractionKind.FIBER:
            found = detect_projective_bundle(fan, ray, V)
            if isinstance(found, BundleStructure):
                bundle = found
                matches = V.same_subspace(relative_tangent_foliation(fan, bundle))
            else:
                rejection = found
        else:
            rejection = BundleRejection("kind", f"contraction is {kind.value}")
        ok = ell <= r + 1 and (ell <= r or (bundle is not None and matches and ell == r + 1))
        reports.append(ContractionReport(ray.id, r, ell, kind, bundle, matches, ok, rejection))
    return reports
