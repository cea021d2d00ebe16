import logging

import pytest

from torifan.contraction import (
    BundleRejection,
    BundleStructure,
    ContractionKind,
    classify_contraction,
    detect_projective_bundle,
    relative_tangent_foliation,
    verify_theorem,
)
from torifan.corpus import named_fan
from torifan.errors import NotProjective
from torifan.fan import is_complete
from torifan.foliation import foliation_from_basis
from torifan.intersection import mori_cone


def full(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def rays_of(fan, ids):
    return sorted(fan.rays[i] for i in ids)


def test_classify_p2():
    fan = named_fan("Pn:2")
    (ray,) = mori_cone(fan).extremal_rays
    assert classify_contraction(fan, ray) is ContractionKind.FIBER


def test_classify_f1():
    fan = named_fan("hirzebruch:1")
    kinds = sorted(classify_contraction(fan, r).value for r in mori_cone(fan).extremal_rays)
    assert kinds == ["Divisorial", "FiberType"]


def test_classify_flip():
    fan = named_fan("flip3fold")
    kinds = sorted(classify_contraction(fan, r).value for r in mori_cone(fan).extremal_rays)
    assert kinds == ["Divisorial", "Small"]


@pytest.mark.parametrize("name", ["P1xP1", "hirzebruch:1", "hirzebruch:2", "hirzebruch:3"])
def test_bundle_over_p1(name):
    fan = named_fan(name)
    V = foliation_from_basis(fan, [[0, 1]])
    found = [detect_projective_bundle(fan, r, V) for r in mori_cone(fan).extremal_rays]
    bundles = [b for b in found if isinstance(b, BundleStructure)]
    assert len(bundles) == 1
    b = bundles[0]
    assert rays_of(fan, b.fiber_rays) == [(0, -1), (0, 1)]
    assert b.fiber_rank == 1
    assert b.base.ambient_rank == 1 and b.base.n_rays == 2 and is_complete(b.base)
    assert all(c.ok for c in b.certificates)
    assert relative_tangent_foliation(fan, b).same_subspace(V)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_projective_space_is_bundle_over_point(n):
    fan = named_fan(f"Pn:{n}")
    V = foliation_from_basis(fan, full(n))
    (ray,) = mori_cone(fan).extremal_rays
    b = detect_projective_bundle(fan, ray, V)
    assert isinstance(b, BundleStructure)
    assert b.base.ambient_rank == 0 and b.base.max_cones == ((),)
    assert relative_tangent_foliation(fan, b).rank == n


def test_wps_is_not_a_bundle():
    fan = named_fan("wps:1,1,2")
    V = foliation_from_basis(fan, full(2))
    (ray,) = mori_cone(fan).extremal_rays
    found = detect_projective_bundle(fan, ray, V)
    assert isinstance(found, BundleRejection)
    assert not found.escalate
    (report,) = verify_theorem(fan, V)
    assert report.length == 2 and report.bundle is None and report.theorem_ok


def test_divisorial_ray_gets_no_bundle():
    fan = named_fan("hirzebruch:1")
    V = foliation_from_basis(fan, full(2))
    for report in verify_theorem(fan, V):
        if report.kind is ContractionKind.DIVISORIAL:
            assert report.bundle is None
            assert report.rejection.criterion == "kind"


def test_verify_p1xp1():
    fan = named_fan("P1xP1")
    reports = verify_theorem(fan, foliation_from_basis(fan, [[0, 1]]))
    assert len(reports) == 2 and all(r.theorem_ok for r in reports)
    fiber = [r for r in reports if r.length == 2]
    base = [r for r in reports if r.length == 0]
    assert len(fiber) == 1 and len(base) == 1
    assert fiber[0].bundle is not None and fiber[0].matches_relative_tangent


def test_verify_f1_no_converse():
    fan = named_fan("hirzebruch:1")
    reports = verify_theorem(fan, foliation_from_basis(fan, [[1, 0]]))
    assert all(r.length <= 1 and r.theorem_ok for r in reports)


def test_verify_wrong_foliation_does_not_match():
    # Fiber ray of P1xP1 with V = N_Q: length 2 = r, no strong clause needed.
    fan = named_fan("P1xP1")
    reports = verify_theorem(fan, foliation_from_basis(fan, full(2)))
    assert all(r.length == 2 and r.theorem_ok for r in reports)
    assert not any(r.matches_relative_tangent for r in reports)


def test_verify_not_projective():
    fan = named_fan("nonprojective3fold")
    with pytest.raises(NotProjective):
        verify_theorem(fan, foliation_from_basis(fan, full(3)))


def test_report_json_keys():
    fan = named_fan("Pn:2")
    (report,) = verify_theorem(fan, foliation_from_basis(fan, full(2)))
    out = report.to_json()
    assert set(out) == {"ray", "length", "rank", "kind", "bundle", "matches_relative_tangent", "theorem_ok"}
    assert out["length"] == "3/1" and out["kind"] == "FiberType"


def test_escalation_is_logged(monkeypatch, caplog):
    from torifan import contraction

    fan = named_fan("P1xP1")
    V = foliation_from_basis(fan, [[0, 1]])
    real = contraction._splitting_certificate

    def broken(*args):
        cert = real(*args)
        return contraction.SplittingCertificate(cert.max_cone, cert.fiber_basis, cert.base_basis, 2, cert.determinant)

    monkeypatch.setattr(contraction, "_splitting_certificate", broken)
    with caplog.at_level(logging.WARNING):
        found = [detect_projective_bundle(fan, r, V) for r in mori_cone(fan).extremal_rays]
    escalated = [f for f in found if isinstance(f, BundleRejection) and f.escalate]
    assert len(escalated) == 1 and escalated[0].criterion == "iv"
    assert "manual review" in caplog.text
