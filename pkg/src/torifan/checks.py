"""Theorem and oracle checks over single instances, sweeps and corpus manifests.

This is what ``torifan corpus-check`` runs; the acceptance tests drive the
same functions.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .contraction import classify_contraction, verify_theorem
from .corpus import GeneratorConfig, named_fan, random_projective_fan, sweep_instances
from .errors import NotProjective
from .fan import Fan, fan_diagnostics, is_complete, is_projective, walls
from .foliation import foliation_from_basis
from .intersection import mori_cone, multiplicity, wall_degrees, wall_relation
from .jsonio import parse_rat, rat
from .linalg import IntMatrix, lattice_index
from .oracles import brute_force_extremal_rays, brute_force_length


@dataclass
class InstanceResult:
    label: str
    n_rays: int
    rank: int
    lengths: list
    triggered: int  # rays with length > r
    theorem_ok: bool
    problems: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "n_rays": self.n_rays,
            "rank": self.rank,
            "lengths": [rat(x) for x in self.lengths],
            "strong_clause_triggers": self.triggered,
            "theorem_ok": self.theorem_ok,
            "problems": self.problems,
        }


def chow_problems(fan: Fan) -> list:
    """Exact consistency checks of the wall degree formula on every wall."""
    problems = []
    n = fan.ambient_rank
    smooth = all(multiplicity(fan, c) == 1 for c in fan.max_cones)
    for wi, w in enumerate(walls(fan)):
        rel = wall_relation(fan, w)
        deg = wall_degrees(fan, w, rel)
        k = rel.extra_right
        t = deg[k] / rel.coefficients[k]
        if t <= 0 or any(d != t * a for d, a in zip(deg, rel.coefficients)):
            problems.append(f"wall {wi}: degrees not a positive multiple of the relation")
        mw = multiplicity(fan, w.cone)
        for side, extra in ((w.left, rel.extra_left), (w.right, rel.extra_right)):
            if deg[extra] != Fraction(mw, multiplicity(fan, fan.max_cones[side])):
                problems.append(f"wall {wi}: D_extra . C != mult(wall)/mult(cone {side})")
        for e in range(n):
            if sum((fan.rays[i][e] * deg[i] for i in range(fan.n_rays)), Fraction(0)) != 0:
                problems.append(f"wall {wi}: principal divisor of e_{e} has nonzero degree")
        if smooth and any(d.denominator != 1 for d in deg):
            problems.append(f"wall {wi}: smooth fan with a non-integral intersection number")
    return problems


def check_instance(fan: Fan, basis, label: str = "", oracles: bool = True) -> InstanceResult:
    """verify_theorem plus oracle equivalence and the bundle invariants."""
    problems = []
    V = foliation_from_basis(fan, basis)
    reports = verify_theorem(fan, V)
    r = V.rank
    for rep in reports:
        if rep.length > r:
            if rep.bundle is None:
                problems.append(f"ray {rep.ray}: length > r but no bundle detected")
            if not rep.matches_relative_tangent:
                problems.append(f"ray {rep.ray}: length > r but V != span(fiber rays)")
            if rep.length != r + 1:
                problems.append(f"ray {rep.ray}: length > r but != r+1")
        if rep.bundle is not None:
            b = rep.bundle
            if not is_complete(b.base):
                problems.append(f"ray {rep.ray}: base fan not complete")
            if len(fan.max_cones) != (b.fiber_rank + 1) * len(b.base.max_cones):
                problems.append(f"ray {rep.ray}: cone count is not (r+1) times the base's")
            for c in b.certificates:
                fiber = [i for i in fan.max_cones[c.max_cone] if i in b.fiber_rays]
                rest = [i for i in fan.max_cones[c.max_cone] if i not in b.fiber_rays]
                gens = IntMatrix.from_columns([fan.rays[i] for i in fiber + rest], fan.ambient_rank)
                if not c.ok or lattice_index(gens) != multiplicity(fan, fan.max_cones[c.max_cone]):
                    problems.append(f"ray {rep.ray}: splitting certificate fails on cone {c.max_cone}")
        if rep.rejection is not None and rep.rejection.escalate:
            problems.append(f"ray {rep.ray}: ESCALATE {rep.rejection.reason}")
    if oracles:
        cone = mori_cone(fan)
        mine = sorted(ray.representative for ray in cone.extremal_rays)
        if mine != brute_force_extremal_rays(fan):
            problems.append("extremal rays disagree with the brute-force oracle")
        for ray, rep in zip(cone.extremal_rays, reports):
            if brute_force_length(fan, V.basis, ray.representative) != rep.length:
                problems.append(f"ray {ray.id}: length disagrees with the brute-force oracle")
        problems.extend(chow_problems(fan))
    return InstanceResult(
        label=label,
        n_rays=fan.n_rays,
        rank=r,
        lengths=[rep.length for rep in reports],
        triggered=sum(1 for rep in reports if rep.length > r),
        theorem_ok=all(rep.theorem_ok for rep in reports),
        problems=problems,
    )


def _sweep_one(inst) -> InstanceResult:
    c = inst.config
    label = f"sweep[{inst.index}] seed={c.seed} rank={c.rank} steps={c.steps} base={c.base_name}"
    diags = fan_diagnostics(inst.fan)
    result = check_instance(inst.fan, inst.foliation, label)
    if diags or not is_projective(inst.fan):
        result.problems.append("generated fan failed validation or projectivity")
    return result


def thread_count() -> int:
    env = os.environ.get("TORIFAN_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_sweep(count: int, seed: int = 0, threads: int | None = None) -> list:
    threads = threads or thread_count()
    instances = list(sweep_instances(count, seed))
    if threads <= 1:
        return [_sweep_one(i) for i in instances]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_sweep_one, instances, chunksize=8))


def _check_facts(fan: Fan, entry: dict) -> list:
    problems = []
    facts = entry.get("facts", {})
    if "projective" in facts:
        got = is_projective(fan)
        if got != facts["projective"]["value"]:
            problems.append(f"projective: expected {facts['projective']['value']}, got {got}")
    if "extremal_rays" in facts:
        got = len(mori_cone(fan).extremal_rays)
        if got != facts["extremal_rays"]["value"]:
            problems.append(f"extremal_rays: expected {facts['extremal_rays']['value']}, got {got}")
    if "kinds" in facts:
        cone = mori_cone(fan)
        got = sorted(classify_contraction(fan, ray).value for ray in cone.extremal_rays)
        if got != sorted(facts["kinds"]["value"]):
            problems.append(f"kinds: expected {sorted(facts['kinds']['value'])}, got {got}")
    return problems


def _identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def check_manifest(manifest: dict, threads: int | None = None) -> dict:
    """Run every named, seeded and sweep check listed in a manifest."""
    named_out = []
    for entry in manifest.get("named", []):
        fan = named_fan(entry["name"])
        problems = _check_facts(fan, entry)
        results = []
        if entry.get("theorem", True):
            for fol in entry.get("foliations", []):
                res = check_instance(fan, [[parse_rat(x) for x in v] for v in fol["basis"]], entry["name"])
                exp = fol.get("lengths")
                if exp is not None and sorted(res.lengths) != sorted(parse_rat(x) for x in exp["value"]):
                    res.problems.append(f"lengths: expected {exp['value']}, got {[rat(x) for x in res.lengths]}")
                results.append(res.to_json())
                problems.extend(res.problems)
                if not res.theorem_ok:
                    problems.append("theorem check failed")
        else:
            try:
                verify_theorem(fan, foliation_from_basis(fan, _identity(fan.ambient_rank)))
                problems.append("expected NotProjective from verify")
            except NotProjective:
                pass
        named_out.append({"name": entry["name"], "problems": problems, "foliations": results})

    seeded_out = []
    for cfg in manifest.get("random", []):
        config = GeneratorConfig(cfg["seed"], cfg["rank"], cfg["steps"], cfg.get("base"))
        fan = random_projective_fan(config)
        problems = []
        if "n_rays" in cfg and fan.n_rays != cfg["n_rays"]:
            problems.append(f"n_rays: expected {cfg['n_rays']}, got {fan.n_rays}")
        basis = cfg.get("foliation", {}).get("basis") or _identity(fan.ambient_rank)
        res = check_instance(fan, [[parse_rat(x) for x in v] for v in basis], f"seed {cfg['seed']}")
        problems.extend(res.problems)
        seeded_out.append({"config": cfg, "problems": problems, "theorem_ok": res.theorem_ok})

    sweep_out = None
    if "sweep" in manifest:
        spec = manifest["sweep"]
        results = run_sweep(spec["count"], spec.get("seed", 0), threads)
        triggers = sum(r.triggered for r in results)
        failing = [r.to_json() for r in results if r.problems or not r.theorem_ok]
        sweep_out = {
            "instances": len(results),
            "strong_clause_triggers": triggers,
            "min_triggers": spec.get("min_triggers", 0),
            "theorem_failures": sum(1 for r in results if not r.theorem_ok),
            "failing": failing,
        }

    theorem_failed = (sweep_out is not None and sweep_out["theorem_failures"] > 0) or any(
        not s["theorem_ok"] for s in seeded_out
    )
    ok = (
        all(not e["problems"] for e in named_out)
        and all(not s["problems"] for s in seeded_out)
        and (
            sweep_out is None
            or (not sweep_out["failing"] and sweep_out["strong_clause_triggers"] >= sweep_out["min_triggers"])
        )
    )
    return {"named": named_out, "random": seeded_out, "sweep": sweep_out, "ok": ok, "theorem_failed": theorem_failed}
