"""Command-line interface: one JSON document on stdout per invocation.

Exit codes: 0 success, 1 invalid input or failed check, 2 usage error,
3 a theorem check came back false.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import checks
from .contraction import classify_contraction, verify_theorem
from .corpus import GeneratorConfig, load_manifest, random_projective_fan
from .errors import TorifanError
from .fan import (
    fan_diagnostics,
    is_complete,
    is_projective,
    is_simplicial,
    validate_fan,
    walls,
)
from .foliation import foliation_from_basis, length
from .intersection import class_group, mori_cone, multiplicity
from .jsonio import dumps, parse_foliation, rat, read_json

log = logging.getLogger("torifan")

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_THEOREM = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load(path):
    try:
        return read_json(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise TorifanError(f"{path}: malformed JSON ({exc})") from None


def _fan(path):
    return validate_fan(_load(path))


def _foliation(fan, path):
    try:
        vectors = parse_foliation(_load(path))
    except ValueError as exc:
        raise TorifanError(str(exc)) from None
    return foliation_from_basis(fan, vectors)


def _ray(cone, k):
    if not 0 <= k < len(cone.extremal_rays):
        raise UsageError(f"ray {k} out of range (fan has {len(cone.extremal_rays)} extremal rays)")
    return cone.extremal_rays[k]


def cmd_validate(args):
    raw = _load(args.fan)
    diags = fan_diagnostics(raw)
    if diags:
        return {"valid": False, "diagnostics": [d.to_json() for d in diags]}, EXIT_INVALID
    return {"valid": True}, EXIT_OK


def cmd_info(args):
    fan = _fan(args.fan)
    complete = is_complete(fan)
    out = {
        "ambient_rank": fan.ambient_rank,
        "n_rays": fan.n_rays,
        "n_max_cones": len(fan.max_cones),
        "simplicial": is_simplicial(fan),
        "complete": complete,
        "multiplicities": [multiplicity(fan, c) for c in fan.max_cones],
        "projective": None,
        "walls": None,
        "class_group": None,
    }
    out["smooth"] = all(m == 1 for m in out["multiplicities"])
    if complete:
        out["projective"] = is_projective(fan)
        out["walls"] = len(walls(fan))
        cl = class_group(fan)
        out["class_group"] = {"rank": cl.rank, "torsion": list(cl.torsion)}
    return out, EXIT_OK


def cmd_mori(args):
    fan = _fan(args.fan)
    cone = mori_cone(fan)
    wall_list = walls(fan)
    return {
        "extremal_rays": len(cone.extremal_rays),
        "generators": [list(g) for g in cone.generators],
        "rays": [
            {
                "id": ray.id,
                "class": list(ray.representative),
                "walls": list(ray.wall_ids),
                "kind": classify_contraction(fan, ray).value,
            }
            for ray in cone.extremal_rays
        ],
        "walls": [
            {"id": i, "cone": list(w.cone), "left": w.left, "right": w.right} for i, w in enumerate(wall_list)
        ],
    }, EXIT_OK


def cmd_length(args):
    fan = _fan(args.fan)
    V = _foliation(fan, args.foliation)
    cone = mori_cone(fan)
    rays = cone.extremal_rays if args.ray is None else [_ray(cone, args.ray)]
    wall_list = walls(fan)
    return {
        "rank": V.rank,
        "rays_in_v": sorted(V.rays_in_v),
        "lengths": [{"ray": ray.id, "length": rat(length(fan, V, ray, wall_list))} for ray in rays],
    }, EXIT_OK


def cmd_classify(args):
    fan = _fan(args.fan)
    ray = _ray(mori_cone(fan), args.ray)
    return {"ray": ray.id, "kind": classify_contraction(fan, ray).value}, EXIT_OK


def cmd_verify(args):
    fan = _fan(args.fan)
    V = _foliation(fan, args.foliation)
    reports = verify_theorem(fan, V)
    ok = all(r.theorem_ok for r in reports)
    return {"reports": [r.to_json() for r in reports], "theorem_ok": ok}, EXIT_OK if ok else EXIT_THEOREM


def cmd_corpus_gen(args):
    try:
        config = GeneratorConfig(args.seed, args.rank, args.steps, args.base)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        fan = random_projective_fan(config)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return fan.to_json(), EXIT_OK


def cmd_corpus_check(args):
    manifest = load_manifest(args.manifest) if args.manifest else load_manifest()
    result = checks.check_manifest(manifest)
    if result["theorem_failed"]:
        return result, EXIT_THEOREM
    return result, EXIT_OK if result["ok"] else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torifan", description="Exact toric Mori theory and foliated lengths.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check the fan axioms")
    s.add_argument("fan", nargs="?", default="-", help="fan JSON file (default: stdin)")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("info", help="basic invariants of a fan")
    s.add_argument("fan", nargs="?", default="-")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("mori", help="Mori cone generators and extremal rays")
    s.add_argument("fan", nargs="?", default="-")
    s.set_defaults(func=cmd_mori)

    s = sub.add_parser("length", help="foliated lengths of extremal rays")
    s.add_argument("--fan", required=True)
    s.add_argument("--foliation", required=True)
    s.add_argument("--ray", type=int)
    s.set_defaults(func=cmd_length)

    s = sub.add_parser("classify", help="fiber type / divisorial / small")
    s.add_argument("--fan", required=True)
    s.add_argument("--ray", type=int, required=True)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("verify", help="check the length bound and bundle conclusions per ray")
    s.add_argument("--fan", required=True)
    s.add_argument("--foliation", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("corpus-gen", help="seeded random projective simplicial fan")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--base", default=None, help="named base fan (default Pn:RANK)")
    s.set_defaults(func=cmd_corpus_gen)

    s = sub.add_parser("corpus-check", help="run the checks listed in a corpus manifest")
    s.add_argument("--manifest", default=None, help="manifest JSON (default: the bundled one)")
    s.set_defaults(func=cmd_corpus_check)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        out, code = args.func(args)
    except UsageError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except TorifanError as exc:
        out, code = exc.to_json(), EXIT_INVALID
    sys.stdout.write(dumps(out))
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
