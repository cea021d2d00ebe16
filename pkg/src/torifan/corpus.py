"""Named example fans, a seeded generator of projective simplicial fans, and test sweeps."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib import resources
from itertools import combinations

from .errors import UnknownName
from .fan import Fan, validate_fan, walls
from .intersection import wall_relation
from .linalg import IntMatrix, primitive, quotient_projection


@dataclass(frozen=True)
class NamedExample:
    name: str
    fan: Fan
    facts: dict  # expected values, each {"value": ..., "provenance": ...}


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    rank: int
    steps: int
    base: str | None = None

    def __post_init__(self):
        if not 1 <= self.rank <= 4:
            raise ValueError("rank must be in [1, 4]")
        if not 0 <= self.steps <= 8:
            raise ValueError("steps must be in [0, 8]")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def base_name(self) -> str:
        return self.base or f"Pn:{self.rank}"


def _projective_space(k: int) -> dict:
    rays = [[int(i == j) for j in range(k)] for i in range(k)] + [[-1] * k]
    return {"ambient_rank": k, "rays": rays, "max_cones": [list(c) for c in combinations(range(k + 1), k)]}


def _hirzebruch(a: int) -> dict:
    return {
        "ambient_rank": 2,
        "rays": [[1, 0], [0, 1], [-1, a], [0, -1]],
        "max_cones": [[0, 1], [1, 2], [2, 3], [0, 3]],
    }


def _weighted_projective(weights: list) -> dict:
    n = len(weights) - 1
    if n < 1 or any(w <= 0 for w in weights):
        raise UnknownName("weights must be at least two positive integers")
    if 1 in weights:
        # Rays e_1..e_n for the other weights, and minus their weighted sum.
        u = weights.index(1)
        others = [w for i, w in enumerate(weights) if i != u]
        rays = [[int(i == j) for j in range(n)] for i in range(n)]
        rays.append([-w for w in others])
    else:
        proj = quotient_projection(IntMatrix.from_columns([weights], n + 1))
        rays = [list(c) for c in proj.columns()]
    return {"ambient_rank": n, "rays": rays, "max_cones": [list(c) for c in combinations(range(n + 1), n)]}


def _product(a: dict, b: dict) -> dict:
    na, nb = a["ambient_rank"], b["ambient_rank"]
    rays = [list(r) + [0] * nb for r in a["rays"]] + [[0] * na + list(r) for r in b["rays"]]
    off = len(a["rays"])
    cones = [sorted(list(ca) + [off + i for i in cb]) for ca in a["max_cones"] for cb in b["max_cones"]]
    return {"ambient_rank": na + nb, "rays": rays, "max_cones": cones}


# Cones over the boundary of a triangular prism whose three square sides are
# cut by diagonals that all turn the same way; complete and simplicial but
# admits no strictly convex support function.
_NONPROJECTIVE_3FOLD = {
    "ambient_rank": 3,
    "rays": [[1, 0, 1], [0, 1, 1], [-1, -1, 1], [1, 0, -1], [0, 1, -1], [-1, -1, -1]],
    "max_cones": [
        [0, 1, 2],
        [3, 4, 5],
        [0, 1, 4],
        [0, 3, 4],
        [1, 2, 5],
        [1, 4, 5],
        [0, 2, 3],
        [2, 3, 5],
    ],
}

# Weighted blow-up of a torus-fixed point of P^3: the cone <e1, e2, -e1-e2-e3>
# is star-subdivided at 3e1 + e2 + 2(-e1-e2-e3) = (1, -1, -2). One extremal
# ray has relation -2v0 + v2 - v3 + v4 = 0, two negative coefficients.
_FLIP_3FOLD = {
    "ambient_rank": 3,
    "rays": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1], [1, -1, -2]],
    "max_cones": [[0, 1, 2], [1, 3, 4], [0, 3, 4], [0, 1, 4], [0, 2, 3], [1, 2, 3]],
}


def _raw_named(name: str) -> dict:
    kind, _, arg = name.partition(":")
    try:
        if kind == "Pn":
            k = int(arg)
            if k < 1:
                raise UnknownName(name)
            return _projective_space(k)
        if name == "P1xP1":
            return _product(_projective_space(1), _projective_space(1))
        if kind == "hirzebruch":
            return _hirzebruch(int(arg))
        if kind == "wps":
            return _weighted_projective([int(x) for x in arg.split(",")])
        if kind == "product":
            parts = arg.split(",")
            for cut in range(1, len(parts)):
                left, right = ",".join(parts[:cut]), ",".join(parts[cut:])
                try:
                    return _product(_raw_named(left), _raw_named(right))
                except UnknownName:
                    continue
            raise UnknownName(name)
        if name == "nonprojective3fold":
            return _NONPROJECTIVE_3FOLD
        if name == "flip3fold":
            return _FLIP_3FOLD
    except ValueError as exc:
        raise UnknownName(f"{name}: {exc}") from None
    raise UnknownName(name)


def named_fan(name: str) -> Fan:
    """Catalog: "Pn:k", "P1xP1", "hirzebruch:a", "wps:w0,...,wn", "product:A,B",
    "nonprojective3fold", "flip3fold"."""
    return validate_fan(_raw_named(name))


def star_subdivide(fan: Fan, tau: tuple, point: tuple) -> Fan:
    """Insert ``point`` (primitive, in the relative interior of tau) as a new ray."""
    rays = [list(r) for r in fan.rays] + [list(point)]
    p = len(rays) - 1
    tau_set = set(tau)
    cones = []
    for c in fan.max_cones:
        if tau_set <= set(c):
            for v in tau:
                cones.append(sorted([i for i in c if i != v] + [p]))
        else:
            cones.append(list(c))
    return validate_fan({"ambient_rank": fan.ambient_rank, "rays": rays, "max_cones": cones})


def random_projective_fan(config: GeneratorConfig) -> Fan:
    """Base fan followed by ``steps`` seeded star subdivisions.

    Each new ray is sum c_i v_i over the generators of a random cone of
    dimension >= 2, with c_i in {1, 2, 3}, made primitive.
    """
    fan = named_fan(config.base_name)
    if fan.ambient_rank != config.rank:
        raise ValueError(f"base {config.base_name} has rank {fan.ambient_rank}, not {config.rank}")
    rng = random.Random(config.seed)
    for _ in range(config.steps):
        faces = sorted(c for c in fan.cones if len(c) >= 2)
        if not faces:
            break
        tau = faces[rng.randrange(len(faces))]
        coeffs = [rng.randint(1, 3) for _ in tau]
        point = primitive(
            [sum(c * fan.rays[i][k] for c, i in zip(coeffs, tau)) for k in range(fan.ambient_rank)]
        )
        fan = star_subdivide(fan, tau, point)
    return fan


SWEEP_BASES = {
    1: ["Pn:1"],
    2: ["Pn:2", "P1xP1", "hirzebruch:1", "hirzebruch:2", "hirzebruch:3", "wps:1,1,2"],
    3: ["Pn:3", "product:Pn:1,Pn:2", "product:P1xP1,Pn:1", "product:hirzebruch:1,Pn:1", "wps:1,1,1,2"],
    4: ["Pn:4", "product:Pn:2,Pn:2", "product:P1xP1,P1xP1", "product:Pn:1,Pn:3", "product:Pn:3,Pn:1"],
}


def random_foliation(fan: Fan, rng: random.Random) -> list:
    """Basis vectors of a test foliation.

    Mixes uniformly random integer spans, spans of random ray subsets, and the
    span of the support of a nonnegative wall relation; the last family is
    what actually reaches rays of length r+1.
    """
    n = fan.ambient_rank
    mode = rng.randrange(4)
    if mode == 0:
        k = rng.randint(1, n)
        vecs = []
        while len(vecs) < k:
            v = [rng.randint(-3, 3) for _ in range(n)]
            if any(v):
                vecs.append(v)
        return vecs
    if mode == 1:
        k = rng.randint(1, min(n, fan.n_rays))
        return [list(fan.rays[i]) for i in sorted(rng.sample(range(fan.n_rays), k))]
    fiberlike = []
    for w in walls(fan):
        rel = wall_relation(fan, w).coefficients
        if all(a >= 0 for a in rel):
            fiberlike.append(rel)
    fiberlike = sorted(set(fiberlike))
    if not fiberlike:
        return [list(fan.rays[rng.randrange(fan.n_rays)])]
    rel = fiberlike[rng.randrange(len(fiberlike))]
    return [list(fan.rays[i]) for i, a in enumerate(rel) if a]


@dataclass(frozen=True)
class SweepInstance:
    index: int
    config: GeneratorConfig
    fan: Fan
    foliation: list


def sweep_instances(count: int, seed: int = 0, max_rays: int = 14):
    """Deterministic stream of (config, fan, foliation) test instances."""
    rng = random.Random(seed)
    produced = 0
    while produced < count:
        rank = rng.choice([1, 2, 2, 3, 3, 3, 4, 4])
        base = rng.choice(SWEEP_BASES[rank])
        base_rays = named_fan(base).n_rays
        steps = rng.randint(0, min(8, max_rays - base_rays))
        config = GeneratorConfig(seed=rng.getrandbits(64), rank=rank, steps=steps, base=base)
        fan = random_projective_fan(config)
        fol = random_foliation(fan, random.Random(config.seed ^ 0x5EED))
        yield SweepInstance(produced, config, fan, fol)
        produced += 1


def load_manifest(path=None) -> dict:
    """Read a corpus manifest; the bundled one is used when ``path`` is None."""
    if path is None:
        text = resources.files("torifan").joinpath("data/manifest.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)
