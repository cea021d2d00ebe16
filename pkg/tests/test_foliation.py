from fractions import Fraction

import pytest

from torifan.corpus import named_fan
from torifan.errors import ZeroSubspace
from torifan.fan import walls
from torifan.foliation import foliated_canonical_class, foliated_degree, foliation_from_basis, length
from torifan.intersection import canonical_degree, mori_cone
from torifan.oracles import brute_force_length


def ray_ids(fan, vectors):
    return frozenset(fan.rays.index(tuple(v)) for v in vectors)


def test_full_space():
    fan = named_fan("Pn:2")
    V = foliation_from_basis(fan, [[1, 0], [0, 1]])
    assert V.rank == 2 and V.rays_in_v == frozenset({0, 1, 2})


def test_rays_in_v():
    q = named_fan("P1xP1")
    V = foliation_from_basis(q, [[0, 1]])
    assert V.rank == 1 and V.rays_in_v == ray_ids(q, [(0, 1), (0, -1)])
    f1 = named_fan("hirzebruch:1")
    assert foliation_from_basis(f1, [[1, 0]]).rays_in_v == ray_ids(f1, [(1, 0)])


def test_rational_and_redundant_vectors():
    fan = named_fan("Pn:3")
    V = foliation_from_basis(fan, [[Fraction(1, 2), 0, 0], [2, 0, 0], [0, 0, 0], [0, Fraction(-1, 3), 0]])
    assert V.rank == 2
    assert V.basis == ((1, 0, 0), (0, -1, 0))
    assert V.contains([3, 5, 0]) and not V.contains([0, 0, 1])


def test_errors():
    fan = named_fan("Pn:2")
    with pytest.raises(ZeroSubspace):
        foliation_from_basis(fan, [[0, 0]])
    with pytest.raises(ValueError):
        foliation_from_basis(fan, [[1, 0, 0]])


def test_canonical_class():
    q = named_fan("P1xP1")
    k = foliated_canonical_class(q, foliation_from_basis(q, [[0, 1]]))
    assert {q.rays[i]: c for i, c in enumerate(k.coefficients)} == {(1, 0): 0, (-1, 0): 0, (0, 1): -1, (0, -1): -1}
    fan = named_fan("hirzebruch:1")
    assert foliated_canonical_class(fan, foliation_from_basis(fan, [[1, 0], [0, 1]])).coefficients == (-1,) * 4


def test_foliated_degree():
    p2 = named_fan("Pn:2")
    V = foliation_from_basis(p2, [[1, 0], [0, 1]])
    assert all(foliated_degree(p2, V, w) == canonical_degree(p2, w) == 3 for w in walls(p2))
    q = named_fan("P1xP1")
    V = foliation_from_basis(q, [[0, 1]])
    by_cone = {tuple(q.rays[i] for i in w.cone): foliated_degree(q, V, w) for w in walls(q)}
    assert by_cone[((1, 0),)] == 2
    assert by_cone[((0, 1),)] == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_length_projective_space(n):
    fan = named_fan(f"Pn:{n}")
    V = foliation_from_basis(fan, [[int(i == j) for j in range(n)] for i in range(n)])
    (ray,) = mori_cone(fan).extremal_rays
    assert length(fan, V, ray) == n + 1
    assert brute_force_length(fan, V.basis, ray.representative) == n + 1


def test_length_p1xp1_and_f1():
    q = named_fan("P1xP1")
    V = foliation_from_basis(q, [[0, 1]])
    assert sorted(length(q, V, r) for r in mori_cone(q).extremal_rays) == [0, 2]
    f1 = named_fan("hirzebruch:1")
    V = foliation_from_basis(f1, [[1, 0]])
    assert all(length(f1, V, r) <= 1 for r in mori_cone(f1).extremal_rays)


def test_length_wps():
    fan = named_fan("wps:1,1,2")
    V = foliation_from_basis(fan, [[1, 0], [0, 1]])
    (ray,) = mori_cone(fan).extremal_rays
    assert length(fan, V, ray) == 2
    assert brute_force_length(fan, V.basis, ray.representative) == 2
