import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxkit.classify import (Kind, Reason, classify_component, components, is_spherical,
                             is_virtually_abelian, shape)
from coxkit.coxeter import INF, CoxeterError, CoxeterSystem
from conftest import system


def cox(m, names=None):
    n = len(m)
    names = names or tuple(f"r{i}" for i in range(n))
    return CoxeterSystem(tuple(names), tuple(tuple(r) for r in m))


def path(labels):
    n = len(labels) + 1
    m = [[2] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 1
    for i, lab in enumerate(labels):
        m[i][i + 1] = m[i + 1][i] = lab
    return cox(m)


def test_components_examples():
    assert components(system("A2~")) == [frozenset({0, 1, 2})]
    assert components(system("DinfxDinf")) == [frozenset({0, 1}), frozenset({2, 3})]
    assert components(system("P5"), frozenset()) == []


def test_classify_examples():
    lab = classify_component(system("A2"), "s t")
    assert (lab.kind, lab.name, lab.rank) == (Kind.SPHERICAL, "A2", 2)
    lab = classify_component(system("A2~"), "s1 s2 s3")
    assert (lab.kind, lab.name, lab.rank) == (Kind.AFFINE, "A~2", 3)
    lab = classify_component(system("P5"), None)
    assert (lab.kind, lab.rank) == (Kind.INDEFINITE, 5)
    lab = classify_component(system("Dinf"), None)
    assert (lab.kind, lab.rank) == (Kind.AFFINE, 2)


def test_classify_requires_irreducible():
    with pytest.raises(CoxeterError):
        classify_component(system("DinfxDinf"), None)
    with pytest.raises(CoxeterError):
        classify_component(system("A2"), frozenset())


def test_shape_examples():
    r = shape(system("A2~"))
    assert r.bad and r.reason is Reason.FINITE_TIMES_AFFINE
    r = shape(system("DinfxDinf"))
    assert r.bad and r.reason is Reason.TWO_INFINITE_FACTORS
    r = shape(system("P5"))
    assert not r.bad and r.reason is None
    r = shape(system("A3"))
    assert r.bad and r.reason is Reason.ALL_FINITE
    assert not shape(system("Dinf")).bad


def test_shape_json():
    doc = shape(system("DinfxDinf")).to_json(system("DinfxDinf"))
    assert doc["bad"] is True and doc["reason"] == "TwoInfiniteFactors"
    assert [c["gens"] for c in doc["components"]] == [["s", "t"], ["u", "v"]]


@pytest.mark.parametrize("labels,kind,name", [
    ([3, 3, 3], Kind.SPHERICAL, "A4"),
    ([4, 3, 3], Kind.SPHERICAL, "B4"),
    ([3, 3, 4], Kind.SPHERICAL, "B4"),
    ([3, 4, 3], Kind.SPHERICAL, "F4"),
    ([5, 3, 3], Kind.SPHERICAL, "H4"),
    ([5, 3], Kind.SPHERICAL, "H3"),
    ([6], Kind.SPHERICAL, "G2"),
    ([7], Kind.SPHERICAL, "I2(7)"),
    ([4, 4], Kind.AFFINE, "C~2"),
    ([3, 6], Kind.AFFINE, "G~2"),
    ([4, 3, 4], Kind.AFFINE, "C~3"),
    ([3, 3, 4, 3], Kind.AFFINE, "F~4"),
    ([5, 4], Kind.INDEFINITE, ""),
    ([3, 3, 3, 3, 3, 5], Kind.INDEFINITE, ""),
    ([3, 5, 3], Kind.INDEFINITE, ""),
    ([INF, 3], Kind.INDEFINITE, ""),
])
def test_paths(labels, kind, name):
    lab = classify_component(path(labels), None)
    assert lab.kind is kind
    if name:
        assert lab.name == name


def star(legs):
    n = 1 + sum(legs)
    m = [[2] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 1
    nxt = 1
    for leg in legs:
        prev = 0
        for _ in range(leg):
            m[prev][nxt] = m[nxt][prev] = 3
            prev, nxt = nxt, nxt + 1
    return cox(m)


@pytest.mark.parametrize("legs,kind,name", [
    ([1, 1, 1], Kind.SPHERICAL, "D4"),
    ([1, 1, 3], Kind.SPHERICAL, "D6"),
    ([1, 2, 2], Kind.SPHERICAL, "E6"),
    ([1, 2, 3], Kind.SPHERICAL, "E7"),
    ([1, 2, 4], Kind.SPHERICAL, "E8"),
    ([1, 1, 1, 1], Kind.AFFINE, "D~4"),
    ([2, 2, 2], Kind.AFFINE, "E~6"),
    ([1, 3, 3], Kind.AFFINE, "E~7"),
    ([1, 2, 5], Kind.AFFINE, "E~8"),
    ([1, 2, 6], Kind.INDEFINITE, ""),
    ([2, 2, 3], Kind.INDEFINITE, ""),
])
def test_stars(legs, kind, name):
    lab = classify_component(star(legs), None)
    assert lab.kind is kind
    if name:
        assert lab.name == name


def test_triangles():
    assert classify_component(cox([[1, 3, 3], [3, 1, 3], [3, 3, 1]]), None).kind is Kind.AFFINE
    assert classify_component(cox([[1, 4, 4], [4, 1, 2], [4, 2, 1]]), None).name == "C~2"
    assert classify_component(cox([[1, 3, 4], [3, 1, 3], [4, 3, 1]]), None).kind is Kind.INDEFINITE
    assert classify_component(cox([[1, 4, 4], [4, 1, 4], [4, 4, 1]]), None).kind is Kind.INDEFINITE


def test_components_partition():
    for name in ["A3", "A2~", "P5", "DinfxDinf", "H3"]:
        W = system(name)
        for k in range(W.rank + 1):
            for J in itertools.combinations(range(W.rank), k):
                comps = components(W, frozenset(J))
                assert set().union(*comps) == set(J) if comps else not J
                for a, b in itertools.combinations(comps, 2):
                    assert all(W.matrix[x][y] == 2 for x in a for y in b)


def permuted(W, perm):
    n = W.rank
    m = [[W.matrix[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
    return CoxeterSystem(tuple(W.generators[p] for p in perm), tuple(map(tuple, m)))


@settings(max_examples=60, deadline=None)
@given(name=st.sampled_from(["A3", "B3", "H3", "A2~", "P5", "Dinf"]), seed=st.integers(0, 1000))
def test_classification_invariant_under_relabelling(name, seed):
    W = system(name)
    perm = list(range(W.rank))
    random.Random(seed).shuffle(perm)
    assert str(classify_component(W, None)) == str(classify_component(permuted(W, perm), None))


@pytest.mark.parametrize("name", ["A2", "B2", "A3", "B3", "H3", "A2~", "Dinf", "P5"])
def test_spherical_iff_bfs_saturates(name):
    W = system(name)
    for k in range(1, W.rank + 1):
        for J in itertools.combinations(range(W.rank), k):
            J = frozenset(J)
            if len(components(W, J)) != 1:
                continue
            sub = CoxeterSystem(tuple(W.generators[i] for i in sorted(J)),
                                tuple(tuple(W.matrix[a][b] for b in sorted(J)) for a in sorted(J)))
            ball = sub.ball(60, budget=3000)
            assert is_spherical(W, J) == ball.saturated


def test_virtually_abelian():
    assert is_virtually_abelian(system("A2~"))
    assert is_virtually_abelian(system("DinfxDinf"))
    assert is_virtually_abelian(system("H3"))
    assert not is_virtually_abelian(system("P5"))


def test_b_tilde():
    # fork at one end, label 4 at the other
    for n in (4, 5, 6):
        m = [[2] * n for _ in range(n)]
        for i in range(n):
            m[i][i] = 1
        m[0][2] = m[2][0] = m[1][2] = m[2][1] = 3
        for i in range(2, n - 1):
            m[i][i + 1] = m[i + 1][i] = 3
        m[n - 2][n - 1] = m[n - 1][n - 2] = 4
        lab = classify_component(cox(m), None)
        assert lab.kind is Kind.AFFINE and lab.name == f"B~{n - 1}"
