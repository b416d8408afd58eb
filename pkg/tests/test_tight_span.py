import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from funclust.generators import random_aspace, random_metric, random_ultrametric
from funclust.projections import project
from funclust.sieves import sl_sieve
from funclust.tight_span import (
    MAX_POINTS,
    ExtremalFunction,
    SizeGuardError,
    edges_by_rank,
    extend_half_diameter,
    extend_to_aspace,
    function,
    is_extremal,
    kuratowski,
    restrict_function,
    root_check,
    tight_span_vertices,
    vertices_by_bases,
)
from funclust.weights import ASpace, Ultrametric, ValidationError, antipodes, diameter, from_pairs, satisfies, validate

from conftest import metrics


def tri(ab, bc, ac):
    return from_pairs("abc", {("a", "b"): ab, ("b", "c"): bc, ("a", "c"): ac})


SQUARE = validate([[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]])


def test_two_point_space():
    eps = Fraction(3, 2)
    d = from_pairs("xy", {("x", "y"): eps})
    r = tight_span_vertices(d)
    assert r.vertices == [kuratowski(d, "x"), kuratowski(d, "y")] or \
        set(r.vertices) == {kuratowski(d, "x"), kuratowski(d, "y")}
    assert kuratowski(d, "x").values == (0, eps)
    assert r.edges == [(0, 1)]
    assert r.root.values == (eps / 2, eps / 2)
    assert r.root.height == eps / 2 and r.root.minset() == {"x", "y"}


def test_steiner_point_of_345():
    d = tri(3, 5, 4)
    r = tight_span_vertices(d)
    steiner = function(d, (1, 2, 3))
    assert set(r.vertices) == {kuratowski(d, p) for p in "abc"} | {steiner}
    assert not r.has_root
    k = r.vertices.index(steiner)
    assert sorted(r.edges) == sorted(tuple(sorted((i, k))) for i in range(4) if i != k)


def test_root_examples():
    assert root_check(tri(3, 5, 4)) is None
    assert root_check(SQUARE).values == (1, 1, 1, 1)
    assert root_check(from_pairs("xy", {("x", "y"): 2})).values == (1, 1)


def test_square_tight_span_is_a_square():
    r = tight_span_vertices(SQUARE)
    assert set(r.vertices) == {kuratowski(SQUARE, p) for p in SQUARE.points}
    assert len(r.edges) == 4
    # the root is extremal but sits inside a 2-cell, so it is not a vertex
    assert r.has_root and r.root not in r.vertices


def test_is_extremal_examples():
    d = tri(3, 5, 4)
    for p in "abc":
        assert is_extremal(kuratowski(d, p))
    assert not is_extremal(function(d, (Fraction(5, 2),) * 3))
    assert is_extremal(function(SQUARE, (1, 1, 1, 1)))
    assert not is_extremal(function(d, (1, 2, 4)))  # dominates the Steiner point
    assert not is_extremal(function(d, (0, 0, 0)))  # infeasible


def test_height_and_minset():
    d = tri(3, 5, 4)
    e = kuratowski(d, "b")
    assert e.height == 0 and e.minset() == {"b"}
    assert e.tight_pairs() >= {frozenset("b"), frozenset("ab"), frozenset("bc")}


def test_kuratowski_is_isometric(rng):
    for _ in range(30):
        d = random_metric(rng, int(rng.integers(2, 7)), exact=True)
        for x, y in itertools.combinations(d.points, 2):
            assert kuratowski(d, x).distance(kuratowski(d, y)) == d[x, y]
            assert kuratowski(d, x)(x) == 0


@given(metrics(1, 5))
def test_walk_matches_basis_enumeration(d):
    r = tight_span_vertices(d)
    assert set(r.vertices) == set(vertices_by_bases(d))
    assert all(is_extremal(f) for f in r.vertices)
    assert {kuratowski(d, p) for p in d.points} <= set(r.vertices)


def test_walk_matches_basis_enumeration_six_points(rng):
    for _ in range(10):
        d = random_metric(rng, 6, exact=True)
        assert set(tight_span_vertices(d).vertices) == set(vertices_by_bases(d))


@given(metrics(2, 5))
def test_walk_edges_match_rank_test(d):
    r = tight_span_vertices(d)
    assert sorted(r.edges) == sorted(edges_by_rank(r.vertices))


def test_float_mode_matches_exact(rng):
    for _ in range(10):
        d = random_metric(rng, int(rng.integers(2, 7)), exact=True)
        exact = np.array([[float(v) for v in f.values] for f in tight_span_vertices(d).vertices])
        flt = np.array([f.values for f in tight_span_vertices(d.as_float()).vertices])
        assert exact.shape == flt.shape
        gap = np.abs(exact[:, None, :] - flt[None, :, :]).max(axis=2)
        assert gap.min(axis=1).max() <= 1e-9 and gap.min(axis=0).max() <= 1e-9


def test_eight_points_is_allowed_nine_is_not(rng):
    d = random_metric(rng, MAX_POINTS, exact=True)
    r = tight_span_vertices(d)
    assert len(r.vertices) >= MAX_POINTS
    with pytest.raises(SizeGuardError):
        tight_span_vertices(random_metric(rng, MAX_POINTS + 1, exact=True))


def test_non_metric_rejected():
    with pytest.raises(ValidationError):
        tight_span_vertices(tri(1, 1, 3))


def test_aspace_identities(rng):
    for _ in range(40):
        d = random_aspace(rng, int(rng.integers(2, 7)))
        r = tight_span_vertices(d)
        D = diameter(d)
        assert r.has_root
        for f in r.vertices:
            assert r.root.distance(f) == D / 2 - f.height
            assert max(f.values) + f.height == D
            for x in f.minset():
                for y in antipodes(d, x):
                    assert f(x) + f(y) == D


def test_root_check_agrees_with_predicate(rng):
    for _ in range(200):
        d = random_metric(rng, int(rng.integers(1, 7)), exact=True)
        assert (root_check(d) is not None) == satisfies(d, ASpace())


@given(metrics(1, 6))
def test_diameter_extension_is_aspace(d):
    e = extend_to_aspace(d)
    assert satisfies(e, ASpace()) and root_check(e) is not None


def test_ultrametric_vertices_follow_the_dendrogram(rng):
    for _ in range(30):
        u = random_ultrametric(rng, int(rng.integers(2, 7)))
        levels = set(sl_sieve(u).breakpoints)
        blocks = {b for c in sl_sieve(u).covers for b in c.blocks}
        for f in tight_span_vertices(u).vertices:
            # heights sit at half the merge levels, since edges split the merge height evenly
            assert f.height == 0 or 2 * f.height in levels
            assert f.minset() in blocks


def test_ultrametric_inner_vertex():
    u = tri(1, 2, 2)
    assert satisfies(u, Ultrametric())
    inner = [f for f in tight_span_vertices(u).vertices if f.height > 0]
    assert inner == [function(u, (Fraction(1, 2), Fraction(1, 2), Fraction(3, 2)))]
    assert inner[0].minset() == {"a", "b"}


def test_half_diameter_extension(rng):
    # for A-spaces, functions on the extension restrict to extremal functions on X
    # and the restriction is isometric on vertices; X's own vertices are all reached
    checked = 0
    for _ in range(40):
        d = random_metric(rng, int(rng.integers(2, 6)), exact=True)
        if not satisfies(d, ASpace()):
            continue
        checked += 1
        hat = extend_half_diameter(d)
        big = tight_span_vertices(hat).vertices
        small = restrict = [restrict_function(f, d.points) for f in big]
        assert all(is_extremal(g, d) for g in small)
        for (f, g), (f2, g2) in itertools.combinations(zip(big, restrict), 2):
            assert f.distance(f2) == g.distance(g2)
        assert set(tight_span_vertices(d).vertices) <= set(small)
    assert checked > 5


def test_half_diameter_extension_of_non_aspace_loses_extremality():
    d = tri(3, 5, 4)
    big = tight_span_vertices(extend_half_diameter(d)).vertices
    assert not all(is_extremal(restrict_function(f, d.points), d) for f in big)


def test_extension_label_clash():
    with pytest.raises(ValueError):
        extend_to_aspace(tri(1, 1, 1), label="a")


def test_function_arity():
    with pytest.raises(ValueError):
        function(tri(1, 1, 1), (1, 1))
    assert isinstance(function(tri(1, 1, 1), (1, 1, 1)), ExtremalFunction)
