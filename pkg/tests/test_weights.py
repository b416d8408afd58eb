import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from funclust.weights import (
    INF,
    AmSpace,
    ASpace,
    IntegerGrid,
    Metric,
    QMetric,
    RhoInframetric,
    RhoRelaxed,
    SetMap,
    Ultrametric,
    ValidationError,
    antipodes,
    diameter,
    from_pairs,
    is_nonexpansive,
    leq,
    max2,
    pullback,
    satisfies,
    separation,
    sup,
    validate,
    zero,
)

from conftest import metrics, weights


def tri(ab, bc, ac, labels="abc"):
    return from_pairs(labels, {("a", "b"): ab, ("b", "c"): bc, ("a", "c"): ac})


def test_validate_accepts_minimal_space():
    u = validate([[0, 1], [1, 0]])
    assert u.points == (1, 2) and u[1, 2] == 1 and u.exact


def test_validate_reports_asymmetry_position():
    with pytest.raises(ValidationError) as e:
        validate([[0, 1], [2, 0]])
    assert e.value.problems == ["asymmetric at (1,2)"]


def test_validate_reports_each_problem():
    with pytest.raises(ValidationError) as e:
        validate([[0, -1], [-1, 0]])
    assert e.value.problems == ["negative entry at (1,2)", "negative entry at (2,1)"]
    with pytest.raises(ValidationError) as e:
        validate([[1, 0], [0, 0]])
    assert "nonzero diagonal at (1,1)" in e.value.problems
    with pytest.raises(ValidationError) as e:
        validate([[0, 1], [1, 0]], labels=["a", "a"])
    assert any("duplicate label" in p for p in e.value.problems)


def test_validate_rejects_non_square_and_nan():
    with pytest.raises(ValidationError):
        validate([[0, 1, 2], [1, 0, 3]])
    with pytest.raises(ValidationError):
        validate(np.array([[0.0, np.nan], [np.nan, 0.0]]))


def test_exact_and_float_modes():
    assert validate([["0", "4/3"], ["4/3", "0"]])[1, 2] == Fraction(4, 3)
    assert validate([["0", "0.1"], ["0.1", "0"]])[1, 2] == Fraction(1, 10)
    assert not validate([[0.0, 0.5], [0.5, 0.0]]).exact


def test_weight_space_is_immutable():
    u = validate([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        u.w[0, 1] = 5


def test_pullback_examples():
    v = from_pairs("pq", {("p", "q"): 3})
    f = SetMap.from_dict("abc", "pq", {"a": "p", "b": "p", "c": "q"})
    u = pullback(f, v)
    assert (u["a", "b"], u["a", "c"], u["b", "c"]) == (0, 3, 3)
    assert pullback(SetMap.identity("pq"), v) == v
    const = SetMap.from_dict("abc", "pq", dict.fromkeys("abc", "q"))
    assert pullback(const, v) == zero("abc")


def test_pullback_target_mismatch():
    with pytest.raises(ValueError):
        pullback(SetMap.identity("ab"), from_pairs("pq", {("p", "q"): 1}))


def test_nonexpansive_examples():
    u = from_pairs("ab", {("a", "b"): 1})
    assert is_nonexpansive(SetMap.identity("ab"), u, u)
    v = from_pairs("pq", {("p", "q"): 2})
    assert not is_nonexpansive(SetMap.from_dict("ab", "pq", {"a": "p", "b": "q"}), u, v)
    assert is_nonexpansive(SetMap.from_dict("ab", "pq", {"a": "p", "b": "q"}), u, zero("pq"))


def _all_maps(src, tgt):
    for images in itertools.product(tgt, repeat=len(src)):
        yield SetMap(tuple(src), tuple(tgt), images)


def test_pullback_contravariant_exhaustive():
    X, Y, Z = "abc", "pq", "rst"
    w = from_pairs(Z, {("r", "s"): 1, ("s", "t"): 2, ("r", "t"): 5})
    for f in _all_maps(X, Y):
        for g in _all_maps(Y, Z):
            assert pullback(f.then(g), w) == pullback(f, pullback(g, w))


@given(st.integers(1, 5).flatmap(lambda n: st.lists(weights(n, n), min_size=1, max_size=4)))
def test_leq_partial_order_and_sup(family):
    s = sup(family)
    assert all(leq(v, s) for v in family)
    assert all(leq(v, v) for v in family)
    # least: any common upper bound dominates the sup
    bound = family[0]
    for v in family[1:]:
        bound = bound.with_matrix(np.maximum(bound.w, v.w) + (1 - np.eye(v.n, dtype=int)))
    assert leq(s, bound)
    assert sup(family[:1]) == family[0]
    for a, b in itertools.combinations(family, 2):
        if leq(a, b) and leq(b, a):
            assert a == b


def test_max_of_cut_example():
    t = Fraction(4, 3)
    d = validate([[0, 1, 1, 1, 2], [1, 0, 2, 2, 1], [1, 2, 0, 2, 1], [1, 2, 2, 0, 1], [2, 1, 1, 1, 0]])
    d1 = validate([[0, 1, 1, 1, 2], [1, 0, t, t, 1], [1, t, 0, t, 1], [1, t, t, 0, 1], [2, 1, 1, 1, 0]])
    d0 = validate([[0, 1, 1, 1, 0], [1, 0, 2, 2, 1], [1, 2, 0, 2, 1], [1, 2, 2, 0, 1], [0, 1, 1, 1, 0]])
    assert max2(d0, d1) == d
    assert leq(d0, d) and leq(d1, d) and d0 != d and d1 != d


def test_predicate_examples():
    assert not satisfies(tri(1, 2, 3), Ultrametric())
    assert satisfies(tri(2, 2, 1), Ultrametric())
    assert not satisfies(tri(3, 5, 4), ASpace())
    assert satisfies(tri(1, 2, 3), Metric())
    assert not satisfies(tri(1, 1, 3), Metric())
    assert satisfies(tri(1, 1, 2), RhoInframetric(2))
    assert not satisfies(tri(1, 1, 3), RhoInframetric(2))
    assert satisfies(tri(1, 1, 3), RhoRelaxed(Fraction(3, 2)))
    assert satisfies(tri(1, 2, 2), IntegerGrid())
    assert not satisfies(tri(1, 2, Fraction(5, 2)), IntegerGrid())
    assert satisfies(tri(1, 2, Fraction(5, 2)), IntegerGrid(Fraction(1, 2)))


def test_qmetric_boundary_cases():
    assert not satisfies(tri(1, 2, 3), QMetric(2))
    assert satisfies(tri(3, 4, 5), QMetric(2))
    assert not satisfies(tri(3, 4, Fraction(501, 100)), QMetric(2))
    assert satisfies(tri(3.0, 4.0, 5.0), QMetric(2))


def test_parameter_validation():
    for bad in (lambda: QMetric(0.5), lambda: RhoInframetric(0.9), lambda: AmSpace(2),
                lambda: AmSpace(3.5), lambda: IntegerGrid(0), lambda: RhoRelaxed(0)):
        with pytest.raises(ValueError):
            bad()


def test_amspace_vacuous_below_m():
    assert satisfies(tri(3, 5, 4), AmSpace(4))
    assert not satisfies(tri(3, 5, 4), AmSpace(3))


def test_scalars():
    eps = Fraction(5, 2)
    two = from_pairs("ab", {("a", "b"): eps})
    assert diameter(two) == eps and separation(two) == eps and antipodes(two, "a") == {"b"}
    t = tri(3, 5, 4)
    # b-c is the 5-side
    assert antipodes(t, "b") == {"c"} and antipodes(t, "c") == {"b"} and antipodes(t, "a") == frozenset()
    z = zero("abc")
    assert diameter(z) == 0 and antipodes(z, "a") == set("abc")
    with pytest.raises(ValueError):
        separation(zero("a"))


@given(metrics(1, 6))
def test_am_monotone_in_m(d):
    for m in (3, 4, 5):
        if satisfies(d, AmSpace(m)):
            assert satisfies(d, AmSpace(m + 1))


@given(weights(1, 6))
def test_ultrametric_iff_a3(u):
    if satisfies(u, Metric()):
        assert satisfies(u, Ultrametric()) == satisfies(u, AmSpace(3))


@given(weights(1, 6))
def test_qmetric_endpoints(u):
    assert satisfies(u, QMetric(1)) == satisfies(u, Metric())
    assert satisfies(u, QMetric(INF)) == satisfies(u, Ultrametric())


@given(weights(1, 6))
def test_predicate_chain(u):
    if satisfies(u, Ultrametric()):
        assert satisfies(u, QMetric(3)) and satisfies(u, Metric()) and satisfies(u, RhoInframetric(1))
    if satisfies(u, Metric()):
        assert satisfies(u, RhoInframetric(2)) and satisfies(u, RhoRelaxed(1))


@given(weights(1, 6))
def test_float_mode_agrees_with_exact(u):
    for kind in (Metric(), Ultrametric(), ASpace(), RhoInframetric(Fraction(3, 2)), QMetric(2)):
        assert satisfies(u, kind) == satisfies(u.as_float(), kind)
