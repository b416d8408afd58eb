from fractions import Fraction

import pytest
from hypothesis import given

from funclust.generators import random_sieve
from funclust.io import ParseError, emit_dot, emit_matrix, emit_sieve, parse_matrix, parse_sieve
from funclust.sieves import rips_sieve, sl_sieve
from funclust.tight_span import tight_span_vertices
from funclust.weights import ValidationError, from_pairs, validate

from conftest import float_weights, weights

TRI = from_pairs("abc", {("a", "b"): 1, ("b", "c"): 2, ("a", "c"): 3})


def test_csv_with_header():
    u = parse_matrix("a,b,c\n0,1,3\n1,0,2\n3,2,0\n")
    assert u == TRI and u.exact


def test_csv_without_header_and_with_row_labels():
    u = parse_matrix("0,1\n1,0\n")
    assert u.points == (1, 2)
    v = parse_matrix(",a,b\na,0,0.5\nb,0.5,0\n")
    assert v["a", "b"] == Fraction(1, 2)


def test_csv_decimals_are_exact():
    u = parse_matrix("x,y\n0,0.1\n0.1,0\n")
    assert u["x", "y"] == Fraction(1, 10)
    assert not parse_matrix("x,y\n0,0.1\n0.1,0\n", exact=False).exact


def test_json_document():
    u = parse_matrix('{"labels": ["a", "b", "c"], "matrix": [[0, 1, 3], [1, 0, 2], [3, 2, 0]]}')
    assert u == TRI
    v = parse_matrix('{"matrix": [[0, 1.5], [1.5, 0]]}')
    assert v[1, 2] == Fraction(3, 2)


def test_csv_ragged_row_position():
    with pytest.raises(ParseError) as e:
        parse_matrix("0,1,3\n1,0\n3,2,0\n")
    assert e.value.line == 2


def test_csv_bad_cell_position():
    with pytest.raises(ParseError) as e:
        parse_matrix("a,b\n0,x\n1,0\n")
    assert (e.value.line, e.value.column) == (2, 2)


def test_json_syntax_error_position():
    with pytest.raises(ParseError) as e:
        parse_matrix('{"matrix": [[0, 1],\n [1, 0]')
    assert e.value.line == 2
    with pytest.raises(ParseError):
        parse_matrix('{"rows": []}')
    with pytest.raises(ParseError):
        parse_matrix('{"matrix": [[0, 1], [1]]}')


def test_validation_errors_forwarded():
    with pytest.raises(ValidationError):
        parse_matrix("0,1\n2,0\n")


@given(weights(1, 6))
def test_matrix_round_trip(u):
    for fmt in ("csv", "json"):
        assert parse_matrix(emit_matrix(u, fmt)) == u


@given(float_weights(1, 5))
def test_float_matrix_round_trip(u):
    v = parse_matrix(emit_matrix(u, "json"), exact=False)
    assert v.points == u.points and (abs(v.w - u.w) <= 1e-12).all()


def test_sieve_round_trip(rng):
    for _ in range(50):
        s = random_sieve(rng, int(rng.integers(1, 6)))
        assert parse_sieve(emit_sieve(s)) == s
    assert parse_sieve(emit_sieve(rips_sieve(TRI))) == rips_sieve(TRI)


def test_sieve_document_is_canonical():
    a = emit_sieve(rips_sieve(TRI))
    assert a == emit_sieve(rips_sieve(validate(TRI.w, TRI.points)))
    assert '"breakpoints"' in a and '"points"' in a


def test_malformed_sieve_document():
    with pytest.raises(ParseError):
        parse_sieve('{"points": ["a"]}')


def _edges(dot):
    return [ln.strip().rstrip(";").split(" -> ") for ln in dot.splitlines() if "->" in ln]


def test_sl_dot_is_a_tree():
    dot = emit_dot(sl_sieve(TRI))
    assert dot.startswith("digraph dendrogram")
    edges = _edges(dot)
    children = [c for c, _ in edges]
    # every node has at most one parent, and nodes = edges + 1
    assert len(children) == len(set(children))
    nodes = {n for e in edges for n in e}
    assert len(nodes) == len(edges) + 1


def test_rips_dot_shows_overlap():
    dot = emit_dot(rips_sieve(TRI))
    assert dot.startswith("digraph sieve")
    level2 = next(ln for ln in dot.splitlines() if 't=2' in ln)
    assert '"{a,b}"' in level2 and '"{b,c}"' in level2


def test_tight_span_dot():
    d = from_pairs("abc", {("a", "b"): 3, ("b", "c"): 5, ("a", "c"): 4})
    dot = emit_dot(tight_span_vertices(d))
    assert dot.startswith("graph tightspan")
    assert dot.count(" -- ") == 3 and '"(1, 2, 3)"' in dot
    with pytest.raises(TypeError):
        emit_dot(d)
