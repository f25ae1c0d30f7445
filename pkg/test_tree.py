"""Tests for tree.py: words, spheres, edges, half-trees, ends and literals."""

import pytest
from hypothesis import given, strategies as st

from errors import DegreeError, ParseError, PreconditionError
from tree import (
    ROOT,
    EdgeAddr,
    End,
    HalfTree,
    ball,
    dist,
    edge_distance,
    format_word,
    geodesic,
    half_tree_contains,
    hyp_ends_ray,
    is_reduced,
    multiply,
    parse_edge,
    parse_word,
    ray_vertex,
    reduce_append,
    sphere,
    sphere_size,
    validate_word,
)

words = st.lists(st.integers(1, 4), max_size=7).map(lambda w: multiply(ROOT, w))


# ─── Words ───────────────────────────────────────────────────────────────────

def test_reduce_append():
    assert reduce_append((1, 2), 2) == (1,)
    assert reduce_append((1,), 2) == (1, 2)
    assert reduce_append(ROOT, 3) == (3,)


def test_multiply_cancels():
    assert multiply((1, 2, 3), (3, 2)) == (1,)
    assert multiply((1, 2), (2, 1)) == ROOT


def test_validate_word():
    assert validate_word([1, 2, 1], 3) == (1, 2, 1)
    with pytest.raises(PreconditionError):
        validate_word((1, 1), 3)
    with pytest.raises(DegreeError):
        validate_word((4,), 3)


def test_distances_and_geodesics():
    assert dist((1, 2), (1, 3)) == 2
    assert dist(ROOT, (1, 2, 3)) == 3
    assert geodesic((1, 2), (1, 3)) == [(1, 2), (1,), (1, 3)]
    assert geodesic(ROOT, ROOT) == [ROOT]


@given(u=words, v=words)
def test_geodesic_length_is_distance(u, v):
    path = geodesic(u, v)
    assert len(path) - 1 == dist(u, v)
    assert all(dist(path[i], path[i + 1]) == 1 for i in range(len(path) - 1))


# ─── Spheres & balls ─────────────────────────────────────────────────────────

def test_sphere_order_and_size():
    assert list(sphere(2, 3)) == [(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)]
    for d in (3, 4, 5):
        for n in range(5):
            got = list(sphere(n, d))
            assert len(got) == sphere_size(n, d)
            assert got == sorted(got)
            assert all(is_reduced(w) and len(w) == n for w in got)


def test_negative_sphere():
    with pytest.raises(PreconditionError):
        list(sphere(-1, 3))


def test_ball_is_shortlex_around_center():
    assert list(ball(ROOT, 1, 3)) == [ROOT, (1,), (2,), (3,)]
    assert list(ball((1,), 1, 3)) == [(1,), ROOT, (1, 2), (1, 3)]
    around = list(ball((2, 1), 2, 4))
    assert len(around) == len(set(around)) == 1 + 4 + 12
    assert all(dist(v, (2, 1)) <= 2 for v in around)


# ─── Edges & half-trees ──────────────────────────────────────────────────────

def test_edge_is_canonical():
    assert EdgeAddr((1, 2), 2) == EdgeAddr((1,), 2)
    assert EdgeAddr.between((1, 2), (1,)) == EdgeAddr((1,), 2)
    assert str(EdgeAddr((1,), 2)) == "1:2"
    assert str(EdgeAddr(ROOT, 1)) == "-:1"
    assert EdgeAddr(ROOT, 1).endpoints() == (ROOT, (1,))


def test_between_needs_adjacent_vertices():
    with pytest.raises(PreconditionError):
        EdgeAddr.between(ROOT, (1, 2))


def test_edge_distance():
    assert edge_distance(EdgeAddr(ROOT, 1), EdgeAddr((1,), 2)) == 0
    assert edge_distance(EdgeAddr(ROOT, 1), EdgeAddr((2,), 3)) == 1


def test_half_trees_partition_the_tree():
    e = EdgeAddr(ROOT, 1)
    h = HalfTree(e, (1,))
    assert h.contains((1, 2)) and not h.contains((2,))
    assert h.opposite().contains((2,)) and h.opposite().contains(ROOT)
    for v in ball(ROOT, 4, 3):
        assert h.contains(v) != h.opposite().contains(v)


def test_half_tree_contains_matches_the_nearer_endpoint():
    e = EdgeAddr((1, 2), 3)
    inner_side = HalfTree(e, e.inner)
    for v in ball(ROOT, 4, 3):
        nearer_inner = dist(v, e.inner) < dist(v, e.outer)
        assert half_tree_contains(inner_side, v) == nearer_inner
    assert half_tree_contains(inner_side, ROOT)
    assert not half_tree_contains(inner_side, (1, 2, 3, 1))


def test_half_tree_side_must_be_an_endpoint():
    with pytest.raises(PreconditionError):
        HalfTree(EdgeAddr(ROOT, 1), (2,))


# ─── Ends ────────────────────────────────────────────────────────────────────

def test_end_canonical_form():
    assert End((1, 2), (1, 2)) == End(ROOT, (1, 2))
    assert End(ROOT, (1, 2, 1, 2)).period == (1, 2)
    assert End((1,), (2, 1)) == End(ROOT, (1, 2))
    assert End((3,), (1, 2)).render() == "3(12)^inf"


def test_end_must_be_reduced():
    with pytest.raises(PreconditionError):
        End(ROOT, (1, 1))
    with pytest.raises(PreconditionError):
        End((2,), ())


def test_ray_vertex():
    xi = End(ROOT, (1, 2))
    assert ray_vertex(xi, 0) == ROOT
    assert ray_vertex(xi, 3) == (1, 2, 1)
    assert ray_vertex(End((3,), (1, 2)), 2) == (3, 1)


def test_hyp_ends_ray_prefix():
    assert hyp_ends_ray(14) == (1, 2, 1, 3, 1, 2, 1, 2, 1, 3, 1, 2, 1, 2)
    assert is_reduced(hyp_ends_ray(300))
    with pytest.raises(DegreeError):
        hyp_ends_ray(5, d=2)


# ─── Literals ────────────────────────────────────────────────────────────────

def test_parse_word_spellings():
    assert parse_word("1,2,1,3", 3) == (1, 2, 1, 3)
    assert parse_word("1213", 3) == (1, 2, 1, 3)
    assert parse_word("-", 3) == ROOT
    assert parse_word("  ", 3) == ROOT
    assert parse_word("10,1", 12) == (10, 1)


@pytest.mark.parametrize(
    "text, message, column",
    [
        ("11", "word not reduced", 2),
        ("14", "outside", 2),
        ("1,a", "bad color", 3),
        ("1x", "bad color", 2),
    ],
)
def test_parse_word_errors(text, message, column):
    with pytest.raises(ParseError) as err:
        parse_word(text, 3)
    assert message in err.value.message
    assert err.value.column == column


def test_format_word():
    assert format_word(ROOT) == "-"
    assert format_word((1, 2)) == "12"
    assert format_word((10, 1)) == "10,1"


@given(w=words)
def test_word_literal_round_trip(w):
    assert parse_word(format_word(w), 4) == w


def test_parse_edge():
    assert parse_edge("12:3", 3) == EdgeAddr((1, 2), 3)
    assert parse_edge("-:1", 3) == EdgeAddr(ROOT, 1)
    assert parse_edge(":1", 3) == EdgeAddr(ROOT, 1)
    with pytest.raises(ParseError):
        parse_edge("12", 3)
    with pytest.raises(ParseError):
        parse_edge("1:7", 3)
