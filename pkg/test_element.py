"""Tests for element.py: portraits, the group law, membership and samplers."""

import pytest
from hypothesis import given, strategies as st

from errors import DegreeError, HypothesisError, PreconditionError
from element import (
    LineElement,
    Portrait,
    ball_images,
    compose,
    conjugate,
    edge_transport,
    end_image,
    fixes_ball,
    identity,
    inverse,
    is_in_UF,
    is_in_UF_plus,
    left_translation,
    portrait_from_ball_map,
    power,
    random_edge_fixator,
    random_half_tree_fixator,
    random_portrait,
    random_ray_fixator,
    random_vertex_stabilizer_element,
    support_hull,
)
from permgroup import Perm, cyclic_group, named_group, point_stabilizer
from tree import ROOT, EdgeAddr, End, HalfTree, ball, dist, multiply, ray_vertex

seeds = st.integers(0, 2**32 - 1)
group_names = st.sampled_from(["Sym3", "Sym4", "D5", "A5"])


def rot(cycles: str, degree: int = 3) -> Portrait:
    return Portrait(degree, ROOT, {ROOT: Perm.parse(cycles, degree)})


# ─── Portrait values ─────────────────────────────────────────────────────────

def test_identity_entries_are_dropped():
    g = Portrait(3, ROOT, {ROOT: Perm.identity(3), (1,): Perm.identity(3)})
    assert g.locals == {}
    assert g == identity(3)
    assert g.is_identity


def test_relative_local_must_fix_incoming_color():
    with pytest.raises(PreconditionError):
        Portrait(3, ROOT, {(1,): Perm.parse("(1 2)", 3)})


def test_portrait_degree_checks():
    with pytest.raises(DegreeError):
        Portrait(3, ROOT, {ROOT: Perm.parse("(1 2)", 4)})
    with pytest.raises(DegreeError):
        Portrait(13)
    with pytest.raises(DegreeError):
        compose(identity(3), identity(4))


def test_support_hull():
    assert support_hull(identity(3)) == 0
    assert support_hull(left_translation((1, 2), 3)) == 2
    assert support_hull(Portrait(3, ROOT, {(2,): Perm.parse("(1 3)", 3)})) == 1


# ─── apply ───────────────────────────────────────────────────────────────────

def test_left_translation_apply():
    g = left_translation((1, 2), 3)
    assert g.apply(ROOT) == (1, 2)
    assert g.apply((2,)) == (1,)
    assert g.apply((1,)) == (1, 2, 1)


def test_rotation_apply():
    g = rot("(1 2 3)")
    assert g.apply((1,)) == (2,)
    assert g.apply((1, 2)) == (2, 3)


def test_apply_inverse_walks_back():
    g = compose(left_translation((3, 1), 3), rot("(1 2)"))
    for v in ball(ROOT, 4, 3):
        assert g.apply_inverse(g.apply(v)) == v


# ─── Group law ───────────────────────────────────────────────────────────────

def test_compose_examples():
    assert compose(left_translation((1, 2), 3), left_translation((2, 1), 3)).is_identity
    g = left_translation((1, 3), 3)
    assert compose(identity(3), g) == g
    assert compose(rot("(1 2 3)"), rot("(1 2 3)")) == rot("(1 3 2)")


def test_inverse_examples():
    assert inverse(identity(3)) == identity(3)
    assert inverse(left_translation((1, 2), 3)) == left_translation((2, 1), 3)
    assert inverse(rot("(1 2)")) == rot("(1 2)")


def test_power():
    a = left_translation((1, 2), 3)
    assert power(a, 3) == left_translation((1, 2, 1, 2, 1, 2), 3)
    assert power(a, -1) == left_translation((2, 1), 3)
    assert power(a, 0) == identity(3)


def test_free_product_law():
    words = list(ball(ROOT, 3, 3))
    for w in words:
        for u in words:
            assert compose(left_translation(w, 3), left_translation(u, 3)) == left_translation(multiply(w, u), 3)


@given(name=group_names, seed=seeds)
def test_group_law_on_random_triples(name, seed):
    F = named_group(name)
    f, g, h = (random_portrait(F, 3, seed + k) for k in range(3))
    assert compose(f, compose(g, h)) == compose(compose(f, g), h)
    assert compose(g, inverse(g)).is_identity
    assert compose(inverse(g), g).is_identity
    gh = compose(g, h)
    for v, img in ball_images(gh, 5).items():
        assert g.apply(h.apply(v)) == img


@given(name=group_names, seed=seeds)
def test_apply_is_an_isometry(name, seed):
    F = named_group(name)
    g = random_portrait(F, 4, seed)
    verts = list(ball(ROOT, 4, F.degree))
    images = ball_images(g, 4)
    for u in verts[:40]:
        for v in verts[::7]:
            assert dist(images[u], images[v]) == dist(u, v)
    assert len(set(images.values())) == len(images)


@given(name=group_names, seed=seeds)
def test_membership_is_closed(name, seed):
    F = named_group(name)
    g, h = random_portrait(F, 3, seed), random_portrait(F, 3, seed + 1)
    assert is_in_UF(g, F) and is_in_UF(h, F)
    assert is_in_UF(compose(g, h), F)
    assert is_in_UF(inverse(g), F)


# ─── Membership ──────────────────────────────────────────────────────────────

def test_membership_examples(sym3, d5, c5):
    assert is_in_UF_plus(left_translation((1, 2), 5), d5)
    assert not is_in_UF_plus(rot("(2 3)", 5), d5)
    assert is_in_UF(left_translation((1,), 3), sym3)
    assert not is_in_UF_plus(left_translation((1,), 3), sym3)
    assert not is_in_UF(rot("(1 2)"), cyclic_group(3))


def test_plus_membership_needs_hypotheses(c5, c4):
    with pytest.raises(HypothesisError):
        is_in_UF_plus(left_translation((1, 2), 5), c5)
    assert is_in_UF_plus(left_translation((1, 2), 4), c4, require_hypotheses=False)


def test_membership_degree_mismatch(sym3):
    with pytest.raises(DegreeError):
        is_in_UF(identity(4), sym3)


# ─── Samplers ────────────────────────────────────────────────────────────────

def test_samplers_are_reproducible(sym4):
    assert random_portrait(sym4, 3, 11) == random_portrait(sym4, 3, 11)
    assert random_vertex_stabilizer_element(sym4, 3, 5) == random_vertex_stabilizer_element(sym4, 3, 5)


@given(name=group_names, seed=seeds)
def test_vertex_stabilizer_sampler(name, seed):
    F = named_group(name)
    g = random_vertex_stabilizer_element(F, 3, seed)
    assert g.apply(ROOT) == ROOT
    assert is_in_UF(g, F)
    assert g.hull <= 2


def test_half_tree_fixator_local_at_inner_endpoint(sym3):
    h = HalfTree(EdgeAddr(ROOT, 1), (1,))
    allowed = point_stabilizer(sym3, 1).element_set
    for seed in range(10):
        g, forced = random_half_tree_fixator(sym3, h, 3, seed)
        assert not forced
        assert g.local_action(ROOT) in allowed


@given(name=group_names, seed=seeds, depth=st.integers(1, 4))
def test_half_tree_fixator_fixes_its_half_tree(name, seed, depth):
    F = named_group(name)
    e = EdgeAddr((2,), 1)
    h = HalfTree(e, e.inner)
    g, _ = random_half_tree_fixator(F, h, depth, seed)
    assert is_in_UF(g, F)
    for v in ball(ROOT, 5, F.degree):
        if h.contains(v):
            assert g.apply(v) == v


def test_c5_half_tree_fixators_are_trivial(c5):
    h = HalfTree(EdgeAddr(ROOT, 3), ROOT)
    for seed in range(5):
        g, forced = random_half_tree_fixator(c5, h, 4, seed)
        assert forced
        assert g.is_identity


@given(name=group_names, seed=seeds)
def test_edge_fixator(name, seed):
    F = named_group(name)
    e = EdgeAddr((1, 2), 3)
    g = random_edge_fixator(F, e, 3, seed)
    assert g.apply(e.inner) == e.inner and g.apply(e.outer) == e.outer
    assert is_in_UF(g, F)


@given(name=group_names, seed=seeds, depth=st.integers(1, 5))
def test_ray_fixator(name, seed, depth):
    F = named_group(name)
    xi = End(ROOT, (1, 2))
    g = random_ray_fixator(F, xi, depth, seed)
    assert is_in_UF(g, F)
    for n in range(depth + 8):
        v = ray_vertex(xi, n)
        assert g.apply(v) == v
    assert end_image(g, xi) == xi


def test_sampler_depth_must_be_positive(sym3):
    with pytest.raises(PreconditionError):
        random_vertex_stabilizer_element(sym3, 0)


# ─── Ends, transports, density ───────────────────────────────────────────────

def test_end_image():
    assert end_image(left_translation((3,), 3), End(ROOT, (1, 2))) == End((3,), (1, 2))
    assert end_image(rot("(1 2)"), End(ROOT, (1, 3))) == End(ROOT, (2, 3))


def test_edge_transport(sym3, d5):
    e, f = EdgeAddr(ROOT, 1), EdgeAddr((2,), 3)
    g = edge_transport(e, f, sym3)
    assert (g.apply(e.inner), g.apply(e.outer)) == (f.inner, f.outer)
    assert is_in_UF(g, sym3)
    g = edge_transport(EdgeAddr((1, 2), 4), EdgeAddr((3,), 5), d5)
    assert is_in_UF(g, d5)


def test_fixes_ball():
    g = Portrait(3, ROOT, {(2, 1): Perm.parse("(2 3)", 3)})
    assert fixes_ball(g, ROOT, 2)
    assert not fixes_ball(g, ROOT, 3)
    assert fixes_ball(g, (1, 2, 1, 2, 1, 2), 4)


@given(name=group_names, seed=seeds)
def test_ball_isometry_extends_to_a_portrait(name, seed):
    F = named_group(name)
    g = random_portrait(F, 5, seed)
    images = ball_images(g, 3)
    ext = portrait_from_ball_map(F.degree, images, 3)
    assert all(ext.apply(v) == img for v, img in images.items())
    assert is_in_UF(ext, F)


def test_ball_map_must_be_an_isometry():
    images = ball_images(identity(3), 2)
    images[(1,)] = (1, 2)
    with pytest.raises(PreconditionError):
        portrait_from_ball_map(3, images, 2)


# ─── Line elements & conjugates ──────────────────────────────────────────────

def test_identity_line_element_is_a_left_translation():
    ident = Perm.identity(3)
    h = LineElement(3, (1, 2), (ident, ident), 2)
    lt = left_translation((1, 2), 3)
    assert h.root_image == (1, 2)
    assert all(h.apply(v) == lt.apply(v) for v in ball(ROOT, 4, 3))
    assert h.power(2).apply(ROOT) == (1, 2, 1, 2)
    assert h.attracting == End(ROOT, (1, 2))
    assert h.repelling == End(ROOT, (2, 1))


def test_line_element_validation():
    ident = Perm.identity(3)
    with pytest.raises(PreconditionError):
        LineElement(3, (1, 2, 1), (ident,) * 3, 2)
    with pytest.raises(PreconditionError):
        LineElement(3, (1, 2), (ident, ident), 3)
    with pytest.raises(PreconditionError):
        LineElement(3, (1, 2, 1, 3), (ident,) * 4, 2)


def test_anchored_line_element_reindexes_to_x0():
    ident = Perm.identity(3)
    h = LineElement.anchored(3, (1,), (2, 1), (ident, ident), 2)
    assert h == LineElement(3, (1, 2), (ident, ident), 2)


@given(name=group_names, seed=seeds)
def test_lazy_conjugate_matches_eager(name, seed):
    F = named_group(name)
    g, h = random_portrait(F, 3, seed), random_portrait(F, 3, seed + 1)
    lazy = conjugate(h, g)
    eager = compose(g, compose(h, inverse(g)))
    assert lazy.root_image == eager.root_image
    for v in ball(ROOT, 3, F.degree):
        assert lazy.apply(v) == eager.apply(v)
        assert lazy.local_action(v) == eager.local_action(v)
