"""Tests for permgroup.py: parsing, closure, transporters and the predicates."""

import pytest
from hypothesis import given, strategies as st
from sympy.utilities.iterables import multiset_partitions

from config import GROUP_CATALOG
from errors import ConfigError, DegreeError, ParseError, PreconditionError
from permgroup import (
    Perm,
    block_system,
    cyclic_group,
    describe_group,
    group_from_generators,
    is_2transitive,
    is_cyclic_of_prime_order,
    is_generated_by_point_stabilizers,
    is_primitive,
    is_transitive,
    named_group,
    orbits,
    parse_generators,
    point_stabilizer,
    symmetric_group,
    transporter_exists,
    transporters,
)


# ─── Perm ────────────────────────────────────────────────────────────────────

def test_parse_cycles():
    p = Perm.parse("(2 5)(3 4)", 5)
    assert p.images == (1, 5, 4, 3, 2)
    assert p.cycles() == "(2 5)(3 4)"


def test_identity_spellings():
    assert Perm.parse("()", 4).is_identity
    assert Perm.parse("", 4) == Perm.identity(4)
    assert Perm.identity(3).cycles() == "()"


def test_composition_applies_right_factor_first():
    p, q = Perm.parse("(1 2)", 3), Perm.parse("(2 3)", 3)
    assert (p * q).cycles() == "(1 2 3)"
    assert (p * q)(2) == p(q(2))


def test_inverse_and_preimage():
    p = Perm.parse("(1 2 3 4)", 4)
    assert p * p.inverse() == Perm.identity(4)
    assert p.preimage(2) == 1


def test_not_a_bijection():
    with pytest.raises(DegreeError):
        Perm((1, 1, 2))


@pytest.mark.parametrize(
    "text, column",
    [
        ("(1 2", 5),
        ("(1 7)", 4),
        ("(1 2)(2 3)", 7),
        ("x", 1),
        ("(1 a)", 4),
    ],
)
def test_parse_errors_carry_columns(text, column):
    with pytest.raises(ParseError) as err:
        Perm.parse(text, 5)
    assert err.value.column == column


def test_generator_error_column_is_relative_to_the_whole_string():
    with pytest.raises(ParseError) as err:
        parse_generators("(1 2);(1 9)", 3)
    assert err.value.column == 10


def test_parse_generators_skips_empty_chunks():
    gens = parse_generators("(1 2)(3 4);;(1 2 3)", 4)
    assert [g.cycles() for g in gens] == ["(1 2)(3 4)", "(1 2 3)"]


# ─── Closure ─────────────────────────────────────────────────────────────────

@pytest.mark.parametrize(
    "name, order",
    [("Sym3", 6), ("Sym4", 24), ("Sym5", 120), ("Sym6", 720), ("A4", 12), ("A5", 60), ("D5", 10), ("C4", 4), ("C5", 5)],
)
def test_catalog_orders(name, order):
    G = named_group(name)
    assert G.order == order
    assert list(G.elements) == sorted(G.elements)
    assert G.elements[0].is_identity


def test_unknown_catalog_name():
    with pytest.raises(ConfigError):
        named_group("PSL27")


def test_generator_degree_mismatch():
    with pytest.raises(DegreeError):
        group_from_generators(4, [Perm.parse("(1 2)", 3)])


def test_degree_out_of_range():
    with pytest.raises(DegreeError):
        group_from_generators(13, [])


def test_helpers_match_catalog():
    assert symmetric_group(4).element_set == named_group("Sym4").element_set
    assert cyclic_group(5).element_set == named_group("C5").element_set


# ─── Orbits, stabilizers, transporters ───────────────────────────────────────

def test_orbits_of_intransitive_group():
    G = group_from_generators(5, [Perm.parse("(1 2)(4 5)", 5)])
    assert orbits(G, range(1, 6)) == [[1, 2], [3], [4, 5]]
    assert orbits(G, [2, 3]) == [[2], [3]]
    assert orbits(G, []) == []


def test_orbit_domain_checked(d5):
    with pytest.raises(DegreeError):
        orbits(d5, [9])
    with pytest.raises(DegreeError):
        point_stabilizer(d5, 0)


def test_point_stabilizer(sym3, d5):
    assert point_stabilizer(sym3, 1).element_set == {Perm.identity(3), Perm.parse("(2 3)", 3)}
    assert point_stabilizer(d5, 1).element_set == {Perm.identity(5), Perm.parse("(2 5)(3 4)", 5)}


def test_transporters_in_d5(d5):
    assert transporter_exists(d5, (1, 2), (1, 3)) is None
    assert transporter_exists(d5, (1, 2), (1, 5)) == Perm.parse("(2 5)(3 4)", 5)
    assert transporters(d5, (1, 2), (1, 2)) == [Perm.identity(5)]


def test_transporter_needs_distinct_pairs(d5):
    with pytest.raises(PreconditionError):
        transporter_exists(d5, (1, 1), (1, 2))


@given(name=st.sampled_from(sorted(GROUP_CATALOG)), c=st.integers(1, 4))
def test_orbit_stabilizer(name, c):
    G = named_group(name)
    c = (c - 1) % G.degree + 1
    orbit = next(o for o in orbits(G, range(1, G.degree + 1)) if c in o)
    assert len(orbit) * point_stabilizer(G, c).order == G.order


@pytest.mark.parametrize("name", sorted(GROUP_CATALOG))
def test_2transitive_iff_every_transporter(name):
    G = named_group(name)
    pairs = [(x, y) for x in range(1, G.degree + 1) for y in range(1, G.degree + 1) if x != y]
    every = all(transporter_exists(G, s, t) is not None for s in pairs for t in pairs)
    assert every == is_2transitive(G)


# ─── Predicates ──────────────────────────────────────────────────────────────

@pytest.mark.parametrize(
    "name, transitive, two, primitive, gen_by_stabs, cyclic_prime",
    [
        ("Sym3", True, True, True, True, False),
        ("Sym5", True, True, True, True, False),
        ("A4", True, True, True, True, False),
        ("A5", True, True, True, True, False),
        ("D5", True, False, True, True, False),
        ("C4", True, False, False, False, False),
        ("C5", True, False, True, False, True),
    ],
)
def test_predicate_table(name, transitive, two, primitive, gen_by_stabs, cyclic_prime):
    G = named_group(name)
    assert is_transitive(G) is transitive
    assert is_2transitive(G) is two
    assert is_primitive(G) is primitive
    assert is_generated_by_point_stabilizers(G) is gen_by_stabs
    assert bool(is_cyclic_of_prime_order(G)) is cyclic_prime


def test_intransitive_group_predicates():
    G = group_from_generators(4, [Perm.parse("(1 2)", 4)])
    assert not is_transitive(G)
    assert not is_2transitive(G)
    assert not is_primitive(G)
    assert block_system(G) is None


def test_c4_blocks(c4):
    assert block_system(c4) == [[1, 3], [2, 4]]


def test_describe_d5(d5):
    report = describe_group(d5)
    assert report["order"] == 10
    assert report["transitive"] and report["primitive"] and report["gen-by-stabs"]
    assert not report["2transitive"] and not report["cyclic-prime"]
    assert report["blocks"] is None


def _brute_force_blocks(G):
    points = list(range(1, G.degree + 1))
    for part in multiset_partitions(points):
        if 1 < len(part) < G.degree:
            blocks = {frozenset(b) for b in part}
            if all(frozenset(g(x) for x in b) in blocks for g in G.generators for b in blocks):
                return part
    return None


@pytest.mark.parametrize("name", ["Sym4", "A4", "D5", "C4", "C5", "Sym5"])
def test_primitivity_against_brute_force(name):
    G = named_group(name)
    assert is_primitive(G) == (_brute_force_blocks(G) is None)
