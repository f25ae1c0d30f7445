"""
permgroup.py — Finite permutation groups F ≤ Sym({1..d}).

Implements:
  - Perm values (1-based images) with cycle-notation parsing and printing
  - PermGroup closure by full enumeration (sympy's Dimino generation)
  - Orbits, point stabilizers, transporters
  - The predicates the universal-group hypotheses need: transitive,
    2-transitive, primitive, generated by point stabilizers, cyclic of
    prime order

Elements are kept sorted lexicographically on their image sequences, so
every "first witness" answer is deterministic.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from sympy import isprime
from sympy.combinatorics import Permutation, PermutationGroup

from config import GROUP_CATALOG, MAX_DEGREE, MIN_DEGREE
from errors import ConfigError, DegreeError, ParseError, PreconditionError

logger = logging.getLogger(__name__)


# ─── Permutations ────────────────────────────────────────────────────────────

@dataclass(frozen=True, order=True)
class Perm:
    """A permutation of the colors {1..d}; images[i] = π(i + 1)."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise DegreeError(f"not a bijection of {{1..{len(self.images)}}}: {self.images}")

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(tuple(range(1, degree + 1)))

    @classmethod
    def from_mapping(cls, degree: int, mapping: dict[int, int]) -> "Perm":
        """Permutation moving exactly the points in mapping (rest fixed)."""
        return cls(tuple(mapping.get(c, c) for c in range(1, degree + 1)))

    @classmethod
    def parse(cls, text: str, degree: int) -> "Perm":
        """
        Parse cycle notation such as "(2 5)(3 4)" into a Perm of the given degree.
        "()" and the empty string are the identity. Cycles must be disjoint.

        Raises ParseError carrying the column of the offending character.
        """
        mapping: dict[int, int] = {}
        seen: set[int] = set()
        i = 0
        n = len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch != "(":
                raise ParseError(f"expected '(' but found {ch!r}", column=i + 1)
            i += 1
            cycle: list[int] = []
            while True:
                while i < n and (text[i].isspace() or text[i] == ","):
                    i += 1
                if i >= n:
                    raise ParseError("unterminated cycle", column=n + 1)
                if text[i] == ")":
                    i += 1
                    break
                start = i
                while i < n and text[i].isdigit():
                    i += 1
                if start == i:
                    raise ParseError(f"unexpected character {text[i]!r} in cycle", column=i + 1)
                point = int(text[start:i])
                if not 1 <= point <= degree:
                    raise ParseError(f"point {point} outside 1..{degree}", column=start + 1)
                if point in seen:
                    raise ParseError(f"point {point} repeated", column=start + 1)
                seen.add(point)
                cycle.append(point)
            for k, point in enumerate(cycle):
                mapping[point] = cycle[(k + 1) % len(cycle)]
        return cls.from_mapping(degree, mapping)

    @property
    def degree(self) -> int:
        return len(self.images)

    @property
    def is_identity(self) -> bool:
        return all(img == c for c, img in enumerate(self.images, start=1))

    def __call__(self, c: int) -> int:
        return self.images[c - 1]

    def __mul__(self, other: "Perm") -> "Perm":
        """Composition self ∘ other (apply other first)."""
        if other.degree != self.degree:
            raise DegreeError(f"degree mismatch: {self.degree} vs {other.degree}")
        return Perm(tuple(self.images[c - 1] for c in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for c, img in enumerate(self.images, start=1):
            inv[img - 1] = c
        return Perm(tuple(inv))

    def preimage(self, c: int) -> int:
        return self.images.index(c) + 1

    def cycles(self) -> str:
        """Cycle notation, smallest point first in each cycle; identity is "()"."""
        done: set[int] = set()
        parts = []
        for start in range(1, self.degree + 1):
            if start in done or self(start) == start:
                continue
            cycle = [start]
            done.add(start)
            nxt = self(start)
            while nxt != start:
                cycle.append(nxt)
                done.add(nxt)
                nxt = self(nxt)
            parts.append("(" + " ".join(str(p) for p in cycle) + ")")
        return "".join(parts) or "()"

    def to_sympy(self) -> Permutation:
        return Permutation([img - 1 for img in self.images])

    def __str__(self) -> str:
        return self.cycles()


def parse_generators(text: str, degree: int) -> list[Perm]:
    """Parse ';'-separated cycle strings, e.g. "(1 2)(3 4);(1 2 3)"."""
    gens = []
    offset = 0
    for chunk in text.split(";"):
        if chunk.strip():
            try:
                gens.append(Perm.parse(chunk, degree))
            except ParseError as e:
                raise e.shifted(e.line, offset)
        offset += len(chunk) + 1
    return gens


# ─── Groups ──────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class PermGroup:
    """A finite permutation group with its full, sorted element list."""

    degree: int
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...]
    name: str = field(default="", compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def element_set(self) -> frozenset[Perm]:
        return frozenset(self.elements)

    @cached_property
    def sympy_group(self) -> PermutationGroup:
        gens = [g.to_sympy() for g in self.generators] or [Permutation(list(range(self.degree)))]
        return PermutationGroup(gens)

    def __contains__(self, perm: Perm) -> bool:
        return perm in self.element_set

    def label(self) -> str:
        return self.name or f"<{';'.join(g.cycles() for g in self.generators) or '()'}>"

    def __repr__(self) -> str:
        return f"PermGroup({self.label()}, d={self.degree}, order={self.order})"


def _check_color(G: PermGroup, c: int) -> None:
    if not 1 <= c <= G.degree:
        raise DegreeError(f"color {c} outside 1..{G.degree}")


def group_from_generators(d: int, gens: Sequence[Perm], name: str = "") -> PermGroup:
    """
    Close gens under composition and inverse.

    Returns:
        PermGroup whose elements are sorted lexicographically on images.
    """
    if not MIN_DEGREE <= d <= MAX_DEGREE:
        raise DegreeError(f"degree {d} outside {MIN_DEGREE}..{MAX_DEGREE}")
    for g in gens:
        if g.degree != d:
            raise DegreeError(f"generator {g.cycles()} has degree {g.degree}, expected {d}")

    sym_gens = [g.to_sympy() for g in gens] or [Permutation(list(range(d)))]
    closure = PermutationGroup(sym_gens).generate(method="dimino", af=True)
    elements = sorted(Perm(tuple(x + 1 for x in af)) for af in closure)
    logger.debug(f"closed {len(gens)} generators of degree {d} into {len(elements)} elements")
    return PermGroup(d, tuple(gens), tuple(elements), name)


def named_group(name: str) -> PermGroup:
    """Look a group up in the catalog (Sym3, D5, C4, ...)."""
    if name not in GROUP_CATALOG:
        raise ConfigError(f"unknown group {name!r}; known: {', '.join(sorted(GROUP_CATALOG))}")
    degree, gens = GROUP_CATALOG[name]
    return group_from_generators(degree, parse_generators(gens, degree), name)


def symmetric_group(d: int) -> PermGroup:
    gens = [Perm.from_mapping(d, {1: 2, 2: 1}), Perm(tuple(list(range(2, d + 1)) + [1]))]
    return group_from_generators(d, gens, f"Sym{d}")


def cyclic_group(d: int) -> PermGroup:
    return group_from_generators(d, [Perm(tuple(list(range(2, d + 1)) + [1]))], f"C{d}")


# ─── Orbits & Stabilizers ────────────────────────────────────────────────────

def orbits(G: PermGroup, domain: Iterable[int]) -> list[list[int]]:
    """Partition domain into G-orbits (intersected with domain), sorted."""
    domain = set(domain)
    for c in domain:
        _check_color(G, c)
    if not domain:
        return []
    parts = []
    for orbit in G.sympy_group.orbits():
        part = sorted(p + 1 for p in orbit if p + 1 in domain)
        if part:
            parts.append(part)
    return sorted(parts)


def point_stabilizer(G: PermGroup, c: int) -> PermGroup:
    """The subgroup {π ∈ G : π(c) = c}."""
    _check_color(G, c)
    fixing = tuple(p for p in G.elements if p(c) == c)
    gens = tuple(p for p in fixing if not p.is_identity)
    return PermGroup(G.degree, gens, fixing, f"{G.name}_{c}" if G.name else "")


def transporter_exists(
    G: PermGroup, source: tuple[int, int], target: tuple[int, int]
) -> Optional[Perm]:
    """
    First π ∈ G (canonical order) with π(a) = c and π(b) = e, else None.
    """
    (a, b), (c, e) = source, target
    for x in (a, b, c, e):
        _check_color(G, x)
    if a == b or c == e:
        raise PreconditionError(f"transporter needs distinct pairs, got {source} -> {target}")
    for p in G.elements:
        if p(a) == c and p(b) == e:
            return p
    return None


def transporters(G: PermGroup, source: tuple[int, int], target: tuple[int, int]) -> list[Perm]:
    """All π ∈ G sending the ordered pair source to target, canonical order."""
    (a, b), (c, e) = source, target
    return [p for p in G.elements if p(a) == c and p(b) == e]


# ─── Predicates ──────────────────────────────────────────────────────────────

def is_transitive(G: PermGroup) -> bool:
    return len(orbits(G, range(1, G.degree + 1))) == 1


def is_2transitive(G: PermGroup) -> bool:
    if not is_transitive(G):
        return False
    rest = range(2, G.degree + 1)
    return len(orbits(point_stabilizer(G, 1), rest)) <= 1


def block_system(G: PermGroup) -> Optional[list[list[int]]]:
    """
    First nontrivial block system of a transitive G, seeding the
    minimal-block refinement with {1, x} for x = 2..d; None when G is
    primitive (or intransitive, where blocks are not defined).
    """
    if not is_transitive(G):
        return None
    for x in range(2, G.degree + 1):
        parents = G.sympy_group.minimal_block([0, x - 1])
        if not parents:
            continue

        def root(i: int) -> int:
            while parents[i] != i:
                i = parents[i]
            return i

        classes: dict[int, list[int]] = {}
        for i in range(G.degree):
            classes.setdefault(root(i), []).append(i + 1)
        if 1 < len(classes) < G.degree:
            return sorted(sorted(block) for block in classes.values())
    return None


def is_primitive(G: PermGroup) -> bool:
    return is_transitive(G) and block_system(G) is None


def is_generated_by_point_stabilizers(G: PermGroup) -> bool:
    gens = {p for c in range(1, G.degree + 1) for p in point_stabilizer(G, c).elements}
    sub = group_from_generators(G.degree, sorted(p for p in gens if not p.is_identity))
    return sub.order == G.order


def is_cyclic_of_prime_order(G: PermGroup) -> bool:
    # a group of prime order is cyclic
    return isprime(G.order)


def satisfies_plus_hypotheses(G: PermGroup) -> bool:
    """Transitive and generated by point stabilizers (U(F)+ = U(F) ∩ Aut(T)+)."""
    return is_transitive(G) and is_generated_by_point_stabilizers(G)


def describe_group(G: PermGroup) -> dict[str, object]:
    """Predicate report used by `arboru.py analyze-group`."""
    blocks = block_system(G)
    return {
        "order": G.order,
        "transitive": is_transitive(G),
        "2transitive": is_2transitive(G),
        "primitive": is_primitive(G),
        "gen-by-stabs": is_generated_by_point_stabilizers(G),
        "cyclic-prime": is_cyclic_of_prime_order(G),
        "blocks": blocks,
    }
