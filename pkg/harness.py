"""
harness.py — Executable certificates and the verification suite.

Implements:
  - check_hyp_ends_obstruction: the missing transporter that keeps a
    hyperbolic element from fixing the aperiodic end built from
    (ab)^N (ac) (ab)^N blocks
  - check_second_trans / length2_translation_along: length-4 translation
    along the (1,2,1,3) line as the square of a length-2 translation
  - check_equal_stabilizer_line: two colors with equal point stabilizers
    give a length-2 translation in U(F)+ whose axis is the (j,k) line
  - check_bipartition, check_edge_transitivity
  - Per-module invariant batteries and run_suite

Every negative answer carries a finite witness. Checks never abort the
suite: an unexpected exception becomes a FAIL result.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from typing import Callable, Optional

import numpy as np
from sympy.utilities.iterables import multiset_partitions

from config import (
    APERIODIC_MAX_PERIOD,
    APERIODIC_PROBE_LENGTH,
    MIN_TREE_DEGREE,
    OBSTRUCTION_BLOCK,
)
from dynamics import (
    Contraction,
    attracting_end,
    brute_force_displacement,
    classify,
    contraction_by_conjugation,
    contraction_membership,
    fixes_end,
    generation_witness,
    in_end_stabilizer_zero,
    in_repelling_contraction,
    mautner_sequence,
    random_hyperbolic,
    render_class,
    tits_split,
    translation_mapping_edge,
)
from element import (
    Elliptic,
    Hyperbolic,
    Inversion,
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
    random_edge_fixator,
    random_half_tree_fixator,
    random_portrait,
    random_ray_fixator,
    random_word,
)
from errors import ConfigError, DegreeError, HypothesisError, PreconditionError
from formats import parse_portrait, print_portrait
from orbits import boundary_orbit_growth, orbit_representative, stabilizer_orbits_on_sphere, union_find_orbits
from permgroup import (
    Perm,
    PermGroup,
    is_2transitive,
    is_cyclic_of_prime_order,
    is_primitive,
    is_transitive,
    orbits,
    point_stabilizer,
    satisfies_plus_hypotheses,
    transporter_exists,
)
from reports import CheckResult, failed, passed
from suite_config import GroupSpec, SuiteConfiguration
from tree import (
    ROOT,
    EdgeAddr,
    End,
    HalfTree,
    Word,
    ball,
    dist,
    format_word,
    geodesic,
    half_tree_contains,
    hyp_ends_ray,
    multiply,
    ray_vertex,
    sphere,
    sphere_size,
)

logger = logging.getLogger(__name__)

Pair = tuple[int, int]

FREE_PRODUCT_LENGTH = 3
ISOMETRY_PAIRS = 64
PARITY_BALL_RADIUS = 2
ORBIT_ORACLE_MAX_DEGREE = 5
TRANSPORTER_SCAN_MAX_DEGREE = 6
BLOCK_SCAN_MAX_DEGREE = 8


# ─── Hyperbolic Ends Obstruction ─────────────────────────────────────────────

@dataclass(frozen=True)
class ObstructionCertificate:
    """
    Colors (a; b, c) with no element of F carrying (a, b) to (a, c), and the
    block (ab)^N (ac) (ab)^N of the relabeled aperiodic ray. A translation of
    length 2N along the ray would carry the midpoint (colors a, c) onto a
    vertex with colors a, b, which needs one of the forced transporters.
    """

    a: int
    b: int
    c: int
    block: int
    offset: int
    pattern: Word
    midpoint: Word
    forced: tuple[tuple[Pair, Pair], ...]

    def render(self) -> str:
        moves = " ".join(f"({s[0]},{s[1]})->({t[0]},{t[1]})" for s, t in self.forced)
        return (
            f"a={self.a} b={self.b} c={self.c} N={self.block} "
            f"pattern={format_word(self.pattern)}@{self.offset} "
            f"midpoint={format_word(self.midpoint)} absent={moves}"
        )


def _missing_fixed_transporter(F: PermGroup) -> Optional[tuple[int, int, int]]:
    """First (a, b, c) in lexicographic order with (a, b) -> (a, c) not in F."""
    colors = range(1, F.degree + 1)
    for a, b, c in product(colors, colors, colors):
        if len({a, b, c}) == 3 and transporter_exists(F, (a, b), (a, c)) is None:
            return a, b, c
    return None


def _locate(pattern: Word, ray: Word) -> int:
    for k in range(len(ray) - len(pattern) + 1):
        if ray[k : k + len(pattern)] == pattern:
            return k
    return -1


def check_hyp_ends_obstruction(F: PermGroup, block: int = OBSTRUCTION_BLOCK) -> Optional[ObstructionCertificate]:
    """
    None when F is 2-transitive; otherwise the obstruction certificate.

    Raises:
        PreconditionError: F is not transitive.
        DegreeError: d < 3.
    """
    if not is_transitive(F):
        raise PreconditionError(f"{F.label()} is not transitive")
    if F.degree < MIN_TREE_DEGREE:
        raise DegreeError(f"the obstruction needs three colors; degree is {F.degree}")
    if is_2transitive(F):
        return None
    found = _missing_fixed_transporter(F)
    if found is None:
        raise RuntimeError(f"{F.label()} is not 2-transitive but every (a,b)->(a,c) transporter exists")
    a, b, c = found

    relabel = {1: a, 2: b, 3: c}
    pattern = (a, b) * block + (a, c) + (a, b) * block
    length = (block + 2) * (block + 3) + len(pattern) + 2 * block
    ray = tuple(relabel[x] for x in hyp_ends_ray(length, max(F.degree, MIN_TREE_DEGREE)))
    offset = _locate(pattern, ray)
    if offset < 0:
        raise RuntimeError(f"pattern {format_word(pattern)} not on the aperiodic ray")

    mid = offset + 2 * block + 1
    midpoint = ray[:mid]
    here = (ray[mid - 1], ray[mid])
    ahead = (ray[mid + 2 * block - 1], ray[mid + 2 * block])
    behind = (ray[mid - 2 * block - 1], ray[mid - 2 * block])
    forced = [(here, ahead), (behind, here)]
    for source, target in forced:
        if transporter_exists(F, source, target) is not None:
            raise RuntimeError(f"transporter {source}->{target} unexpectedly present in {F.label()}")
    return ObstructionCertificate(a, b, c, block, offset, pattern, midpoint, tuple(forced))


# ─── Length-2 Translations ───────────────────────────────────────────────────

SECOND_TRANS_LINE: Word = (1, 2, 1, 3)


@dataclass(frozen=True)
class SecondTransVerdict:
    positive: bool
    b: Optional[LineElement] = None
    missing: Optional[tuple[Pair, Pair]] = None
    note: str = ""

    def render(self) -> str:
        if self.positive:
            return f"positive b=len2 along ({format_word(SECOND_TRANS_LINE)}) b^2=h"
        if self.missing is not None:
            (s, t) = self.missing
            text = f"negative transporter ({s[0]},{s[1]})->({t[0]},{t[1]}) absent"
        else:
            text = "negative"
        return f"{text} ({self.note})" if self.note else text


def _line_transporters(period_colors: Word) -> list[tuple[Pair, Pair]]:
    """The shift-2 transporters (P[i-1], P[i]) -> (P[i+1], P[i+2])."""
    p = len(period_colors)
    return [
        (
            (period_colors[(i - 1) % p], period_colors[i]),
            (period_colors[(i + 1) % p], period_colors[(i + 2) % p]),
        )
        for i in range(p)
    ]


def length2_translation_along(period_colors: Word, F: PermGroup) -> Optional[LineElement]:
    """
    Translation of length 2 along the periodic line through x0 with the
    given period, using the first transporter of F at every axis vertex;
    None when one is missing.

    Raises:
        PreconditionError: the period is odd or not cyclically reduced.
    """
    colors = tuple(period_colors)
    if len(colors) % 2:
        raise PreconditionError(f"period {format_word(colors)} has odd length")
    if len(colors) < 2 or colors[0] == colors[-1] or any(x == y for x, y in zip(colors, colors[1:])):
        raise PreconditionError(f"period {format_word(colors)} is not cyclically reduced")
    perms = []
    for source, target in _line_transporters(colors):
        sigma = transporter_exists(F, source, target)
        if sigma is None:
            return None
        perms.append(sigma)
    return LineElement(F.degree, colors, tuple(perms), 2)


def _agree_on_axis(f: LineElement, g: LineElement, reach: int) -> bool:
    for i in range(-reach, reach + 1):
        v = f.axis_vertex(i)
        if f.apply(v) != g.apply(v):
            return False
    return True


def check_second_trans(F: PermGroup, strict: bool = True) -> SecondTransVerdict:
    """
    h = identity-local translation of length 4 along the (1,2,1,3) line. A
    positive verdict constructs b of length 2 on the same axis with b^2 = h
    on the axis; a negative one names the missing transporter.

    Raises:
        HypothesisError: strict and F fails the hypotheses.
        DegreeError: d < 3.
    """
    if F.degree < MIN_TREE_DEGREE:
        raise DegreeError(f"the (1,2,1,3) line needs degree >= 3, got {F.degree}")
    note = ""
    if not satisfies_plus_hypotheses(F):
        if strict:
            raise HypothesisError(f"{F.label()} is not transitive and generated by point stabilizers")
        note = "hypotheses fail; checked in U(F) ∩ Aut(T)+"

    d = F.degree
    p = len(SECOND_TRANS_LINE)
    h = LineElement(d, SECOND_TRANS_LINE, (Perm.identity(d),) * p, 4)
    b = length2_translation_along(SECOND_TRANS_LINE, F)
    if b is None:
        for k in range(1, p + 1):
            source, target = _line_transporters(SECOND_TRANS_LINE)[k % p]
            if transporter_exists(F, source, target) is None:
                return SecondTransVerdict(False, None, (source, target), note)
        return SecondTransVerdict(False, None, None, note)

    cls = classify(b)
    if not isinstance(cls, Hyperbolic) or cls.length != 2:
        return SecondTransVerdict(False, b, None, f"b classified as {render_class(cls)}")
    if not _agree_on_axis(b.power(2), h, 3 * p):
        return SecondTransVerdict(False, b, None, "b^2 differs from h on the axis")
    return SecondTransVerdict(True, b, None, note)


# ─── Equal Point Stabilizers ─────────────────────────────────────────────────

@dataclass(frozen=True)
class EqualStabilizerLine:
    pair: Pair
    h: Portrait
    verified: bool
    fixators_checked: int = 0
    issues: tuple[str, ...] = ()

    def render(self) -> str:
        j, k = self.pair
        text = f"pair=({j},{k}) h=lt({j}{k}) len=2 axis=({j}{k})^inf fixators={self.fixators_checked}"
        if self.issues:
            text += " issues=" + "; ".join(self.issues)
        return text


def _on_line(v: Word, pair: Pair) -> bool:
    return all(c in pair for c in v)


def check_equal_stabilizer_line(
    F: PermGroup, samples: int = 8, depth: int = 3, seed=None
) -> Optional[EqualStabilizerLine]:
    """
    First j < k with F_j = F_k (as element sets), with h = left_translation(jk)
    checked to lie in U(F) ∩ Aut(T)+, to have translation length 2 and axis
    the (j,k) line, and sampled fixators of the edge {x0, j} checked to
    stabilize that line.
    """
    d = F.degree
    stabs = {c: point_stabilizer(F, c).element_set for c in range(1, d + 1)}
    pair = next(((j, k) for j in range(1, d + 1) for k in range(j + 1, d + 1) if stabs[j] == stabs[k]), None)
    if pair is None:
        return None
    j, k = pair
    h = left_translation(pair, d)
    issues = []
    if not is_in_UF_plus(h, F, require_hypotheses=False):
        issues.append("h not in U(F) ∩ Aut(T)+")
    cls = classify(h)
    if not isinstance(cls, Hyperbolic) or cls.length != 2:
        issues.append(f"h is {render_class(cls)}")
    elif cls.attracting != End(ROOT, pair) or cls.repelling != End(ROOT, (k, j)):
        issues.append(f"axis ends {cls.attracting} / {cls.repelling}")

    rng = np.random.default_rng(seed)
    edge = EdgeAddr(ROOT, j)
    line = [multiply(ROOT, pair * (n // 2) + pair[: n % 2]) for n in range(2 * depth + 2)]
    line += [multiply(ROOT, (k, j) * (n // 2) + (k, j)[: n % 2]) for n in range(1, 2 * depth + 2)]
    for _ in range(samples):
        g = random_edge_fixator(F, edge, depth, rng)
        moved = next((v for v in line if not _on_line(g.apply(v), pair)), None)
        if moved is not None:
            issues.append(f"edge fixator {g!r} moves {format_word(moved)} off the line")
            break
    return EqualStabilizerLine(pair, h, not issues, samples, tuple(issues))


# ─── Bipartition & Edge Transitivity ─────────────────────────────────────────

def check_bipartition(F: PermGroup, radius: int, samples: int = 8, depth: int = 3, seed=None) -> list[str]:
    """
    Vertex types split B(x0, radius) by parity of length: a left translation
    by w shifts every vertex's type by len(w) mod 2, and sampled
    type-preserving elements keep every vertex's type. Returns the list of
    violations.
    """
    issues = []
    near = list(ball(ROOT, PARITY_BALL_RADIUS, F.degree))
    for w in ball(ROOT, radius, F.degree):
        lt = left_translation(w, F.degree)
        shifts = {(len(v) - len(lt.apply(v))) % 2 for v in near}
        if shifts != {len(w) % 2}:
            issues.append(f"translation by {format_word(w)} shifts vertex types by {sorted(shifts)}")
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        g = random_portrait(F, depth, rng)
        if len(g.root_image) % 2:
            g = compose(left_translation((1,), F.degree), g)
        images = ball_images(g, radius)
        odd = next((v for v, img in images.items() if (len(v) - len(img)) % 2), None)
        if odd is not None:
            issues.append(f"{g!r} changes the parity of {format_word(odd)}")
    return issues


def check_edge_transitivity(F: PermGroup, samples: int, depth: int = 3, seed=None) -> tuple[list[str], int]:
    """
    edge_transport carries sampled edges onto each other; when F satisfies
    the hypotheses, translation_mapping_edge carries odd-distance pairs by a
    hyperbolic in U(F)+. Returns (violations, pairs with no periodic line found).
    """
    if not is_transitive(F):
        raise PreconditionError(f"{F.label()} is not transitive")
    rng = np.random.default_rng(seed)
    d = F.degree
    issues: list[str] = []
    unresolved = 0
    plus = satisfies_plus_hypotheses(F)
    for _ in range(samples):
        e = EdgeAddr(random_word(d, int(rng.integers(depth)), rng), int(rng.integers(1, d + 1)))
        f = EdgeAddr(random_word(d, int(rng.integers(depth)), rng), int(rng.integers(1, d + 1)))
        g = edge_transport(e, f, F)
        if g is None or g.apply(e.inner) != f.inner or g.apply(e.outer) != f.outer or not is_in_UF(g, F):
            issues.append(f"edge_transport {e} -> {f} failed")
            continue
        gap = min(dist(u, v) for u in e.endpoints() for v in f.endpoints())
        if not plus or gap % 2 == 0:
            continue
        h = translation_mapping_edge(e, f, F)
        if h is None:
            if is_2transitive(F):
                issues.append(f"no translation {e} -> {f} for 2-transitive {F.label()}")
            unresolved += 1
            continue
        if {h.apply(e.inner), h.apply(e.outer)} != {f.inner, f.outer}:
            issues.append(f"translation does not carry {e} to {f}")
        cls = classify(h)
        if not isinstance(cls, Hyperbolic) or cls.length % 2 or not is_in_UF_plus(h, F):
            issues.append(f"translation {e} -> {f} is {render_class(cls)}")
    return issues, unresolved


# ─── Batteries ───────────────────────────────────────────────────────────────

@dataclass
class BatteryContext:
    """What a battery needs: the group, budgets already split per group, and randomness."""

    F: PermGroup
    config: SuiteConfiguration
    rng: np.random.Generator
    group_count: int = 1

    @property
    def name(self) -> str:
        return self.F.label()

    def budget(self, label: str) -> int:
        b = self.config.budgets
        return b.share(getattr(b, label), self.group_count)


def _invariant_blocks(F: PermGroup) -> Optional[list[list[int]]]:
    """Brute force: a nontrivial F-invariant partition of the colors, if any."""
    points = list(range(1, F.degree + 1))
    for part in multiset_partitions(points):
        if not 1 < len(part) < F.degree:
            continue
        blocks = {frozenset(b) for b in part}
        if all(frozenset(g(x) for x in b) in blocks for g in F.generators for b in blocks):
            return [sorted(b) for b in part]
    return None


def battery_permgroup(ctx: BatteryContext) -> list[CheckResult]:
    F, name = ctx.F, ctx.name
    d = F.degree
    out = []

    bad = [c for c in range(1, d + 1)
           if len(next(o for o in orbits(F, range(1, d + 1)) if c in o)) * point_stabilizer(F, c).order != F.order]
    out.append(passed("orbit-stabilizer", name, f"order={F.order}") if not bad
               else failed("orbit-stabilizer", name, f"fails at colors {bad}"))

    two = is_2transitive(F)
    if d <= TRANSPORTER_SCAN_MAX_DEGREE:
        pairs = [(x, y) for x in range(1, d + 1) for y in range(1, d + 1) if x != y]
        all_pairs = all(transporter_exists(F, s, t) is not None for s in pairs for t in pairs)
        out.append(
            passed("2trans-transporters", name, f"2transitive={two}") if all_pairs == two
            else failed("2trans-transporters", name, f"all transporters={all_pairs} 2transitive={two}")
        )

    prim = is_primitive(F)
    if d <= BLOCK_SCAN_MAX_DEGREE and is_transitive(F):
        blocks = _invariant_blocks(F)
        sym = F.sympy_group.is_primitive(randomized=False)
        ok = (blocks is None) == prim == sym
        out.append(
            passed("primitive-blocks", name, f"primitive={prim}" + (f" blocks={blocks}" if blocks else ""))
            if ok else failed("primitive-blocks", name, f"predicate={prim} brute={blocks} sympy={sym}")
        )

    chain = (not two or prim) and (not prim or is_transitive(F))
    out.append(passed("implication-chain", name) if chain
               else failed("implication-chain", name, f"2transitive={two} primitive={prim}"))
    return out


def _eventual_period(word: Word, max_period: int) -> Optional[int]:
    half = len(word) // 2
    for p in range(1, max_period + 1):
        if all(word[i] == word[i + p] for i in range(half, len(word) - p)):
            return p
    return None


def battery_tree(ctx: BatteryContext) -> list[CheckResult]:
    d, name = ctx.F.degree, ctx.name
    out = []

    sizes_ok = True
    for n in range(5):
        words = list(sphere(n, d))
        if len(words) != sphere_size(n, d) or words != sorted(words) or any(len(w) != n for w in words):
            sizes_ok = False
    out.append(passed("sphere-enumeration", name) if sizes_ok else failed("sphere-enumeration", name, "size/order mismatch"))

    rng = ctx.rng
    bad_split = None
    for _ in range(4):
        e = EdgeAddr(random_word(d, int(rng.integers(3)), rng), int(rng.integers(1, d + 1)))
        h = HalfTree(e, e.outer)
        for v in ball(ROOT, 4, d):
            nearer_outer = dist(v, e.outer) < dist(v, e.inner)
            if half_tree_contains(h, v) != nearer_outer or half_tree_contains(h.opposite(), v) == nearer_outer:
                bad_split = f"{format_word(v)} vs {e}"
                break
            u = e.outer if nearer_outer else e.inner
            if len(geodesic(v, u)) - 1 != dist(v, u):
                bad_split = f"geodesic {format_word(v)}..{format_word(u)}"
                break
    out.append(passed("half-tree-partition", name) if bad_split is None else failed("half-tree-partition", name, bad_split))

    if d >= MIN_TREE_DEGREE:
        ray = hyp_ends_ray(APERIODIC_PROBE_LENGTH, d)
        period = _eventual_period(ray, APERIODIC_MAX_PERIOD)
        out.append(
            passed("hyp-ends-ray-aperiodic", name, f"probe={APERIODIC_PROBE_LENGTH} periods<={APERIODIC_MAX_PERIOD}")
            if period is None else failed("hyp-ends-ray-aperiodic", name, f"period {period} on the probe")
        )
    return out


def _product(factors: list[Portrait], degree: int) -> Portrait:
    return reduce(compose, factors, identity(degree))


def _same_class(found: object, g: Portrait) -> bool:
    """A class computed some other way describes the same dynamics as classify(g)."""
    expected = classify(g)
    if type(found) is not type(expected):
        return False
    if isinstance(found, Elliptic):
        return g.apply(found.fixed) == found.fixed
    if isinstance(found, Inversion):
        return found.edge == expected.edge
    return (found.length, found.attracting, found.repelling) == (
        expected.length,
        expected.attracting,
        expected.repelling,
    )


def battery_element(ctx: BatteryContext) -> list[CheckResult]:
    F, name, rng = ctx.F, ctx.name, ctx.rng
    d = F.degree
    s = ctx.config.settings
    depth = ctx.config.budgets.depth
    out = []

    law_failures = []
    samples = ctx.budget("law")
    for i in range(samples):
        f, g, h = (random_portrait(F, depth, rng) for _ in range(3))
        e = identity(d)
        if compose(f, compose(g, h)) != compose(compose(f, g), h):
            law_failures.append(f"associativity #{i}")
        if compose(g, e) != g or compose(e, g) != g or not compose(g, inverse(g)).is_identity:
            law_failures.append(f"identity/inverse #{i}")
        gh = compose(g, h)
        h_images = ball_images(h, s.law_radius)
        gh_images = ball_images(gh, s.law_radius)
        if any(g.apply(h_images[v]) != img for v, img in gh_images.items()):
            law_failures.append(f"apply homomorphism #{i}")
        verts = list(h_images)
        pairs = [(verts[a], verts[b]) for a, b in rng.integers(len(verts), size=(ISOMETRY_PAIRS, 2))]
        far = s.law_radius
        pairs.append((tuple((1, 2)[k % 2] for k in range(far)), tuple((2, 1)[k % 2] for k in range(far))))
        if any(dist(g.apply(u), g.apply(v)) != dist(u, v) for u, v in pairs):
            law_failures.append(f"isometry #{i}")
        if any(g.apply_inverse(g.apply(v)) != v for v in list(h_images)[:64]):
            law_failures.append(f"apply_inverse #{i}")
        if not (is_in_UF(gh, F) and is_in_UF(inverse(g), F)):
            law_failures.append(f"closure #{i}")
        if law_failures:
            break
    out.append(
        passed("group-law", name, f"triples={samples} ball={s.law_radius}") if not law_failures
        else failed("group-law", name, law_failures[0])
    )

    words = list(ball(ROOT, FREE_PRODUCT_LENGTH, d))
    bad_law = next(
        (
            (w, u)
            for w in words
            for u in words
            if compose(left_translation(w, d), left_translation(u, d)) != left_translation(multiply(w, u), d)
        ),
        None,
    )
    out.append(
        passed("free-product-law", name, f"words<={FREE_PRODUCT_LENGTH} pairs={len(words) ** 2}") if bad_law is None
        else failed("free-product-law", name, f"lt({format_word(bad_law[0])})lt({format_word(bad_law[1])})")
    )

    density_bad = None
    for i in range(max(1, samples // 4)):
        g = random_portrait(F, s.density_radius + 2, rng)
        images = ball_images(g, s.density_radius)
        ext = portrait_from_ball_map(d, images, s.density_radius)
        if any(ext.apply(v) != img for v, img in images.items()) or not is_in_UF(ext, F):
            density_bad = f"sample #{i}"
            break
        if ext.hull > max(s.density_radius - 1, len(ext.root_image)):
            density_bad = f"extension hull {ext.hull} at sample #{i}"
            break
    out.append(
        passed("portrait-density", name, f"ball={s.density_radius}") if density_bad is None
        else failed("portrait-density", name, density_bad)
    )

    conj_bad = None
    for i in range(max(1, samples // 8)):
        g, h = random_portrait(F, depth, rng), random_portrait(F, depth, rng)
        lazy = conjugate(h, g)
        eager = compose(g, compose(h, inverse(g)))
        if any(lazy.apply(v) != img for v, img in ball_images(eager, 4).items()):
            conj_bad = f"sample #{i}"
            break
        if not _same_class(classify(lazy), eager):
            conj_bad = f"class mismatch at sample #{i}"
            break
    out.append(passed("lazy-conjugate", name) if conj_bad is None else failed("lazy-conjugate", name, conj_bad))

    trips = []
    for i in range(ctx.config.budgets.round_trip // max(ctx.group_count, 1) + 1):
        g = random_portrait(F, depth, rng)
        if parse_portrait(print_portrait(g)) != g:
            trips.append(f"sample #{i}")
            break
    out.append(passed("portrait-round-trip", name) if not trips else failed("portrait-round-trip", name, trips[0]))
    return out


def _classification_issue(g: Portrait) -> Optional[str]:
    cls = classify(g)
    # the nearest minimizer lies within half of |g x0| of x0
    low, mins = brute_force_displacement(g, min(g.hull + 2, len(g.root_image) // 2 + 1))
    if isinstance(cls, Elliptic):
        if low != 0 or cls.fixed != mins[0]:
            return f"elliptic at {format_word(cls.fixed)} but min displacement {low}"
    elif isinstance(cls, Inversion):
        u, v = cls.edge.endpoints()
        if low != 1 or g.apply(u) != v or g.apply(v) != u:
            return f"inversion of {cls.edge} but min displacement {low}"
    else:
        if cls.length != low or cls.axis_segment[0] != mins[0]:
            return f"hyperbolic length {cls.length} but min displacement {low}"
        if g.apply(cls.axis_segment[0]) != cls.axis_segment[-1]:
            return "axis segment is not a translation segment"
        if end_image(g, cls.attracting) != cls.attracting or end_image(g, cls.repelling) != cls.repelling:
            return "ends not fixed"
        if len(g.root_image) % 2 == 0 and cls.length % 2:
            return f"type-preserving hyperbolic of odd length {cls.length}"
    return None


def battery_dynamics(ctx: BatteryContext, plus_checks: bool) -> list[CheckResult]:
    F, name, rng = ctx.F, ctx.name, ctx.rng
    d = F.degree
    s = ctx.config.settings
    depth = ctx.config.budgets.depth
    out = []

    counts = {"elliptic": 0, "inversion": 0, "hyperbolic": 0}
    issue = None
    samples = ctx.budget("classify")
    for i in range(samples):
        g = random_portrait(F, depth, rng) if i % 2 else random_hyperbolic(F, depth, rng)
        issue = _classification_issue(g)
        if issue:
            issue = f"{issue}: {g!r}"
            break
        counts[render_class(classify(g)).split()[0]] += 1
    out.append(
        passed("classify-exact", name, " ".join(f"{k}={v}" for k, v in counts.items())) if issue is None
        else failed("classify-exact", name, issue)
    )

    tits_bad = None
    samples = ctx.budget("tits")
    for i in range(samples):
        e = EdgeAddr(random_word(d, int(rng.integers(depth)), rng), int(rng.integers(1, d + 1)))
        g = random_edge_fixator(F, e, depth, rng)
        g1, g2 = tits_split(g, e)
        if compose(g1, g2) != g or compose(g2, g1) != g:
            tits_bad = f"factors of {g!r} at {e} do not multiply back"
            break
        t1 = HalfTree(e, e.inner)
        # agreement on B(x0, hull + 1) fixes every local, so a larger ball adds nothing
        reach = min(s.tits_radius, max(g.hull, g1.hull, g2.hull) + 1)
        img, img1, img2 = (ball_images(x, reach) for x in (g, g1, g2))
        for v in img:
            if t1.contains(v):
                ok = img1[v] == v and img[v] == img2[v]
            else:
                ok = img2[v] == v and img[v] == img1[v]
            if not ok:
                tits_bad = f"split of {g!r} at {e} wrong at {format_word(v)}"
                break
        if tits_bad:
            break
    out.append(
        passed("tits-split", name, f"samples={samples} ball={s.tits_radius}") if tits_bad is None
        else failed("tits-split", name, tits_bad)
    )

    if not plus_checks:
        return out

    out.append(_contraction_check(ctx))
    out.append(_generation_check(ctx))
    out.append(_mautner_check(ctx))
    return out


def _contraction_check(ctx: BatteryContext) -> CheckResult:
    F, name, rng = ctx.F, ctx.name, ctx.rng
    depth = ctx.config.budgets.depth
    radius = ctx.config.settings.witness_radius
    members = 0
    samples = ctx.budget("contraction")
    for i in range(samples):
        a = random_hyperbolic(F, depth, rng)
        xi = attracting_end(a)
        if i % 2:
            k = int(rng.integers(1, 4))
            edge = EdgeAddr.between(ray_vertex(xi, k), ray_vertex(xi, k + 1))
            g, _ = random_half_tree_fixator(F, HalfTree(edge, ray_vertex(xi, k + 1)), depth, rng)
        else:
            g = random_portrait(F, depth, rng, move_root=False)
        verdict: Contraction = contraction_membership(g, a, radius)
        oracle = contraction_by_conjugation(g, a, radius)
        if verdict.member != oracle:
            return failed("contraction-duality", name, f"half-tree={verdict.member} conjugation={oracle} g={g!r} a={a!r}")
        if verdict.member:
            members += 1
            if verdict.witness is None or not in_end_stabilizer_zero(g, xi):
                return failed("contraction-duality", name, f"member without witness or outside G0: g={g!r}")
    return passed("contraction-duality", name, f"samples={samples} members={members}")


def _generation_check(ctx: BatteryContext) -> CheckResult:
    F, name, rng = ctx.F, ctx.name, ctx.rng
    depth = ctx.config.budgets.depth
    samples = ctx.budget("generation")
    split = 0
    for _ in range(samples):
        a = random_hyperbolic(F, depth, rng)
        cls = classify(a)
        seg = cls.axis_segment
        k = int(rng.integers(len(seg) - 1))
        e = EdgeAddr.between(seg[k], seg[k + 1])
        g = random_edge_fixator(F, e, depth, rng)
        factors = generation_witness(g, a)
        if _product([u for u, _ in factors], F.degree) != g:
            return failed("generation-witness", name, f"factors of {g!r} do not multiply to g")
        for u, tag in factors:
            member = contraction_membership(u, a) if tag == "+" else in_repelling_contraction(u, a)
            if not member.member:
                return failed("generation-witness", name, f"factor {u!r} tagged {tag} is not a member")
        split += len(factors) == 2
    return passed("generation-witness", name, f"samples={samples} two-factor={split}")


def _mautner_check(ctx: BatteryContext) -> CheckResult:
    F, name, rng = ctx.F, ctx.name, ctx.rng
    depth = ctx.config.budgets.depth
    samples = ctx.budget("mautner")
    top = ctx.config.budgets.mautner_max_index
    for i in range(samples):
        xi = attracting_end(random_hyperbolic(F, depth, rng))
        g = random_ray_fixator(F, xi, depth, rng)
        if not fixes_end(g, xi) or not in_end_stabilizer_zero(g, xi):
            return failed("mautner-sequence", name, f"ray fixator {g!r} leaves G0 of {xi}")
        for j in range(top + 1):
            t, h = mautner_sequence(g, xi, j)
            if compose(t, h) != g:
                return failed("mautner-sequence", name, f"t_{j} h_{j} != g for {g!r}")
            if not fixes_ball(h, ROOT, j):
                return failed("mautner-sequence", name, f"h_{j} moves B(x0, {j}) for {g!r}")
            x = ray_vertex(xi, j + 1)
            side = HalfTree(EdgeAddr.between(ray_vertex(xi, j), x), x)
            if t.apply(x) != x or not t.local_action(x).is_identity:
                return failed("mautner-sequence", name, f"t_{j} moves the half-tree at {format_word(x)}")
            # side ∩ B(x0, j + 3) is side ∩ B(x, 2)
            if any(t.apply(v) != v for v in ball(x, 2, F.degree) if side.contains(v)):
                return failed("mautner-sequence", name, f"t_{j} moves a vertex toward {xi}")
    return passed("mautner-sequence", name, f"samples={samples} j<={top}")


def battery_orbits(ctx: BatteryContext) -> list[CheckResult]:
    F, name = ctx.F, ctx.name
    s = ctx.config.settings
    out = []

    if F.degree <= ORBIT_ORACLE_MAX_DEGREE:
        mismatch = None
        for n in range(s.oracle_depth + 1):
            orb = stabilizer_orbits_on_sphere(F, n)
            parts = union_find_orbits(F, n)
            if orb.count != len(parts) or sorted(p[0] for p in parts) != orb.representatives:
                mismatch = f"n={n} dp={orb.count} union-find={len(parts)}"
                break
            if any(orbit_representative(F, w) != part[0] for part in parts for w in part):
                mismatch = f"n={n} representative outside its part"
                break
        out.append(
            passed("orbits-vs-union-find", name, f"n<={s.oracle_depth}") if mismatch is None
            else failed("orbits-vs-union-find", name, mismatch)
        )

    growth = boundary_orbit_growth(F, s.orbit_depth)
    seq = ",".join(str(k) for k in growth.counts)
    first = len(orbits(F, range(1, F.degree + 1)))
    monotone = all(x <= y for x, y in zip(growth.counts, growth.counts[1:])) or not is_transitive(F)
    ok = growth.agrees and growth.counts[0] == first and monotone
    out.append(
        passed("orbit-growth", name, f"o={seq} {growth.verdict}") if ok
        else failed("orbit-growth", name, f"o={seq} {growth.verdict} agrees={growth.agrees}")
    )
    return out


# ─── Certificate Checks ──────────────────────────────────────────────────────

def certificate_checks(ctx: BatteryContext, plus_checks: bool) -> tuple[list[CheckResult], list[str]]:
    F, name, rng = ctx.F, ctx.name, ctx.rng
    s = ctx.config.settings
    out: list[CheckResult] = []
    notes: list[str] = []
    two = is_2transitive(F)
    hyp = satisfies_plus_hypotheses(F)

    if is_transitive(F) and F.degree >= MIN_TREE_DEGREE:
        cert = check_hyp_ends_obstruction(F)
        text = cert.render() if cert else "none (2-transitive)"
        out.append(passed("hyp-ends-obstruction", name, text) if (cert is None) == two
                   else failed("hyp-ends-obstruction", name, text))
    else:
        notes.append("obstruction skipped (intransitive or d < 3)")

    if not plus_checks:
        return out, notes

    if F.degree >= MIN_TREE_DEGREE:
        if not hyp:
            notes.append("hypotheses fail; + checks run in U(F) ∩ Aut(T)+")
        verdict = check_second_trans(F, strict=False)
        out.append(passed("second-trans", name, verdict.render()) if verdict.positive == two
                   else failed("second-trans", name, verdict.render()))

    line = check_equal_stabilizer_line(F, seed=rng)
    text = line.render() if line else "none (stabilizers distinct)"
    ok = line is None or line.verified
    if is_primitive(F) and line is not None:
        ok = False
        text += " (primitive group)"
    out.append(passed("equal-stabilizer-line", name, text) if ok else failed("equal-stabilizer-line", name, text))

    issues = check_bipartition(F, s.bipartition_radius, seed=rng)
    out.append(passed("bipartition", name, f"ball={s.bipartition_radius}") if not issues
               else failed("bipartition", name, issues[0]))

    if is_transitive(F):
        issues, unresolved = check_edge_transitivity(F, max(4, ctx.budget("generation")), seed=rng)
        text = f"unresolved={unresolved}"
        out.append(passed("edge-transitivity", name, text) if not issues
                   else failed("edge-transitivity", name, issues[0]))
    return out, notes


# ─── Suite ───────────────────────────────────────────────────────────────────

@dataclass
class SuiteReport:
    results: list[CheckResult] = field(default_factory=list)
    notes: dict[str, list[str]] = field(default_factory=dict)
    seed: int = 0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]


def _guarded(label: str, group: str, fn: Callable[[], list[CheckResult]]) -> list[CheckResult]:
    try:
        return fn()
    except Exception as e:
        logger.error(f"{label} on {group} raised: {e}", exc_info=True)
        return [failed(label, group, f"exception {type(e).__name__}: {e}")]


def run_group(spec: GroupSpec, config: SuiteConfiguration, index: int, group_count: int) -> tuple[list[CheckResult], list[str]]:
    """Every battery and certificate for one group, with its own seeded stream."""
    F = spec.build()
    rng = np.random.default_rng([config.settings.seed, index])
    ctx = BatteryContext(F, config, rng, group_count)
    notes: list[str] = []
    plus_checks = True
    if is_cyclic_of_prime_order(F):
        notes.append("U(F)+ trivial")
        plus_checks = False
    logger.info(f"Running suite on {F!r}{' [' + ', '.join(notes) + ']' if notes else ''}")

    results: list[CheckResult] = []
    results += _guarded("permgroup", ctx.name, lambda: battery_permgroup(ctx))
    results += _guarded("tree", ctx.name, lambda: battery_tree(ctx))
    results += _guarded("element", ctx.name, lambda: battery_element(ctx))
    results += _guarded("dynamics", ctx.name, lambda: battery_dynamics(ctx, plus_checks))
    results += _guarded("orbits", ctx.name, lambda: battery_orbits(ctx))

    def certificates() -> list[CheckResult]:
        found, extra = certificate_checks(ctx, plus_checks)
        notes.extend(extra)
        return found

    results += _guarded("certificates", ctx.name, certificates)
    for r in results:
        if not r.passed:
            logger.warning(f"FAIL {r.name} on {r.group}: {r.certificate}")
    return results, notes


def _run_group_job(job: tuple[GroupSpec, SuiteConfiguration, int, int]) -> tuple[list[CheckResult], list[str]]:
    return run_group(*job)


def run_suite(config: SuiteConfiguration) -> SuiteReport:
    """
    Run every battery and certificate over the configured groups.

    Raises:
        ConfigError: the configuration does not validate.
    """
    issues = config.validate()
    if issues:
        raise ConfigError("; ".join(issues))
    report = SuiteReport(seed=config.settings.seed)
    groups = config.groups
    if not groups:
        logger.info("No groups configured; empty report")
        return report

    jobs = [(spec, config, i, len(groups)) for i, spec in enumerate(groups)]
    if config.settings.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.settings.workers) as pool:
            outcomes = list(pool.map(_run_group_job, jobs))
    else:
        outcomes = [_run_group_job(job) for job in jobs]

    for spec, (results, notes) in zip(groups, outcomes):
        report.results.extend(results)
        if notes:
            report.notes[spec.name] = notes
    logger.info(f"Suite finished: {len(report.results)} checks, {len(report.failures)} failed")
    return report
