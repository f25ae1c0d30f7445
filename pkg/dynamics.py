"""
dynamics.py — Elliptic / inversion / hyperbolic classification and the
structure theory built on it.

Implements:
  - classify: exact, from the orbit points g x0 and g² x0
  - translation_mapping_edge: a hyperbolic of U(F)+ carrying one edge to another
  - tits_split: G_e = G_T1 · G_T2 at an edge fixed by g
  - contraction_membership (half-tree criterion) and the conjugation-limit oracle
  - generation_witness: factor an axis-edge fixator into U+_a and U-_a pieces
  - mautner_sequence: g = t_j · h_j along a ray to a fixed end

Everything is exact: for a finite portrait the fixed set, inverted edge or
axis comes within half the hull of x0, and beyond the hull the local action
is constant on each cone.
"""

import logging
from dataclasses import dataclass
from typing import Optional

from config import WITNESS_RADIUS
from element import (
    Conjugate,
    ElementClass,
    Elliptic,
    Hyperbolic,
    Inversion,
    LineElement,
    Portrait,
    SeedLike,
    TreeAutomorphism,
    ball_images,
    compose,
    end_image,
    fixes_ball,
    inverse,
    left_translation,
    make_rng,
    random_vertex_stabilizer_element,
    random_word,
)
from errors import HypothesisError, PreconditionError
from permgroup import Perm, PermGroup, satisfies_plus_hypotheses, transporter_exists
from tree import (
    ROOT,
    EdgeAddr,
    End,
    Word,
    ball,
    dist,
    edge_distance,
    format_word,
    geodesic,
    ray_vertex,
)

logger = logging.getLogger(__name__)


# ─── Classification ──────────────────────────────────────────────────────────

def classify(g: TreeAutomorphism) -> ElementClass:
    """
    Elliptic (shortlex-least fixed vertex), Inversion (the inverted edge) or
    Hyperbolic (translation length, one period of the axis starting at the
    axis vertex nearest x0, and both ends).
    """
    if isinstance(g, LineElement):
        return _classify_line(g)
    if isinstance(g, Conjugate):
        return _classify_conjugate(g)
    if not isinstance(g, Portrait):
        raise PreconditionError(f"cannot classify {type(g).__name__}")

    x1 = g.apply(ROOT)
    d1 = len(x1)
    half = d1 // 2

    # [x0, g x0] runs through the nearest fixed vertex or the inverted edge
    # at its midpoint
    if d1 % 2 == 0 and g.apply(x1[:half]) == x1[:half]:
        return Elliptic(x1[:half])
    if d1 % 2 == 1:
        u, v = x1[:half], x1[: half + 1]
        if g.apply(u) == v and g.apply(v) == u:
            return Inversion(EdgeAddr.between(u, v))

    # |g x0| = L + 2D and |g² x0| = 2L + 2D, D the distance to the axis
    length = len(g.apply(x1)) - d1
    v = x1[: (d1 - length) // 2]
    return Hyperbolic(
        length=length,
        axis_segment=tuple(geodesic(v, g.apply(v))),
        attracting=_attracting_end(g, v, length),
        repelling=_attracting_end(inverse(g), v, length),
    )


def _attracting_end(g: Portrait, v: Word, length: int) -> End:
    """
    Follow the axis from v until it leaves the hull heading outward; from
    there g acts on the cone as one permutation κ, so the axis reads
    S κ(S) κ²(S) ... with S the last translation segment.
    """
    x = v
    for _ in range(2 * (g.hull + length) + 8):
        gx = g.apply(x)
        if len(x) > g.hull and len(gx) == len(x) + length:
            break
        x = gx
    else:
        raise RuntimeError(f"axis of {g!r} never left the hull")

    segment = gx[len(x):]
    kappa = g.local_action(x)
    period: list[int] = []
    block = segment
    while True:
        period.extend(block)
        block = tuple(kappa(c) for c in block)
        if block == segment:
            break
    return End(x, tuple(period))


def _classify_line(h: LineElement) -> Hyperbolic:
    return Hyperbolic(
        length=h.shift,
        axis_segment=tuple(h.axis_vertex(i) for i in range(h.shift + 1)),
        attracting=h.attracting,
        repelling=h.repelling,
    )


def _classify_conjugate(c: Conjugate) -> ElementClass:
    inner = classify(c.inner)
    by = c.by
    if isinstance(inner, Elliptic):
        return Elliptic(by.apply(inner.fixed))
    if isinstance(inner, Inversion):
        u, v = inner.edge.endpoints()
        return Inversion(EdgeAddr.between(by.apply(u), by.apply(v)))
    return Hyperbolic(
        length=inner.length,
        axis_segment=tuple(by.apply(u) for u in inner.axis_segment),
        attracting=end_image(by, inner.attracting),
        repelling=end_image(by, inner.repelling),
    )


def translation_length(g: TreeAutomorphism) -> int:
    cls = classify(g)
    if isinstance(cls, Hyperbolic):
        return cls.length
    return 0


def brute_force_displacement(g: TreeAutomorphism, r: int) -> tuple[int, list[Word]]:
    """Minimum of dist(v, g v) over B(x0, r) by direct evaluation, with its minimizers."""
    disp = {v: dist(v, g.apply(v)) for v in ball(ROOT, r, g.degree)}
    low = min(disp.values())
    return low, [v for v, k in disp.items() if k == low]


def render_class(cls: ElementClass) -> str:
    """One-line report, e.g. `hyperbolic len=2 axis=(12) ends=+(12)^inf -(21)^inf`."""
    if isinstance(cls, Elliptic):
        return f"elliptic fixed={format_word(cls.fixed)}"
    if isinstance(cls, Inversion):
        return f"inversion edge={cls.edge}"
    return (
        f"hyperbolic len={cls.length} axis=({format_word(cls.axis_colors)}) "
        f"ends=+{cls.attracting.render()} -{cls.repelling.render()}"
    )


def random_hyperbolic(F: PermGroup, depth: int, seed: SeedLike = None, attempts: int = 64) -> Portrait:
    """Random hyperbolic element of U(F) ∩ Aut(T)+ with hull at most depth."""
    rng = make_rng(seed)
    half = max(depth // 2, 1)
    for _ in range(attempts):
        w = random_word(F.degree, 2 * int(rng.integers(1, half + 1)), rng)
        g = compose(
            left_translation(w, F.degree),
            random_vertex_stabilizer_element(F, max(depth - 1, 1), rng),
        )
        if isinstance(classify(g), Hyperbolic):
            return g
    logger.debug(f"no hyperbolic sample in {attempts} attempts; using the (12) translation")
    return left_translation((1, 2), F.degree)


# ─── Translations Between Edges ──────────────────────────────────────────────

def _complete_period(colors: list[int], s: int, F: PermGroup) -> Optional[tuple[tuple[int, ...], list[Perm]]]:
    """
    Extend the path colors c_0..c_s to a period of length 2s whose shift-s
    transporters all exist in F. Free colors are tried in increasing order;
    the first completion wins.
    """
    p = 2 * s
    period: list[Optional[int]] = list(colors[: s + 1]) + [None] * (s - 1)

    def transporter(i: int) -> Optional[Perm]:
        return transporter_exists(
            F,
            (period[(i - 1) % p], period[i % p]),
            (period[(i + s - 1) % p], period[(i + s) % p]),
        )

    def consistent(upto: int) -> bool:
        for i in range(p):
            needed = [(i - 1) % p, i % p, (i + s - 1) % p, (i + s) % p]
            if all(k <= upto for k in needed) and transporter(i) is None:
                return False
        return True

    def search(k: int) -> bool:
        if k == p:
            return period[p - 1] != period[0] and consistent(p - 1)
        for c in range(1, F.degree + 1):
            if c == period[k - 1] or (k == p - 1 and c == period[0]):
                continue
            period[k] = c
            if consistent(k) and search(k + 1):
                return True
        period[k] = None
        return False

    if not consistent(s) or not search(s + 1):
        return None
    perms = [transporter(i) for i in range(p)]
    return tuple(period), perms


def translation_mapping_edge(e: EdgeAddr, f: EdgeAddr, F: PermGroup) -> Optional[LineElement]:
    """
    A hyperbolic element of U(F)+ with g(e) = f, translating along a periodic
    line through both edges. None when the line's transporters are missing.

    Raises:
        HypothesisError: F is not transitive and generated by point stabilizers.
        PreconditionError: the edges are an even distance apart.
    """
    if not satisfies_plus_hypotheses(F):
        raise HypothesisError(f"{F.label()} is not transitive and generated by point stabilizers")
    gap = edge_distance(e, f)
    if gap % 2 == 0:
        raise PreconditionError(f"edges {e} and {f} are an even distance ({gap}) apart")

    near_e, near_f = min(
        ((u, v) for u in e.endpoints() for v in f.endpoints()),
        key=lambda uv: dist(*uv),
    )
    far_e = e.outer if near_e == e.inner else e.inner
    far_f = f.outer if near_f == f.inner else f.inner
    path = [far_e] + geodesic(near_e, near_f) + [far_f]
    colors = [EdgeAddr.between(path[i], path[i + 1]).color for i in range(len(path) - 1)]
    s = len(path) - 2

    if colors[s] == colors[0]:
        period = tuple(colors[:s])
        perms = [
            transporter_exists(F, (period[i - 1], period[i]), (period[i - 1], period[i]))
            for i in range(s)
        ]
    else:
        completed = _complete_period(colors, s, F)
        if completed is None:
            logger.info(f"no period completion carries {e} to {f} in {F.label()}")
            return None
        period, perms = completed
    return LineElement.anchored(F.degree, far_e, period, perms, s)


# ─── Tits Independence ───────────────────────────────────────────────────────

def tits_split(g: Portrait, e: EdgeAddr) -> tuple[Portrait, Portrait]:
    """
    Split an edge fixator as g = g1 ∘ g2 (the factors commute): g1 fixes the
    half-tree T1 containing e.inner and acts like g on T2; g2 fixes the
    half-tree T2 below e.outer and acts like g on T1.
    """
    inner, outer = e.endpoints()
    if g.apply(inner) != inner or g.apply(outer) != outer:
        raise PreconditionError(f"{g!r} does not fix the edge {e}")

    def below(v: Word) -> bool:
        return v[: len(outer)] == outer

    at_inner = g.local_action(inner)
    off = {v: sigma for v, sigma in g.locals.items() if not below(v)}
    off[outer] = at_inner.inverse()
    on = {v: sigma for v, sigma in g.locals.items() if below(v) and v != outer}
    on[outer] = g.local_action(outer)
    g1 = Portrait(g.degree, ROOT, on)
    g2 = Portrait(g.degree, g.root_image, off)
    return g1, g2


# ─── Contraction Groups ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class Contraction:
    """Membership in U+_a with the first n where a^-n g a^n is trivial on B(x0, r)."""

    member: bool
    witness: Optional[int] = None


def attracting_end(a: TreeAutomorphism) -> End:
    cls = classify(a)
    if not isinstance(cls, Hyperbolic):
        raise PreconditionError(f"a is not hyperbolic: {render_class(cls)}")
    return cls.attracting


def witness_bound(g: Portrait, a: Portrait, radius: int = WITNESS_RADIUS) -> int:
    """An n past which a^n(B(x0, radius)) lies in the cone at ray_vertex(ξ+, hull(g) + 1)."""
    return g.hull + 3 * a.hull + radius + 2


def contraction_membership(g: Portrait, a: Portrait, radius: int = WITNESS_RADIUS) -> Contraction:
    """
    g ∈ U+_a iff g fixes pointwise the cone toward the attracting end beyond
    its hull: g fixes x = ray_vertex(ξ+, hull(g) + 1) and acts trivially there.
    """
    xi = attracting_end(a)
    x = ray_vertex(xi, g.hull + 1)
    if g.apply(x) != x or not g.local_action(x).is_identity:
        return Contraction(False)

    y = ROOT
    for n in range(witness_bound(g, a, radius) + 1):
        if fixes_ball(g, y, radius):
            return Contraction(True, n)
        y = a.apply(y)
    logger.warning(f"member of U+_a without a witness below the bound: g={g!r} a={a!r}")
    return Contraction(True)


def contraction_by_conjugation(g: Portrait, a: Portrait, radius: int = WITNESS_RADIUS) -> bool:
    """
    a^-n g a^n is the identity on B(x0, radius) for n = witness_bound(g, a),
    i.e. g fixes B(a^n x0, radius) vertex by vertex.
    """
    y = ROOT
    for _ in range(witness_bound(g, a, radius)):
        y = a.apply(y)
    return all(g.apply(u) == u for u in ball(y, radius, g.degree))


def in_repelling_contraction(g: Portrait, a: Portrait, radius: int = WITNESS_RADIUS) -> Contraction:
    """Membership in U-_a, the contraction group of a^-1."""
    return contraction_membership(g, inverse(a), radius)


# ─── Generation Witnesses ────────────────────────────────────────────────────

def axis_vertices(a: Portrait, reach: int) -> list[Word]:
    """Axis vertices of a hyperbolic a, ordered from the repelling to the attracting end."""
    cls = classify(a)
    if not isinstance(cls, Hyperbolic):
        raise PreconditionError(f"a is not hyperbolic: {render_class(cls)}")
    start = cls.axis_segment[0]
    a_inv = inverse(a)

    def run(step: TreeAutomorphism) -> list[Word]:
        out: list[Word] = []
        cur = start
        for _ in range(reach):
            nxt = step.apply(cur)
            out.extend(geodesic(cur, nxt)[1:])
            cur = nxt
        return out

    return list(reversed(run(a_inv))) + [start] + run(a)


def fixed_axis_edge(g: Portrait, a: Portrait) -> tuple[EdgeAddr, Word]:
    """
    The axis edge fixed by g nearest x0, with its endpoint toward the
    attracting end.
    """
    line = axis_vertices(a, g.hull + a.hull + 2)
    best: Optional[tuple[int, int]] = None
    for i in range(len(line) - 1):
        u, v = line[i], line[i + 1]
        if g.apply(u) == u and g.apply(v) == v:
            key = (min(len(u), len(v)), i)
            if best is None or key < best:
                best = key
    if best is None:
        raise PreconditionError(f"{g!r} fixes no edge of the axis")
    i = best[1]
    return EdgeAddr.between(line[i], line[i + 1]), line[i + 1]


def generation_witness(g: Portrait, a: Portrait) -> list[tuple[Portrait, str]]:
    """
    Factor g into members of U+_a ('+') and U-_a ('-') whose product is g.
    Identity factors are dropped.
    """
    attracting_end(a)
    if g.is_identity:
        return []
    if contraction_membership(g, a).member:
        return [(g, "+")]
    if in_repelling_contraction(g, a).member:
        return [(g, "-")]

    edge, toward_plus = fixed_axis_edge(g, a)
    g1, g2 = tits_split(g, edge)
    # g2 fixes the part below edge.outer
    plus, minus = (g2, g1) if toward_plus == edge.outer else (g1, g2)
    return [(u, tag) for u, tag in ((plus, "+"), (minus, "-")) if not u.is_identity]


# ─── Mautner Decomposition ───────────────────────────────────────────────────

def mautner_sequence(g: Portrait, xi: End, j: int) -> tuple[Portrait, Portrait]:
    """
    g = t_j ∘ h_j where t_j fixes the half-tree at ray_vertex(xi, j + 1)
    containing xi and h_j fixes the half-tree at ray_vertex(xi, j) away from
    xi (so h_j fixes B(x0, j)).
    """
    if j < 0:
        raise PreconditionError(f"index must be >= 0, got {j}")
    for i in range(j + 2):
        x = ray_vertex(xi, i)
        if g.apply(x) != x:
            raise PreconditionError(f"g moves ray vertex {format_word(x)} of {xi}")
    if not fixes_end(g, xi):
        raise PreconditionError(f"g does not fix the end {xi}")
    edge = EdgeAddr(ray_vertex(xi, j), xi.prefix(j + 1)[-1])
    h_j, t_j = tits_split(g, edge)
    return t_j, h_j


def fixes_end(g: Portrait, xi: End) -> bool:
    return end_image(g, xi) == xi


def in_end_stabilizer_zero(g: Portrait, xi: End) -> bool:
    """g fixes xi and some vertex (the non-hyperbolic part of the end stabilizer)."""
    return fixes_end(g, xi) and isinstance(classify(g), Elliptic)


def first_moved_radius(g: TreeAutomorphism, limit: int) -> Optional[int]:
    """Smallest r <= limit such that g moves a vertex of the sphere of radius r."""
    images = ball_images(g, limit)
    moved = [len(v) for v, img in images.items() if img != v]
    return min(moved) if moved else None
