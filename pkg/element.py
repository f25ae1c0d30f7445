"""
element.py — Automorphisms of the colored tree and exact arithmetic in U(F).

An automorphism is described by where it sends x0 and by the permutation of
colors it induces at each vertex (its local action). Three models:

  - Portrait: finite data. `locals[v]` is stored *relative to the parent*:
    the local action at v is the product of the stored permutations along
    [x0, v]. A relative permutation at v != x0 must fix v's last color.
    Membership in U(F) is then just "every stored permutation lies in F",
    and the stored form is unique, so equality is field equality.
  - LineElement: a translation along a periodic line whose local actions
    repeat with the line's period (not finitely supported).
  - Conjugate: g·h·g^-1 evaluated lazily.

Also implements the group law, membership predicates, and the random
samplers the batteries draw from.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from config import MAX_DEGREE, MIN_DEGREE
from errors import DegreeError, HypothesisError, PreconditionError
from permgroup import Perm, PermGroup, point_stabilizer, satisfies_plus_hypotheses
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
    invert_word,
    multiply,
    neighbors,
    reduce_append,
    step_toward,
    validate_word,
)

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.Generator, None]


# ─── Shared Walking Machinery ────────────────────────────────────────────────

class TreeAutomorphism:
    """
    Base for the element models. Subclasses provide `degree`, `root_image`
    and `local_action(v)`.
    """

    def local_action(self, v: Word) -> Perm:
        raise NotImplementedError

    def _descend(self, tau: Perm, child: Word) -> Perm:
        """Local action at child given the local action tau at its parent."""
        return self.local_action(child)

    def apply(self, v: Word) -> Word:
        u = self.root_image
        tau = self.local_action(ROOT)
        for k, c in enumerate(v):
            u = reduce_append(u, tau(c))
            if k + 1 < len(v):
                tau = self._descend(tau, v[: k + 1])
        return u

    def __call__(self, v: Word) -> Word:
        return self.apply(v)

    def apply_inverse(self, w: Word) -> Word:
        """The unique x with g(x) = w, found by walking the image geodesic."""
        x, y = ROOT, self.root_image
        tau = self.local_action(ROOT)
        while y != w:
            image_color = step_toward(y, w)
            x = reduce_append(x, tau.preimage(image_color))
            y = reduce_append(y, image_color)
            tau = self._descend(tau, x)
        return x


# ─── Portraits ───────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class Portrait(TreeAutomorphism):
    """
    Finitely supported automorphism: root image plus relative local
    permutations (identity entries are dropped on construction).
    """

    degree: int
    root_image: Word = ROOT
    locals: Mapping[Word, Perm] = field(default_factory=dict)

    def __post_init__(self) -> None:
        d = self.degree
        if not MIN_DEGREE <= d <= MAX_DEGREE:
            raise DegreeError(f"degree {d} outside {MIN_DEGREE}..{MAX_DEGREE}")
        object.__setattr__(self, "root_image", validate_word(self.root_image, d))
        cleaned: dict[Word, Perm] = {}
        for v, sigma in self.locals.items():
            v = validate_word(v, d)
            if sigma.degree != d:
                raise DegreeError(f"local at {format_word(v)} has degree {sigma.degree}, expected {d}")
            if sigma.is_identity:
                continue
            if v and sigma(v[-1]) != v[-1]:
                raise PreconditionError(
                    f"local {sigma} at {format_word(v)} must fix the incoming color {v[-1]}"
                )
            cleaned[v] = sigma
        object.__setattr__(self, "locals", cleaned)

    @classmethod
    def identity(cls, degree: int) -> "Portrait":
        return cls(degree)

    @property
    def is_identity(self) -> bool:
        return not self.root_image and not self.locals

    @property
    def support(self) -> list[Word]:
        return sorted(self.locals, key=lambda v: (len(v), v))

    @cached_property
    def hull(self) -> int:
        return support_hull(self)

    def local_action(self, v: Word) -> Perm:
        tau = self.locals.get(ROOT) or Perm.identity(self.degree)
        for k in range(1, len(v) + 1):
            sigma = self.locals.get(v[:k])
            if sigma is not None:
                tau = tau * sigma
        return tau

    def _descend(self, tau: Perm, child: Word) -> Perm:
        sigma = self.locals.get(child)
        return tau * sigma if sigma is not None else tau

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Portrait):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.root_image == other.root_image
            and self.locals == other.locals
        )

    def __hash__(self) -> int:
        return hash((self.degree, self.root_image, frozenset(self.locals.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{format_word(v)}: {self.locals[v]}" for v in self.support)
        return f"Portrait(root={format_word(self.root_image)}, locals={{{body}}})"


Element = Union[Portrait, "LineElement", "Conjugate"]


def identity(degree: int) -> Portrait:
    return Portrait(degree)


def apply(g: TreeAutomorphism, v: Word) -> Word:
    return g.apply(v)


def apply_inverse(g: TreeAutomorphism, w: Word) -> Word:
    return g.apply_inverse(w)


def local_action(g: TreeAutomorphism, v: Word) -> Perm:
    """The permutation g induces on the colors at v."""
    return g.local_action(v)


def left_translation(w: Word, degree: int) -> Portrait:
    """Left multiplication by w in the free product: color preserving, no locals."""
    return Portrait(degree, w)


def support_hull(g: Portrait) -> int:
    """Smallest R with supp(g), x0 and g(x0) inside B(x0, R)."""
    return max([len(g.root_image)] + [len(v) for v in g.locals])


def _same_degree(*elements: TreeAutomorphism) -> int:
    degrees = {g.degree for g in elements}
    if len(degrees) != 1:
        raise DegreeError(f"degree mismatch: {sorted(degrees)}")
    return degrees.pop()


def _require_portrait(g: object, op: str) -> Portrait:
    if not isinstance(g, Portrait):
        raise PreconditionError(f"{op} is defined for portraits, got {type(g).__name__}")
    return g


def portrait_from_locals(
    degree: int,
    root_image: Word,
    true_local: Callable[[Word], Perm],
    candidates: Iterable[Word],
) -> Portrait:
    """
    Build the canonical portrait from full local actions.

    `candidates` must contain every vertex where the local action differs
    from its parent's (and x0); elsewhere the relative permutation is trivial.
    """
    stored: dict[Word, Perm] = {}
    for v in candidates:
        tau = true_local(v)
        if v:
            tau = true_local(v[:-1]).inverse() * tau
        if not tau.is_identity:
            stored[v] = tau
    return Portrait(degree, root_image, stored)


def walk_image(anchor: Word, anchor_image: Word, true_local: Callable[[Word], Perm], target: Word) -> Word:
    """Image of target, walking out from a vertex whose image is known."""
    x, y = anchor, anchor_image
    while x != target:
        c = step_toward(x, target)
        y = reduce_append(y, true_local(x)(c))
        x = reduce_append(x, c)
    return y


def portrait_from_anchor(
    degree: int,
    anchor: Word,
    anchor_image: Word,
    true_local: Callable[[Word], Perm],
    candidates: Iterable[Word],
) -> Portrait:
    root_image = walk_image(anchor, anchor_image, true_local, ROOT)
    return portrait_from_locals(degree, root_image, true_local, set(candidates) | {ROOT})


# ─── Group Law ───────────────────────────────────────────────────────────────

def compose(g: Portrait, f: Portrait) -> Portrait:
    """g ∘ f (apply f first); local actions follow the cocycle τ_gf(v) = τ_g(f v)·τ_f(v)."""
    _require_portrait(g, "compose")
    _require_portrait(f, "compose")
    d = _same_degree(g, f)
    candidates: set[Word] = {ROOT} | set(f.locals)
    for u in g.locals:
        pre = f.apply_inverse(u)
        candidates.add(pre)
        candidates.update(neighbors(pre, d))

    def true_local(v: Word) -> Perm:
        return g.local_action(f.apply(v)) * f.local_action(v)

    return portrait_from_locals(d, g.apply(f.root_image), true_local, candidates)


def inverse(g: Portrait) -> Portrait:
    _require_portrait(g, "inverse")
    d = g.degree
    candidates: set[Word] = {ROOT}
    for u in g.locals:
        image = g.apply(u)
        candidates.add(image)
        candidates.update(neighbors(image, d))

    def true_local(w: Word) -> Perm:
        return g.local_action(g.apply_inverse(w)).inverse()

    return portrait_from_locals(d, g.apply_inverse(ROOT), true_local, candidates)


def power(g: Portrait, n: int) -> Portrait:
    """g^n by repeated squaring; negative n uses the inverse."""
    if n < 0:
        return power(inverse(g), -n)
    result = identity(g.degree)
    base = g
    while n:
        if n & 1:
            result = compose(base, result)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def ball_images(g: TreeAutomorphism, r: int) -> dict[Word, Word]:
    """Images of every vertex of B(x0, r) in a single traversal."""
    images = {ROOT: g.root_image}
    frontier = [(ROOT, g.root_image, g.local_action(ROOT))]
    for _ in range(r):
        nxt = []
        for v, img, tau in frontier:
            for c in range(1, g.degree + 1):
                if v and v[-1] == c:
                    continue
                child = v + (c,)
                child_img = reduce_append(img, tau(c))
                images[child] = child_img
                nxt.append((child, child_img, g._descend(tau, child)))
        frontier = nxt
    return images


def fixes_ball(g: TreeAutomorphism, center: Word, r: int) -> bool:
    """True iff g fixes every vertex of B(center, r)."""
    if g.apply(center) != center:
        return False
    if r == 0:
        return True
    top = len(center) - (r - 1)
    if isinstance(g, Portrait) and top > g.hull:
        # the whole ball sits in one cone beyond the support
        return g.local_action(center[:top]).is_identity
    return all(g.local_action(u).is_identity for u in ball(center, r - 1, g.degree))


def end_image(g: Portrait, xi: End) -> End:
    """Image of an eventually periodic end."""
    _require_portrait(g, "end_image")
    n = max(g.hull, len(xi.preperiod)) + 1
    x = xi.prefix(n)
    kappa = g.local_action(x)
    period = tuple(kappa(c) for c in xi.prefix(n + len(xi.period))[n:])
    head = g.apply(x)
    while head and head[-1] == period[0]:
        head = head[:-1]
        period = period[1:] + period[:1]
    return End(head, period)


# ─── Membership ──────────────────────────────────────────────────────────────

def is_type_preserving(g: TreeAutomorphism) -> bool:
    return len(g.root_image) % 2 == 0


def is_in_UF(g: TreeAutomorphism, F: PermGroup) -> bool:
    """Every local action of g lies in F."""
    if g.degree != F.degree:
        raise DegreeError(f"element degree {g.degree} vs group degree {F.degree}")
    if isinstance(g, Portrait):
        return all(sigma in F for sigma in g.locals.values())
    if isinstance(g, LineElement):
        return all(sigma in F for sigma in g.period_perms)
    if isinstance(g, Conjugate):
        return is_in_UF(g.inner, F) and is_in_UF(g.by, F)
    raise PreconditionError(f"unsupported element type {type(g).__name__}")


def is_in_UF_plus(g: TreeAutomorphism, F: PermGroup, *, require_hypotheses: bool = True) -> bool:
    """
    Membership in U(F) ∩ Aut(T)+, which is U(F)+ when F is transitive and
    generated by its point stabilizers.

    Raises:
        HypothesisError: F fails those hypotheses and require_hypotheses is set.
    """
    if require_hypotheses and not satisfies_plus_hypotheses(F):
        raise HypothesisError(
            f"{F.label()} is not transitive and generated by point stabilizers; "
            f"U(F)+ is not U(F) ∩ Aut(T)+ here"
        )
    return is_in_UF(g, F) and is_type_preserving(g)


def edge_transport(e: EdgeAddr, f: EdgeAddr, F: PermGroup) -> Optional[Portrait]:
    """
    An element of U(F) mapping e.inner to f.inner and e.outer to f.outer:
    translate e to the star of x0, rotate its color with some π ∈ F, and
    translate out to f. None when no π ∈ F sends e.color to f.color.
    """
    pi = next((p for p in F.elements if p(e.color) == f.color), None)
    if pi is None:
        return None
    d = F.degree
    rotate = Portrait(d, ROOT, {ROOT: pi})
    to_root = left_translation(invert_word(e.inner), d)
    return compose(left_translation(f.inner, d), compose(rotate, to_root))


def portrait_from_ball_map(degree: int, images: Mapping[Word, Word], radius: int) -> Portrait:
    """
    Extend an isometry of B(x0, radius) into T to a finite portrait that
    agrees with it on the ball.
    """
    if radius < 1:
        raise PreconditionError(f"ball radius must be >= 1, got {radius}")
    table: dict[Word, Perm] = {}
    for v in ball(ROOT, radius - 1, degree):
        img = images[v]
        targets = []
        for c in range(1, degree + 1):
            nbr_img = images[reduce_append(v, c)]
            if dist(img, nbr_img) != 1:
                raise PreconditionError(f"map is not an isometry at {format_word(v)}")
            targets.append(step_toward(img, nbr_img))
        if sorted(targets) != list(range(1, degree + 1)):
            raise PreconditionError(f"map is not injective on the star of {format_word(v)}")
        table[v] = Perm(tuple(targets))

    def true_local(v: Word) -> Perm:
        return table[v[: radius - 1]]

    return portrait_from_locals(degree, images[ROOT], true_local, table)


# ─── Classification Results ──────────────────────────────────────────────────

@dataclass(frozen=True)
class Elliptic:
    fixed: Word


@dataclass(frozen=True)
class Inversion:
    edge: EdgeAddr


@dataclass(frozen=True)
class Hyperbolic:
    length: int
    axis_segment: tuple[Word, ...]
    attracting: End
    repelling: End

    @property
    def axis_colors(self) -> Word:
        seg = self.axis_segment
        return tuple(step_toward(seg[i], seg[i + 1]) for i in range(len(seg) - 1))


ElementClass = Union[Elliptic, Inversion, Hyperbolic]


# ─── Line Elements ───────────────────────────────────────────────────────────

@dataclass(frozen=True)
class LineElement(TreeAutomorphism):
    """
    Translation by `shift` along the periodic line through `base`.

    Axis vertex v_i (i ∈ Z) is base·P^∞[:i] for i >= 0 and base followed by
    the period read backwards for i < 0, so the edge v_i–v_{i+1} has color
    P[i mod p]. The local action at v_i is period_perms[i mod p]; off the
    axis it equals the action at the vertex's projection onto the axis.
    `base` is the projection of x0 (default: the line runs through x0).
    """

    degree: int
    period_colors: Word
    period_perms: tuple[Perm, ...]
    shift: int
    base: Word = ROOT

    def __post_init__(self) -> None:
        d = self.degree
        colors = validate_word(self.period_colors, d)
        perms = tuple(self.period_perms)
        base = validate_word(self.base, d)
        object.__setattr__(self, "period_colors", colors)
        object.__setattr__(self, "period_perms", perms)
        object.__setattr__(self, "base", base)
        p = len(colors)
        if p < 2 or colors[0] == colors[-1]:
            raise PreconditionError(f"period {format_word(colors)} is not cyclically reduced")
        if len(perms) != p:
            raise PreconditionError(f"{len(perms)} perms for a period of length {p}")
        if self.shift <= 0 or self.shift % 2:
            raise PreconditionError(f"shift must be even and positive, got {self.shift}")
        if base and base[-1] in (colors[0], colors[-1]):
            raise PreconditionError(f"base {format_word(base)} is not the projection of x0 onto the line")
        for i, sigma in enumerate(perms):
            if sigma.degree != d:
                raise DegreeError(f"perm[{i}] has degree {sigma.degree}, expected {d}")
            if (sigma(self.back_color(i)), sigma(self.forward_color(i))) != (
                self.back_color(i + self.shift),
                self.forward_color(i + self.shift),
            ):
                raise PreconditionError(
                    f"perm[{i}] = {sigma} does not carry the colors at v_{i} to those at v_{i + self.shift}"
                )

    @classmethod
    def anchored(
        cls,
        degree: int,
        anchor: Word,
        period_colors: Sequence[int],
        period_perms: Sequence[Perm],
        shift: int,
    ) -> "LineElement":
        """
        Line element whose index 0 sits at an arbitrary axis vertex `anchor`;
        re-indexed so index 0 is the projection of x0.
        """
        colors = tuple(period_colors)
        p = len(colors)
        best: Optional[tuple[int, Word]] = None
        reach = len(anchor) + 1
        for i in range(-reach, reach + 1):
            if i >= 0:
                u = multiply(anchor, [colors[k % p] for k in range(i)])
            else:
                u = multiply(anchor, [colors[(-1 - k) % p] for k in range(-i)])
            if best is None or len(u) < len(best[1]):
                best = (i, u)
        m, base = best
        return cls(
            degree,
            tuple(colors[(m + k) % p] for k in range(p)),
            tuple(period_perms[(m + k) % p] for k in range(p)),
            shift,
            base,
        )

    @property
    def period(self) -> int:
        return len(self.period_colors)

    def back_color(self, i: int) -> int:
        return self.period_colors[(i - 1) % self.period]

    def forward_color(self, i: int) -> int:
        return self.period_colors[i % self.period]

    def axis_vertex(self, i: int) -> Word:
        if i >= 0:
            return self.base + tuple(self.forward_color(k) for k in range(i))
        return self.base + tuple(self.back_color(-k) for k in range(-i))

    def projection_index(self, v: Word) -> int:
        """Index of the axis vertex nearest v."""
        b = len(self.base)
        if v[:b] != self.base:
            return 0
        tail = v[b:]
        k = 0
        while k < len(tail) and tail[k] == self.forward_color(k):
            k += 1
        if k:
            return k
        while k < len(tail) and tail[k] == self.back_color(-k):
            k += 1
        return -k

    def local_action(self, v: Word) -> Perm:
        return self.period_perms[self.projection_index(v) % self.period]

    @cached_property
    def root_image(self) -> Word:
        sigma = self.period_perms[0]
        return multiply(self.axis_vertex(self.shift), [sigma(c) for c in reversed(self.base)])

    def power(self, k: int) -> "LineElement":
        """g^k for k >= 1: shift k·s, local σ_{i+(k-1)s}∘…∘σ_i at v_i."""
        if k < 1:
            raise PreconditionError(f"line element powers need k >= 1, got {k}")
        p, s = self.period, self.shift
        perms = []
        for i in range(p):
            tau = Perm.identity(self.degree)
            for j in range(k):
                tau = self.period_perms[(i + j * s) % p] * tau
            perms.append(tau)
        return LineElement(self.degree, self.period_colors, tuple(perms), k * s, self.base)

    @property
    def attracting(self) -> End:
        return End(self.base, self.period_colors)

    @property
    def repelling(self) -> End:
        return End(self.base, tuple(self.back_color(-k) for k in range(self.period)))


# ─── Conjugates ──────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class Conjugate(TreeAutomorphism):
    """by ∘ inner ∘ by^-1, evaluated on demand."""

    inner: TreeAutomorphism
    by: Portrait

    @property
    def degree(self) -> int:
        return self.by.degree

    @cached_property
    def by_inverse(self) -> Portrait:
        return inverse(self.by)

    @cached_property
    def root_image(self) -> Word:
        return self.by.apply(self.inner.apply(self.by_inverse.apply(ROOT)))

    def local_action(self, v: Word) -> Perm:
        u = self.by_inverse.apply(v)
        return (
            self.by.local_action(self.inner.apply(u))
            * self.inner.local_action(u)
            * self.by.local_action(u).inverse()
        )


def conjugate(h: TreeAutomorphism, g: Portrait) -> Conjugate:
    """g·h·g^-1."""
    _require_portrait(g, "conjugate")
    _same_degree(h, g)
    return Conjugate(h, g)


# ─── Random Samplers ─────────────────────────────────────────────────────────

def make_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _pick(rng: np.random.Generator, choices: Sequence[Perm]) -> Perm:
    return choices[int(rng.integers(len(choices)))]


def _stabilizer_table(F: PermGroup) -> dict[int, tuple[Perm, ...]]:
    return {c: point_stabilizer(F, c).elements for c in range(1, F.degree + 1)}


def random_word(degree: int, length: int, seed: SeedLike = None) -> Word:
    rng = make_rng(seed)
    w: Word = ROOT
    while len(w) < length:
        c = int(rng.integers(1, degree + 1))
        if not w or w[-1] != c:
            w = w + (c,)
    return w


def random_vertex_stabilizer_element(F: PermGroup, depth: int, seed: SeedLike = None) -> Portrait:
    """Root fixed; uniformly random local actions in F on B(x0, depth - 1)."""
    if depth < 1:
        raise PreconditionError(f"depth must be >= 1, got {depth}")
    rng = make_rng(seed)
    stabs = _stabilizer_table(F)
    stored = {}
    for v in ball(ROOT, depth - 1, F.degree):
        sigma = _pick(rng, F.elements if not v else stabs[v[-1]])
        if not sigma.is_identity:
            stored[v] = sigma
    return Portrait(F.degree, ROOT, stored)


def random_portrait(F: PermGroup, depth: int, seed: SeedLike = None, move_root: bool = True) -> Portrait:
    """Random element of U(F) with hull at most depth."""
    rng = make_rng(seed)
    g = random_vertex_stabilizer_element(F, depth, rng)
    if not move_root:
        return g
    w = random_word(F.degree, int(rng.integers(depth + 1)), rng)
    return compose(left_translation(w, F.degree), g)


def _random_anchored(
    F: PermGroup,
    anchor: Word,
    anchor_choices: Sequence[Perm],
    inside: Callable[[Word], bool],
    depth: int,
    rng: np.random.Generator,
) -> tuple[Portrait, bool]:
    """
    Element fixing `anchor`, random on the region `inside` up to distance
    depth - 1 from it and trivial outside the region.

    Returns the portrait and whether every choice was forced (the sampled
    fixator group is trivial).
    """
    d = F.degree
    stabs = _stabilizer_table(F)
    forced = len(anchor_choices) == 1
    table = {anchor: _pick(rng, anchor_choices)}
    frontier = [anchor]
    for _ in range(depth - 1):
        nxt = []
        for u in frontier:
            for c in range(1, d + 1):
                child = reduce_append(u, c)
                if child in table or not inside(child):
                    continue
                forced = forced and len(stabs[c]) == 1
                table[child] = table[u] * _pick(rng, stabs[c])
                nxt.append(child)
        frontier = nxt

    ident = Perm.identity(d)

    def true_local(v: Word) -> Perm:
        if not inside(v):
            return ident
        path = geodesic(anchor, v)
        return table[path[min(len(path) - 1, depth - 1)]]

    candidates = set(table)
    for u in table:
        candidates.update(neighbors(u, d))
    return portrait_from_anchor(d, anchor, anchor, true_local, candidates), forced


def random_half_tree_fixator(
    F: PermGroup, h: HalfTree, depth: int, seed: SeedLike = None
) -> tuple[Portrait, bool]:
    """
    Random element fixing the half-tree h pointwise. The local action at the
    opposite endpoint lies in F_c (c the edge color); beyond it the choices
    are free. The flag is True when the fixator is forced to be trivial.
    """
    if depth < 1:
        raise PreconditionError(f"depth must be >= 1, got {depth}")
    rng = make_rng(seed)
    stab = point_stabilizer(F, h.edge.color).elements
    g, forced = _random_anchored(F, h.other_side, stab, lambda v: not h.contains(v), depth, rng)
    return g, forced


def random_edge_fixator(F: PermGroup, e: EdgeAddr, depth: int, seed: SeedLike = None) -> Portrait:
    """Random element of U(F) fixing both endpoints of e."""
    if depth < 1:
        raise PreconditionError(f"depth must be >= 1, got {depth}")
    rng = make_rng(seed)
    stab = point_stabilizer(F, e.color).elements
    g, _ = _random_anchored(F, e.inner, stab, lambda v: True, depth, rng)
    return g


def random_ray_fixator(F: PermGroup, xi: End, depth: int, seed: SeedLike = None) -> Portrait:
    """
    Random element of U(F) with hull < depth fixing the whole ray [x0, xi)
    pointwise (hence fixing xi).
    """
    if depth < 1:
        raise PreconditionError(f"depth must be >= 1, got {depth}")
    rng = make_rng(seed)
    d = F.degree
    stabs = _stabilizer_table(F)
    last = depth - 1
    start = max(last - 1, 0)
    tail = set(xi.prefix(start + len(xi.preperiod) + len(xi.period))[start:])
    ray = {xi.prefix(i) for i in range(depth)}
    taus: dict[Word, Perm] = {}
    stored = {}
    for v in ball(ROOT, last, d):
        if v in ray:
            keep = {xi.prefix(len(v) + 1)[-1]}
            if v:
                keep.add(v[-1])
            if len(v) == last:
                keep |= tail
            tau = _pick(rng, [p for p in F.elements if all(p(c) == c for c in keep)])
            parent = taus[v[:-1]] if v else Perm.identity(d)
            taus[v] = tau
            sigma = parent.inverse() * tau
        else:
            sigma = _pick(rng, F.elements if not v else stabs[v[-1]])
        if not sigma.is_identity:
            stored[v] = sigma
    return Portrait(d, ROOT, stored)

