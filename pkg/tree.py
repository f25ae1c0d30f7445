"""
tree.py — The legally colored d-regular tree as reduced color words.

Vertices are reduced words over {1..d} (no letter repeated twice in a row);
the empty word is the base vertex x0. The edge {w, w·c} carries color c, so
every vertex sees each color exactly once. Multiplying words is the free
product of d copies of Z/2, and the tree is its Cayley graph.

Implements:
  - Word reduction, distance, geodesics, spheres and balls
  - EdgeAddr / HalfTree / End value types
  - The aperiodic ray (12)(13)(12)^2(13)(12)^3(13)... used by the
    end-stabilizer obstruction
  - Word and edge literal parsing ("1,2,1,3", "121", "-", "12:1")
"""

from dataclasses import dataclass
from typing import Iterator, Sequence

from config import MIN_TREE_DEGREE
from errors import DegreeError, ParseError, PreconditionError

Word = tuple[int, ...]
ROOT: Word = ()


# ─── Words ───────────────────────────────────────────────────────────────────

def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != w[i + 1] for i in range(len(w) - 1))


def validate_word(w: Sequence[int], d: int) -> Word:
    """Return w as a tuple, rejecting colors outside 1..d and unreduced words."""
    w = tuple(w)
    for c in w:
        if not 1 <= c <= d:
            raise DegreeError(f"color {c} outside 1..{d} in {format_word(w)}")
    if not is_reduced(w):
        raise PreconditionError(f"word {format_word(w)} not reduced")
    return w


def reduce_append(w: Word, c: int) -> Word:
    """Move from w along the edge colored c."""
    if w and w[-1] == c:
        return w[:-1]
    return w + (c,)


def multiply(w: Word, u: Sequence[int]) -> Word:
    """Reduced form of the concatenation w·u."""
    for c in u:
        w = reduce_append(w, c)
    return w


def reduce_word(u: Sequence[int]) -> Word:
    return multiply(ROOT, u)


def invert_word(w: Word) -> Word:
    # every letter is an involution
    return tuple(reversed(w))


def lcp_length(u: Word, v: Word) -> int:
    n = 0
    for a, b in zip(u, v):
        if a != b:
            break
        n += 1
    return n


def dist(u: Word, v: Word) -> int:
    return len(u) + len(v) - 2 * lcp_length(u, v)


def step_toward(u: Word, v: Word) -> int:
    """Color of the first edge on the geodesic from u to v (u != v)."""
    k = lcp_length(u, v)
    if len(u) > k:
        return u[-1]
    return v[len(u)]


def geodesic(u: Word, v: Word) -> list[Word]:
    """Vertices of the geodesic from u to v, both ends included."""
    path = [u]
    while u != v:
        u = reduce_append(u, step_toward(u, v))
        path.append(u)
    return path


def neighbors(w: Word, d: int) -> list[Word]:
    return [reduce_append(w, c) for c in range(1, d + 1)]


def sphere(n: int, d: int) -> Iterator[Word]:
    """All reduced words of length n in lexicographic order."""
    if n < 0:
        raise PreconditionError(f"sphere radius must be >= 0, got {n}")
    if n == 0:
        yield ROOT
        return
    for w in sphere(n - 1, d):
        for c in range(1, d + 1):
            if not w or w[-1] != c:
                yield w + (c,)


def sphere_size(n: int, d: int) -> int:
    return 1 if n == 0 else d * (d - 1) ** (n - 1)


def ball(center: Word, r: int, d: int) -> Iterator[Word]:
    """Vertices within distance r of center, nearest first."""
    for k in range(r + 1):
        for u in sphere(k, d):
            yield multiply(center, u)


# ─── Edges & Half-trees ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class EdgeAddr:
    """
    The unoriented edge {inner, inner·color}. Stored canonically with inner
    the endpoint nearer x0, so equal edges compare equal.
    """

    inner: Word
    color: int

    def __post_init__(self) -> None:
        if not is_reduced(self.inner):
            raise PreconditionError(f"edge endpoint {format_word(self.inner)} not reduced")
        if self.inner and self.inner[-1] == self.color:
            object.__setattr__(self, "inner", self.inner[:-1])

    @classmethod
    def between(cls, u: Word, v: Word) -> "EdgeAddr":
        if dist(u, v) != 1:
            raise PreconditionError(f"{format_word(u)} and {format_word(v)} are not adjacent")
        outer = u if len(u) > len(v) else v
        return cls(outer[:-1], outer[-1])

    @property
    def outer(self) -> Word:
        return self.inner + (self.color,)

    def endpoints(self) -> tuple[Word, Word]:
        return self.inner, self.outer

    def __str__(self) -> str:
        return f"{format_word(self.inner)}:{self.color}"


def edge_distance(e: EdgeAddr, f: EdgeAddr) -> int:
    """Minimum distance between an endpoint of e and an endpoint of f."""
    return min(dist(u, v) for u in e.endpoints() for v in f.endpoints())


@dataclass(frozen=True)
class HalfTree:
    """The component of T minus the open edge that contains the endpoint `side`."""

    edge: EdgeAddr
    side: Word

    def __post_init__(self) -> None:
        if self.side not in self.edge.endpoints():
            raise PreconditionError(
                f"half-tree side {format_word(self.side)} is not an endpoint of {self.edge}"
            )

    @property
    def is_outer(self) -> bool:
        return self.side == self.edge.outer

    @property
    def other_side(self) -> Word:
        return self.edge.inner if self.is_outer else self.edge.outer

    def opposite(self) -> "HalfTree":
        return HalfTree(self.edge, self.other_side)

    def contains(self, v: Word) -> bool:
        below = v[: len(self.edge.outer)] == self.edge.outer
        return below if self.is_outer else not below


def half_tree_contains(h: HalfTree, v: Word) -> bool:
    return h.contains(v)


# ─── Ends ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class End:
    """
    An eventually periodic end: the ray preperiod·period·period·... from x0.
    Canonical form (minimal preperiod, primitive period) is enforced on
    construction, so equal ends compare equal.
    """

    preperiod: Word
    period: Word

    def __post_init__(self) -> None:
        pre, per = tuple(self.preperiod), tuple(self.period)
        if not per:
            raise PreconditionError("end period must be nonempty")
        if not is_reduced(pre + per + per):
            raise PreconditionError(
                f"end {format_word(pre)}({format_word(per)})^inf is not a reduced ray"
            )
        for p in range(1, len(per) + 1):
            if len(per) % p == 0 and per == per[:p] * (len(per) // p):
                per = per[:p]
                break
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = (per[-1],) + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    def prefix(self, n: int) -> Word:
        """First n letters of the infinite word."""
        pre, per = self.preperiod, self.period
        if n <= len(pre):
            return pre[:n]
        rest = n - len(pre)
        reps = rest // len(per) + 1
        return pre + (per * reps)[:rest]

    def render(self) -> str:
        pre = format_word(self.preperiod) if self.preperiod else ""
        return f"{pre}({format_word(self.period)})^inf"

    def __str__(self) -> str:
        return self.render()


def ray_vertex(xi: End, n: int) -> Word:
    """The n-th vertex of the geodesic ray [x0, xi)."""
    if n < 0:
        raise PreconditionError(f"ray index must be >= 0, got {n}")
    return xi.prefix(n)


def hyp_ends_ray(n: int, d: int = MIN_TREE_DEGREE) -> Word:
    """First n letters of (12)(13)(12)^2(13)(12)^3(13)..., an aperiodic ray."""
    if d < MIN_TREE_DEGREE:
        raise DegreeError(f"hyp_ends_ray needs colors 1, 2, 3; degree is {d}")
    out: list[int] = []
    m = 1
    while len(out) < n:
        out.extend([1, 2] * m)
        out.extend([1, 3])
        m += 1
    return tuple(out[:n])


# ─── Literals ────────────────────────────────────────────────────────────────

def format_word(w: Sequence[int]) -> str:
    """Digits when every color is < 10, comma-separated otherwise; "-" for x0."""
    if not w:
        return "-"
    if all(c < 10 for c in w):
        return "".join(str(c) for c in w)
    return ",".join(str(c) for c in w)


def parse_word(text: str, d: int, allow_unreduced: bool = False) -> Word:
    """
    Parse "1,2,1,3", "1213" or "-" into a reduced word.

    Raises ParseError with the column of the offending letter.
    """
    stripped = text.strip()
    lead = len(text) - len(text.lstrip())
    if stripped in ("-", ""):
        return ROOT
    letters: list[tuple[int, int]] = []
    if "," in stripped:
        col = lead
        for token in stripped.split(","):
            body = token.strip()
            pos = col + (len(token) - len(token.lstrip())) + 1
            if not body.isdigit():
                raise ParseError(f"bad color {body!r}", column=pos)
            letters.append((int(body), pos))
            col += len(token) + 1
    else:
        for k, ch in enumerate(stripped):
            if not ch.isdigit():
                raise ParseError(f"bad color {ch!r}", column=lead + k + 1)
            letters.append((int(ch), lead + k + 1))
    word: list[int] = []
    for c, pos in letters:
        if not 1 <= c <= d:
            raise ParseError(f"color {c} outside 1..{d}", column=pos)
        if word and word[-1] == c and not allow_unreduced:
            raise ParseError("word not reduced", column=pos)
        word.append(c)
    return tuple(word) if not allow_unreduced else reduce_word(word)


def parse_edge(text: str, d: int) -> EdgeAddr:
    """Parse "<word>:<color>", e.g. "-:1" or ":1" for the edge {x0, 1}."""
    if ":" not in text:
        raise ParseError("edge must look like <word>:<color>", column=1)
    head, _, tail = text.rpartition(":")
    inner = parse_word(head, d)
    tail_col = len(head) + 2
    if not tail.strip().isdigit():
        raise ParseError(f"bad edge color {tail.strip()!r}", column=tail_col)
    color = int(tail.strip())
    if not 1 <= color <= d:
        raise ParseError(f"color {color} outside 1..{d}", column=tail_col)
    return EdgeAddr(inner, color)
