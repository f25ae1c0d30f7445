"""
orbits.py — Orbits of the vertex stabilizer K = U(F)_x0 on spheres.

K moves a word c1...cn to d1...dn exactly when d1 ∈ F·c1 and every step
(c_k, c_{k+1}) -> (d_k, d_{k+1}) is realized by some element of F. So the
lexicographically least word of an orbit is built greedily, a word is
canonical iff c1 is least in its F-orbit and each c_{k+1} is least in its
F_{c_k}-orbit, and orbit counts follow from a dynamic program over the
last letter.

Implements:
  - stabilizer_orbits_on_sphere / orbit_representative (chain rule)
  - union_find_orbits (closure under generating moves, used as an oracle)
  - boundary_orbit_growth and its TSV table
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

import pandas as pd

from errors import PreconditionError
from permgroup import PermGroup, is_2transitive, orbits, point_stabilizer
from tree import ROOT, Word, format_word, sphere, sphere_size

logger = logging.getLogger(__name__)


# ─── Chain Rule ──────────────────────────────────────────────────────────────

def _orbit_minima(F: PermGroup) -> dict[int, set[int]]:
    """For each color c, the least element of every F_c-orbit on the other colors."""
    d = F.degree
    minima = {}
    for c in range(1, d + 1):
        rest = [x for x in range(1, d + 1) if x != c]
        minima[c] = {orb[0] for orb in orbits(point_stabilizer(F, c), rest)}
    return minima


def orbit_representative(F: PermGroup, w: Word) -> Word:
    """Lexicographically least word in the K-orbit of w."""
    if not w:
        return ROOT
    rep = [min(p(w[0]) for p in F.elements)]
    for k in range(1, len(w)):
        prev_src, prev_dst = w[k - 1], rep[-1]
        rep.append(min(p(w[k]) for p in F.elements if p(prev_src) == prev_dst))
    return tuple(rep)


def is_canonical(F: PermGroup, w: Word) -> bool:
    return orbit_representative(F, w) == w


def _canonical_words(F: PermGroup, n: int) -> list[Word]:
    if n == 0:
        return [ROOT]
    first = {orb[0] for orb in orbits(F, range(1, F.degree + 1))}
    minima = _orbit_minima(F)
    words = [(c,) for c in sorted(first)]
    for _ in range(n - 1):
        words = [w + (c,) for w in words for c in sorted(minima[w[-1]])]
    return words


def count_sphere_orbits(F: PermGroup, n: int) -> int:
    """Number of K-orbits on the sphere of radius n, by DP on the last letter."""
    if n < 0:
        raise PreconditionError(f"radius must be >= 0, got {n}")
    if n == 0:
        return 1
    minima = _orbit_minima(F)
    counts = {orb[0]: 1 for orb in orbits(F, range(1, F.degree + 1))}
    for _ in range(n - 1):
        nxt: dict[int, int] = {}
        for c, k in counts.items():
            for c2 in minima[c]:
                nxt[c2] = nxt.get(c2, 0) + k
        counts = nxt
    return sum(counts.values())


@dataclass
class SphereOrbits:
    """K-orbits on the sphere of radius n."""

    radius: int
    representatives: list[Word]
    count: int
    group: Optional[PermGroup] = field(default=None, repr=False, compare=False)

    def partition(self) -> list[list[Word]]:
        """Every word of the sphere grouped by orbit, ordered by representative."""
        groups: dict[Word, list[Word]] = {rep: [] for rep in self.representatives}
        for w in sphere(self.radius, self.group.degree):
            groups[orbit_representative(self.group, w)].append(w)
        return [groups[rep] for rep in self.representatives]


def stabilizer_orbits_on_sphere(F: PermGroup, n: int) -> SphereOrbits:
    if n < 0:
        raise PreconditionError(f"radius must be >= 0, got {n}")
    reps = _canonical_words(F, n)
    return SphereOrbits(n, reps, len(reps), F)


# ─── Union-Find Oracle ───────────────────────────────────────────────────────

class UnionFind:
    def __init__(self, items: Iterable[Word]):
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in self.parent}

    def find(self, x: Word) -> Word:
        y = self.parent[x]
        if self.parent[y] != y:
            y = self.parent[x] = self.find(y)
        return y

    def union(self, x: Word, y: Word) -> None:
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x
        del self.rank[y]

    def reps(self) -> set[Word]:
        return set(self.rank)

    def __len__(self) -> int:
        return len(self.rank)


def union_find_orbits(F: PermGroup, n: int) -> list[list[Word]]:
    """
    Orbits of K on the sphere by closing under generating moves: apply
    π ∈ F to every letter, or keep a prefix c1..ck and apply π ∈ F_{ck} to
    the letters after it.
    """
    words = list(sphere(n, F.degree))
    uf = UnionFind(words)
    stabs = {c: point_stabilizer(F, c).elements for c in range(1, F.degree + 1)}
    for w in words:
        for p in F.elements:
            uf.union(w, tuple(p(c) for c in w))
        for k in range(1, n):
            head = w[:k]
            for p in stabs[w[k - 1]]:
                uf.union(w, head + tuple(p(c) for c in w[k:]))
    parts: dict[Word, list[Word]] = {}
    for w in words:
        parts.setdefault(uf.find(w), []).append(w)
    return sorted(sorted(part) for part in parts.values())


# ─── Growth ──────────────────────────────────────────────────────────────────

@dataclass
class OrbitGrowth:
    counts: list[int]                    # o_1..o_N
    verdict: str                         # "bounded" | "growing"
    agrees: bool                         # verdict matches is_2transitive(F)
    degree: int = 0

    def __repr__(self) -> str:
        seq = ",".join(str(k) for k in self.counts)
        return f"OrbitGrowth(o={seq}, {self.verdict}, agrees={self.agrees})"


def boundary_orbit_growth(F: PermGroup, N: int) -> OrbitGrowth:
    """
    o_n for n = 1..N. Bounded iff the last two counts agree; the verdict is
    cross-checked against 2-transitivity of F.
    """
    if N < 2:
        raise PreconditionError(f"growth table needs N >= 2, got {N}")
    counts = [count_sphere_orbits(F, n) for n in range(1, N + 1)]
    verdict = "bounded" if counts[-1] == counts[-2] else "growing"
    agrees = (verdict == "bounded") == is_2transitive(F)
    if not agrees:
        logger.warning(f"orbit growth {counts} of {F.label()} disagrees with 2-transitivity")
    return OrbitGrowth(counts, verdict, agrees, F.degree)


def growth_frame(growth: OrbitGrowth) -> pd.DataFrame:
    """Columns n, o_n, |S_n|."""
    rows = [
        {"n": n, "o_n": o, "|S_n|": sphere_size(n, growth.degree)}
        for n, o in enumerate(growth.counts, start=1)
    ]
    return pd.DataFrame(rows, columns=["n", "o_n", "|S_n|"])


def growth_tsv(growth: OrbitGrowth) -> str:
    return growth_frame(growth).to_csv(sep="\t", index=False)


def describe_orbits(orb: SphereOrbits) -> str:
    reps = " ".join(format_word(w) for w in orb.representatives)
    return f"radius={orb.radius} orbits={orb.count} reps={reps}"
