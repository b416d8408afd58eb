"""Covers of finite sets, refinement, flagification and maximal cliques."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .weights import SetMap


@dataclass(frozen=True)
class Cover:
    """A cover of ``ground`` by nonempty blocks, stored in canonical order.

    Blocks are frozensets sorted lexicographically by the positions of
    their members in ``ground``.  Build instances with :meth:`of`.
    """

    ground: tuple
    blocks: tuple

    @classmethod
    def of(cls, ground: Sequence, blocks: Iterable[Iterable]) -> "Cover":
        ground = tuple(ground)
        pos = {p: i for i, p in enumerate(ground)}
        uniq = set()
        for b in blocks:
            b = frozenset(b)
            if not b:
                raise ValueError("empty block")
            stray = b - pos.keys()
            if stray:
                raise ValueError(f"block members {sorted(map(repr, stray))} not in ground set")
            uniq.add(b)
        covered = set().union(*uniq) if uniq else set()
        if covered != set(ground):
            missing = [p for p in ground if p not in covered]
            raise ValueError(f"blocks do not cover {missing!r}")
        key = lambda b: sorted(pos[p] for p in b)
        return cls(ground, tuple(sorted(uniq, key=key)))

    def sorted_blocks(self) -> list[list]:
        pos = {p: i for i, p in enumerate(self.ground)}
        return [sorted(b, key=pos.__getitem__) for b in self.blocks]

    def __repr__(self):
        inner = ", ".join("{" + ",".join(map(str, b)) + "}" for b in self.sorted_blocks())
        return f"Cover({inner})"


def singletons(ground: Sequence) -> Cover:
    return Cover.of(ground, [[p] for p in ground])


def trivial(ground: Sequence) -> Cover:
    return Cover.of(ground, [ground])


def refines(c: Cover, d: Cover) -> bool:
    """Every block of ``c`` lies inside some block of ``d``."""
    if set(c.ground) != set(d.ground):
        raise ValueError("covers live on different ground sets")
    return all(any(a <= b for b in d.blocks) for a in c.blocks)


def preimage_cover(f: SetMap, d: Cover) -> Cover:
    if set(f.target) != set(d.ground):
        raise ValueError("map target does not match the cover's ground set")
    pre = [frozenset(x for x in f.source if f(x) in b) for b in d.blocks]
    return Cover.of(f.source, [b for b in pre if b])


def is_partition(c: Cover) -> bool:
    return sum(len(b) for b in c.blocks) == len(c.ground)


def is_nested_free(c: Cover) -> bool:
    return not any(a < b for a in c.blocks for b in c.blocks)


def cooccurrence_edges(c: Cover) -> set[frozenset]:
    return {frozenset(e) for b in c.blocks for e in itertools.combinations(b, 2)}


def maximal_cliques(vertices: Sequence, edges: Iterable[Iterable]) -> list[frozenset]:
    """All maximal cliques of a simple graph, isolated vertices as singletons.

    Bron-Kerbosch with Tomita pivoting over integer bitsets.  The result is
    sorted by the positions of clique members in ``vertices``.
    """
    vertices = tuple(vertices)
    pos = {v: i for i, v in enumerate(vertices)}
    nbr = [0] * len(vertices)
    for e in edges:
        x, y = tuple(e)
        if x == y:
            continue
        i, j = pos[x], pos[y]
        nbr[i] |= 1 << j
        nbr[j] |= 1 << i

    found: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            found.append(r)
            return
        pivot_pool = p | x
        # pivot maximizing |P & N(u)|
        u = max(_bits(pivot_pool), key=lambda k: bin(p & nbr[k]).count("1"))
        for v in _bits(p & ~nbr[u]):
            bit = 1 << v
            expand(r | bit, p & nbr[v], x & nbr[v])
            p &= ~bit
            x |= bit

    if vertices:
        expand(0, (1 << len(vertices)) - 1, 0)
    cliques = [list(_bits(r)) for r in found]
    cliques.sort()
    return [frozenset(vertices[k] for k in c) for c in cliques]


def _bits(mask: int):
    k = 0
    while mask:
        if mask & 1:
            yield k
        mask >>= 1
        k += 1


def flagify(c: Cover) -> Cover:
    """The minimal non-nested flag cover refined by ``c``.

    The flag closure of the complex spanned by ``c`` is the clique complex of
    its 1-skeleton, so the answer is the set of maximal cliques of the
    co-occurrence graph.
    """
    return Cover.of(c.ground, maximal_cliques(c.ground, cooccurrence_edges(c)))


def is_flag(c: Cover) -> bool:
    """Non-nested and equal to the maximal cliques of its co-occurrence graph."""
    return flagify(c) == c
