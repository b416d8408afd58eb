"""Sieves: threshold-indexed flag covers, and the sieving functors R, SL, Cech.

A sieve is stored as its breakpoints ``0 = t_0 < ... < t_k`` together with
the cover valid on ``[t_i, t_{i+1})``; the last cover is the trivial one.
Breakpoints at which nothing changes are pruned, so two sieves are equal
exactly when they agree as functions of ``t``.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .covers import (
    Cover,
    is_flag,
    is_partition,
    maximal_cliques,
    preimage_cover,
    refines,
    singletons,
    trivial,
)
from .weights import SetMap, WeightSpace, leq, validate


@dataclass(frozen=True)
class Sieve:
    ground: tuple
    breakpoints: tuple
    covers: tuple

    @classmethod
    def from_levels(cls, ground: Sequence, levels: Iterable[tuple]) -> "Sieve":
        """Canonical sieve from ``(t, cover)`` pairs; checks the sieve axioms."""
        ground = tuple(ground)
        levels = sorted(levels, key=lambda tc: tc[0])
        if not levels:
            raise ValueError("a sieve needs at least one level")
        if levels[0][0] != 0:
            raise ValueError("the first breakpoint must be 0")
        ts, covers = [], []
        for t, c in levels:
            if tuple(c.ground) != ground:
                c = Cover.of(ground, c.blocks)
            if ts and t == ts[-1]:
                raise ValueError(f"duplicate breakpoint {t!r}")
            if not is_flag(c):
                raise ValueError(f"cover at t={t} is not a non-nested flag cover")
            if covers and not refines(covers[-1], c):
                raise ValueError(f"cover at t={t} is not refined by the previous one")
            if covers and c == covers[-1]:
                continue
            ts.append(t)
            covers.append(c)
        if covers[-1] != trivial(ground):
            raise ValueError("the final cover must be the trivial cover")
        return cls(ground, tuple(ts), tuple(covers))

    def at(self, t) -> Cover:
        if t < 0:
            raise ValueError("sieves are evaluated at t >= 0")
        return self.covers[bisect.bisect_right(self.breakpoints, t) - 1]

    __call__ = at

    @property
    def is_proper(self) -> bool:
        return self.covers[0] == singletons(self.ground)

    def levels(self):
        return list(zip(self.breakpoints, self.covers))


def _thresholds(u: WeightSpace) -> list:
    return sorted({0, *u.values()})


def threshold_sieve(u: WeightSpace, edge_weight: np.ndarray) -> Sieve:
    """Maximal cliques of ``{xy : edge_weight[x, y] <= t}`` at each breakpoint."""
    pairs = list(u.pairs())
    levels = []
    for t in _thresholds(u):
        edges = [(u.points[i], u.points[j]) for i, j in pairs if edge_weight[i, j] <= t]
        levels.append((t, Cover.of(u.points, maximal_cliques(u.points, edges))))
    return Sieve.from_levels(u.points, levels)


def rips_sieve(u: WeightSpace) -> Sieve:
    return threshold_sieve(u, u.w)


def cech_weight(u: WeightSpace) -> np.ndarray:
    """``min_z max(u[x,z], u[z,y])`` with ``z`` ranging over all points."""
    w = u.w
    return np.minimum.reduce(np.maximum(w[:, :, None], w[None, :, :]), axis=1)


def cech_sieve(u: WeightSpace) -> Sieve:
    return threshold_sieve(u, cech_weight(u))


def sl_sieve(u: WeightSpace) -> Sieve:
    """Connected components of the threshold graph, merged Kruskal-style."""
    parent = list(range(u.n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def partition():
        groups = {}
        for i, p in enumerate(u.points):
            groups.setdefault(find(i), []).append(p)
        return Cover.of(u.points, groups.values())

    edges = sorted(u.pairs(), key=lambda ij: u.w[ij])
    levels = []
    for t, group in itertools.groupby(edges, key=lambda ij: u.w[ij]):
        for i, j in group:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
        levels.append((t, partition()))
    if not levels or levels[0][0] != 0:
        levels.insert(0, (0, singletons(u.points)))
    return Sieve.from_levels(u.points, levels)


def sieve_to_weight(s: Sieve) -> WeightSpace:
    """The functor J: first threshold at which two points share a block."""
    n = len(s.ground)
    rows = [[0] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        x, y = s.ground[i], s.ground[j]
        for t, c in zip(s.breakpoints, s.covers):
            if any(x in b and y in b for b in c.blocks):
                rows[i][j] = rows[j][i] = t
                break
    return validate(rows, s.ground)


def is_sieve_morphism(f: SetMap, s: Sieve, s2: Sieve) -> bool:
    """``s_t`` refines ``f^{-1}(s2_t)`` at every breakpoint of either sieve."""
    if set(f.source) != set(s.ground) or set(f.target) != set(s2.ground):
        raise ValueError("map does not connect the sieves' ground sets")
    for t in sorted(set(s.breakpoints) | set(s2.breakpoints)):
        if not refines(s.at(t), preimage_cover(f, s2.at(t))):
            return False
    return True


def is_stationary_sample(method: Callable[[WeightSpace], Sieve], u: WeightSpace) -> bool:
    """Whether ``J o method`` is contractive and idempotent at ``u``."""
    v = sieve_to_weight(method(u))
    return leq(v, u) and sieve_to_weight(method(v)) == v


def all_partitions(s: Sieve) -> bool:
    return all(is_partition(c) for c in s.covers)


def iterate_to_stable(method: Callable[[WeightSpace], Sieve], u: WeightSpace, max_iter: int = 100):
    """Apply ``J o method`` until the weight stops changing.

    Returns ``(weight, rounds)`` where ``rounds`` counts applications that
    changed the weight.  Raises ``RuntimeError`` after ``max_iter`` rounds.
    """
    for rounds in range(max_iter + 1):
        v = sieve_to_weight(method(u))
        if v == u:
            return u, rounds
        u = v
    raise RuntimeError(f"no fixed point after {max_iter} rounds")
