"""Seeded random instances: weights, metrics, maps, partitions, sieves."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .covers import Cover, maximal_cliques
from .sieves import Sieve
from .weights import ASpace, SetMap, WeightSpace, max2, pullback, validate


def labels(n: int) -> tuple:
    return tuple(range(1, n + 1))


def random_weight(rng, n: int, exact: bool = False, low=1, high=10, denominator: int = 2,
                  zero_prob: float = 0.0) -> WeightSpace:
    """Symmetric random weights.

    Exact mode draws multiples of ``1/denominator`` in ``[low, high]`` (ties
    are common, which exercises the tie paths); float mode draws uniformly.
    """
    vals = np.zeros((n, n), dtype=object if exact else float)
    for i in range(n):
        for j in range(i + 1, n):
            if zero_prob and rng.random() < zero_prob:
                v = Fraction(0) if exact else 0.0
            elif exact:
                v = Fraction(int(rng.integers(low * denominator, high * denominator + 1)), denominator)
            else:
                v = float(rng.uniform(low, high))
            vals[i, j] = vals[j, i] = v
    if exact:
        for i in range(n):
            vals[i, i] = Fraction(0)
    return validate(vals, labels(n))


def random_metric(rng, n: int, exact: bool = False, **kw) -> WeightSpace:
    from .projections import path_metric

    u = random_weight(rng, n, exact, **kw)
    return u.with_matrix(path_metric(u.w))


def random_small_metric(rng, n: int) -> WeightSpace:
    """Path-metric closure of weights in {1, 2}; A-spaces show up often."""
    return random_metric(rng, n, exact=True, low=1, high=2, denominator=1)


def random_ultrametric(rng, n: int, exact: bool = True) -> WeightSpace:
    from .projections import single_linkage_ultrametric

    u = random_weight(rng, n, exact)
    return u.with_matrix(single_linkage_ultrametric(u.w))


def extend_by_diameter_point(u: WeightSpace, label="inf") -> WeightSpace:
    """Add one point at distance ``diam(u)`` from everything: always an A-space."""
    n = u.n
    d = max(u.w.max(), 0) if n else 0
    w = np.zeros((n + 1, n + 1), dtype=u.w.dtype)
    w[:n, :n] = u.w
    w[n, :n] = w[:n, n] = d
    if u.exact:
        w[n, n] = Fraction(0)
    return validate(w, (*u.points, label))


def random_aspace(rng, n: int, exact: bool = True) -> WeightSpace:
    """A random A-space on ``n`` points: a random metric on ``n - 1`` points, extended."""
    return extend_by_diameter_point(random_metric(rng, n - 1, exact), label=n)


def random_tree_metric(rng, n: int, extra_nodes: int = 3) -> WeightSpace:
    """Distances between ``n`` distinct nodes of a random tree with integer edge lengths."""
    k = n + extra_nodes
    adj = {0: []}
    for v in range(1, k):
        p = int(rng.integers(0, v))
        length = Fraction(int(rng.integers(1, 6)))
        adj.setdefault(v, []).append((p, length))
        adj[p].append((v, length))
    chosen = [int(x) for x in rng.choice(k, size=n, replace=False)]
    rows = []
    for s in chosen:
        dist = {s: Fraction(0)}
        stack = [s]
        while stack:
            x = stack.pop()
            for y, ln in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + ln
                    stack.append(y)
        rows.append([dist[t] for t in chosen])
    return validate(rows, labels(n))


def random_map(rng, source, target, surjective: bool = False) -> SetMap:
    source, target = tuple(source), tuple(target)
    if surjective:
        if len(target) > len(source):
            raise ValueError("no surjection onto a larger set")
        order = list(rng.permutation(len(source)))
        images = [None] * len(source)
        for k, i in enumerate(order):
            images[i] = target[k] if k < len(target) else target[int(rng.integers(len(target)))]
        return SetMap(source, target, tuple(images))
    return SetMap(source, target, tuple(target[int(rng.integers(len(target)))] for _ in source))


def random_partition(rng, points) -> tuple:
    points = tuple(points)
    k = int(rng.integers(1, len(points) + 1))
    tags = rng.integers(0, k, size=len(points))
    classes = {}
    for p, t in zip(points, tags):
        classes.setdefault(int(t), []).append(p)
    return tuple(tuple(c) for c in classes.values())


def random_sieve(rng, n: int, exact: bool = True, proper: bool | None = None) -> Sieve:
    """Grow a random graph edge-batch by edge-batch; record its clique covers.

    Batches get increasing random thresholds.  With ``proper=False`` the
    first batch is already present at ``t = 0``.
    """
    pts = labels(n)
    pairs = [(pts[i], pts[j]) for i in range(n) for j in range(i + 1, n)]
    order = list(rng.permutation(len(pairs)))
    if proper is None:
        proper = bool(rng.random() < 0.7)
    levels, edges, t = [], [], Fraction(0) if exact else 0.0
    pos = 0
    if not proper and pairs:
        take = int(rng.integers(1, len(pairs) + 1))
        edges += [pairs[k] for k in order[:take]]
        pos = take
    levels.append((t, Cover.of(pts, maximal_cliques(pts, edges))))
    while pos < len(pairs):
        take = int(rng.integers(1, 4))
        edges += [pairs[k] for k in order[pos:pos + take]]
        pos += take
        step = Fraction(int(rng.integers(1, 7)), int(rng.integers(1, 4))) if exact else float(rng.uniform(0.1, 3))
        t = t + step
        levels.append((t, Cover.of(pts, maximal_cliques(pts, edges))))
    return Sieve.from_levels(pts, levels)


def nonexpansive_instance(rng, u: WeightSpace, kind=None):
    """A random non-expansive ``f: (X, u') -> (Y, v)`` built around ``u``.

    ``v`` is random on ``Y`` and ``u' = max(u, f^* v)``, so ``f`` is
    non-expansive by construction.  Returns ``(f, u', v)``.
    """
    from .projections import Quotient

    exact = u.exact
    if isinstance(kind, Quotient):
        # class-preserving self-map of X
        cls = kind.classes
        images = {}
        for c in cls:
            dest = cls[int(rng.integers(len(cls)))]
            for p in c:
                images[p] = dest[int(rng.integers(len(dest)))]
        f = SetMap.from_dict(u.points, u.points, images)
        v = random_weight(rng, u.n, exact).reorder(range(1, u.n + 1))
        v = validate(v.w, u.points)
    else:
        surjective = isinstance(kind, ASpace) or _has_aspace(kind)
        m = int(rng.integers(1, u.n + 1)) if surjective else int(rng.integers(1, 9))
        target = tuple(f"y{k}" for k in range(m))
        f = random_map(rng, u.points, target, surjective=surjective)
        v = validate(random_weight(rng, m, exact).w, target)
    return f, max2(u, pullback(f, v)), v


def _has_aspace(kind) -> bool:
    kinds = getattr(kind, "kinds", ())
    return any(isinstance(k, ASpace) or _has_aspace(k) for k in kinds)
