"""Canonical projections onto clustering domains.

``project(u, kind)`` returns the largest member of the domain lying below
``u`` (the pointwise supremum of the domain's down-set at ``u``).  Every
routine here is value-determined; no tie-breaking is involved.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._numeric import TOL, default_tol, exact_scalar_like, is_exact
from .weights import (
    INF,
    ASpace,
    IntegerGrid,
    Metric,
    QMetric,
    RhoInframetric,
    SetMap,
    Ultrametric,
    WeightSpace,
    leq,
    max2,
    pullback,
    satisfies,
)


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, last: WeightSpace, iterations: int):
        super().__init__(message)
        self.last = last
        self.iterations = iterations


@dataclass(frozen=True)
class PathMetric:
    pass


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class Discretize:
    """Round entries down to a grid, optionally closing under shortest paths.

    The grid is either all multiples of ``step`` or ``{0} | levels``.
    """

    step: object = None
    levels: tuple = None
    path_metric: bool = False

    def __post_init__(self):
        if (self.step is None) == (self.levels is None):
            raise ValueError("give exactly one of step or levels")
        if self.step is not None and not self.step > 0:
            raise ValueError("grid step must be positive")
        if self.levels is not None:
            lv = tuple(self.levels)
            if not lv or any(x <= 0 for x in lv) or list(lv) != sorted(set(lv)):
                raise ValueError("grid levels must be positive and strictly increasing")
            object.__setattr__(self, "levels", lv)


@dataclass(frozen=True)
class Quotient:
    """Metrics vanishing inside each class of ``classes`` (a partition)."""

    classes: tuple

    def __post_init__(self):
        cl = tuple(tuple(c) for c in self.classes)
        flat = [p for c in cl for p in c]
        if any(not c for c in cl) or len(flat) != len(set(flat)):
            raise ValueError("classes must be nonempty and pairwise disjoint")
        object.__setattr__(self, "classes", cl)

    @property
    def points(self) -> set:
        return {p for c in self.classes for p in c}

    def class_of(self) -> dict:
        return {p: k for k, c in enumerate(self.classes) for p in c}


@dataclass(frozen=True)
class Intersection:
    kinds: tuple
    tol: float = 0.0
    max_iter: int = 100

    def __post_init__(self):
        object.__setattr__(self, "kinds", tuple(self.kinds))
        if not self.kinds:
            raise ValueError("intersection of no domains")


# -- single-domain routines --------------------------------------------------


def path_metric(w: np.ndarray) -> np.ndarray:
    """Floyd-Warshall shortest paths; works on exact and float arrays."""
    d = np.array(w, copy=True)
    for k in range(d.shape[0]):
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    return d


def minimax_matrix(w: np.ndarray) -> np.ndarray:
    """Floyd-Warshall in the (min, max) semiring: smallest bottleneck path."""
    d = np.array(w, copy=True)
    for k in range(d.shape[0]):
        d = np.minimum(d, np.maximum(d[:, k, None], d[None, k, :]))
    return d


def minimax_path(u: WeightSpace, x, y):
    """Least possible largest step over all paths from ``x`` to ``y``."""
    return minimax_matrix(u.w)[u.index[x], u.index[y]]


def single_linkage_ultrametric(w: np.ndarray) -> np.ndarray:
    """Maximal ultrametric below ``w`` via one Kruskal pass.

    When two components merge along an edge of weight ``t``, every cross
    pair gets value ``t``.
    """
    n = w.shape[0]
    out = np.array(w, copy=True)
    members = {i: [i] for i in range(n)}
    root = list(range(n))
    for i, j in sorted(itertools.combinations(range(n), 2), key=lambda ij: w[ij]):
        ri, rj = root[i], root[j]
        if ri == rj:
            continue
        t = w[i, j]
        a, b = members[ri], members[rj]
        for x in a:
            for y in b:
                out[x, y] = out[y, x] = t
        if len(a) < len(b):
            ri, rj, a, b = rj, ri, b, a
        a.extend(b)
        for y in b:
            root[y] = ri
        del members[rj]
    return out


def ultrametric_by_splits(u: WeightSpace, x, y):
    """Max over bipartitions separating ``x`` from ``y`` of the least cross weight.

    Exponential brute force, kept as an independent check on ``project``.
    """
    i, j = u.index[x], u.index[y]
    if i == j:
        return u.w[i, i]
    others = [k for k in range(u.n) if k not in (i, j)]
    best = None
    for r in range(len(others) + 1):
        for extra in itertools.combinations(others, r):
            side = [i, *extra]
            rest = [k for k in range(u.n) if k not in side]
            cross = min(u.w[a, b] for a in side for b in rest)
            if best is None or cross > best:
                best = cross
    return best


def qmetric_projection(w: np.ndarray, q) -> np.ndarray:
    if q is INF:
        return single_linkage_ultrametric(w)
    if q == 1:
        return path_metric(w)
    p = float(q)
    return path_metric(np.asarray(w, dtype=float) ** p) ** (1.0 / p)


def discretize(w: np.ndarray, kind: Discretize, tol=None) -> np.ndarray:
    t = default_tol(w, tol)
    out = np.empty_like(w)
    if kind.step is not None:
        step = exact_scalar_like(w, kind.step)
        for idx, x in np.ndenumerate(w):
            out[idx] = (math.floor(x / step) if is_exact(w) else math.floor((x + t) / step)) * step
        return out
    levels = [exact_scalar_like(w, v) for v in kind.levels]
    zero = Fraction(0) if is_exact(w) else 0.0
    for idx, x in np.ndenumerate(w):
        below = [lv for lv in levels if lv <= x + t]
        out[idx] = below[-1] if below else zero
    return out


def inframetric_repair(w: np.ndarray, rho, tol=None) -> np.ndarray:
    """Largest rho-inframetric below ``w``.

    Each sweep lowers every violating entry to ``rho * min_y max(w_xy, w_yz)``.
    That value bounds every rho-inframetric below the current matrix, so the
    sweeps never undershoot the projection; they stop once nothing violates.
    """
    rho = exact_scalar_like(w, rho)
    t = default_tol(w, tol)
    d = np.array(w, copy=True)
    while True:
        bound = rho * np.minimum.reduce(np.maximum(d[:, :, None], d[None, :, :]), axis=1)
        bad = d > bound + t
        if not bad.any():
            return d
        d[bad] = bound[bad]


def aspace_projection(w: np.ndarray, tol=None) -> np.ndarray:
    """Lower the diameter pairs to the next value down until they cover all points."""
    t = default_tol(w, tol)
    d = np.array(w, copy=True)
    while True:
        top = d.max()
        far = d >= top - t
        if d.shape[0] == 0 or far.any(axis=1).all():
            return d
        below = d[d < top - t]
        d[far] = below.max()


def quotient_projection(w: np.ndarray, points: Sequence, kind: Quotient) -> np.ndarray:
    """Zero the entries inside each class, then close under shortest paths."""
    if kind.points != set(points):
        raise ValueError("quotient classes do not partition the weight space's points")
    cls = kind.class_of()
    d = np.array(w, copy=True)
    zero = d.dtype.type(0) if d.dtype != object else Fraction(0)
    for i, x in enumerate(points):
        for j, y in enumerate(points):
            if cls[x] == cls[y]:
                d[i, j] = zero
    return path_metric(d)


def quotient_metric(u: WeightSpace, kind: Quotient) -> WeightSpace:
    """The quotient metric on the set of classes, by the alternating-path formula.

    Class ``A`` to class ``B`` is the infimum over chains that jump inside
    classes for free and pay ``u`` between consecutive classes.  Classes are
    labelled by the tuple of their members.
    """
    from .weights import _trusted

    cl = kind.classes
    m = len(cl)
    d = np.empty((m, m), dtype=u.w.dtype)
    for a in range(m):
        for b in range(m):
            if a == b:
                d[a, b] = u.w[0, 0]
            else:
                d[a, b] = min(u[x, y] for x in cl[a] for y in cl[b])
    return _trusted(cl, path_metric(d))


def quotient_map(u: WeightSpace, kind: Quotient) -> SetMap:
    lookup = {p: c for c in kind.classes for p in c}
    return SetMap(u.points, kind.classes, tuple(lookup[p] for p in u.points))


# -- dispatch ------------------------------------------------------------------


def project(u: WeightSpace, kind, tol=None) -> WeightSpace:
    w = u.w
    if isinstance(kind, Identity):
        return u
    if isinstance(kind, Ultrametric):
        return u.with_matrix(single_linkage_ultrametric(w))
    if isinstance(kind, (PathMetric, Metric)):
        return u.with_matrix(path_metric(w))
    if isinstance(kind, QMetric):
        return u.with_matrix(qmetric_projection(w, kind.q))
    if isinstance(kind, Discretize):
        d = discretize(w, kind, tol)
        if kind.path_metric:
            # alternate floor and shortest paths; both only lower entries
            while True:
                nxt = discretize(path_metric(d), kind, tol)
                if np.all(nxt == d):
                    break
                d = nxt
        return u.with_matrix(d)
    if isinstance(kind, RhoInframetric):
        return u.with_matrix(inframetric_repair(w, kind.rho, tol))
    if isinstance(kind, ASpace):
        return u.with_matrix(aspace_projection(w, tol))
    if isinstance(kind, Quotient):
        return u.with_matrix(quotient_projection(w, u.points, kind))
    if isinstance(kind, Intersection):
        return project_intersection(u, kind.kinds, kind.tol, kind.max_iter)
    raise TypeError(f"no projection for {kind!r}")


@dataclass(frozen=True)
class IntersectionRun:
    weight: WeightSpace
    rounds: int
    converged: bool
    last_change: object


def run_intersection(u: WeightSpace, kinds: Sequence, tol=0.0, max_iter: int = 100) -> IntersectionRun:
    """Cycle through the projections until a full round changes nothing.

    The iterates decrease and stay above the projection onto the
    intersection, so a stable iterate is that projection.
    """
    cur = u
    change = None
    for it in range(1, max_iter + 1):
        nxt = cur
        for k in kinds:
            nxt = project(nxt, k)
        change = max((abs(a - b) for a, b in zip(nxt.w.flat, cur.w.flat)), default=0)
        cur = nxt
        if change <= tol:
            return IntersectionRun(cur, it, True, change)
    return IntersectionRun(cur, max_iter, False, change)


def project_intersection(u: WeightSpace, kinds: Sequence, tol=0.0, max_iter: int = 100) -> WeightSpace:
    run = run_intersection(u, kinds, tol, max_iter)
    if not run.converged:
        raise ConvergenceError(f"intersection did not stabilise in {max_iter} rounds", run.weight, max_iter)
    return run.weight


def in_domain(u: WeightSpace, kind, tol=None) -> bool:
    """Membership in the image of ``project(., kind)``."""
    if isinstance(kind, Identity):
        return True
    if isinstance(kind, PathMetric):
        return satisfies(u, Metric(), tol)
    if isinstance(kind, Discretize):
        if kind.step is not None:
            ok = satisfies(u, IntegerGrid(kind.step), tol)
        else:
            t = default_tol(u.w, tol)
            levels = [0, *kind.levels]
            ok = all(any(abs(x - lv) <= t for lv in levels) for x in u.w.flat)
        return ok and (not kind.path_metric or satisfies(u, Metric(), tol))
    if isinstance(kind, Quotient):
        if not satisfies(u, Metric(), tol):
            return False
        t = default_tol(u.w, tol)
        return all(abs(u[x, y]) <= t for c in kind.classes for x in c for y in c)
    if isinstance(kind, Intersection):
        return all(in_domain(u, k, tol) for k in kind.kinds)
    return satisfies(u, kind, tol)


# -- law checking --------------------------------------------------------------


@dataclass
class LawReport:
    kind: object
    instances: int = 0
    maps: int = 0
    idempotency: list = field(default_factory=list)
    contraction: list = field(default_factory=list)
    membership: list = field(default_factory=list)
    monotonicity: list = field(default_factory=list)
    maximality: list = field(default_factory=list)
    functoriality: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.idempotency or self.contraction or self.membership
                    or self.monotonicity or self.maximality or self.functoriality)

    def summary(self) -> str:
        parts = [f"{name}={len(getattr(self, name))}" for name in
                 ("idempotency", "contraction", "membership", "monotonicity", "maximality", "functoriality")]
        return f"{self.kind!r}: {self.instances} instances, {self.maps} maps, violations " + ", ".join(parts)


def _close(a: WeightSpace, b: WeightSpace, tol) -> bool:
    return leq(a, b, tol) and leq(b, a, tol)


def check_projection_laws(kind, suite: Sequence[WeightSpace], n_maps: int = 100, seed: int = 0,
                          epsilon=1e-6, tol=None) -> LawReport:
    """Check idempotency, contraction, monotonicity, maximality and functoriality.

    Monotonicity compares each ``u`` with ``u`` plus random nonnegative
    noise.  Maximality raises each entry of ``P(u)`` by ``epsilon`` and
    requires the result to leave the domain or exceed ``u``.  Functoriality
    draws ``n_maps`` random non-expansive maps; the map class follows the
    domain: surjective maps for A-spaces (pullbacks along other maps leave
    the domain) and class-preserving self-maps for quotients.
    """
    from .generators import nonexpansive_instance

    rng = np.random.default_rng(seed)
    rep = LawReport(kind)
    for k, u in enumerate(suite):
        p = project(u, kind)
        # q-metric projections leave exact arithmetic for 1 < q < inf
        t = tol if tol is not None else (0 if u.exact and p.exact else TOL)
        rep.instances += 1
        if not _close(project(p, kind), p, t):
            rep.idempotency.append(k)
        if not leq(p, u, t):
            rep.contraction.append(k)
        if not in_domain(p, kind, tol):
            rep.membership.append(k)
        noise = _noise(rng, u)
        if not leq(p, project(max2(u, u.with_matrix(u.w + noise)), kind), t):
            rep.monotonicity.append(k)
        eps = Fraction(1, 10**6) if p.exact else epsilon
        for i, j in u.pairs():
            raised = np.array(p.w, copy=True)
            raised[i, j] = raised[j, i] = raised[i, j] + eps
            r = p.with_matrix(raised)
            if leq(r, u, t) and in_domain(r, kind, tol):
                rep.maximality.append((k, i, j))
                break
    for m in range(n_maps if suite else 0):
        u = suite[m % len(suite)]
        f, src, tgt = nonexpansive_instance(rng, u, kind)
        rep.maps += 1
        ps = project(src, kind)
        t = tol if tol is not None else (0 if src.exact and ps.exact else TOL)
        if not leq(pullback(f, project(tgt, kind)), ps, t):
            rep.functoriality.append(m)
    return rep


def _noise(rng, u: WeightSpace) -> np.ndarray:
    """Symmetric nonnegative perturbation with zero diagonal."""
    n = u.n
    if u.exact:
        raw = np.triu(rng.integers(0, 3, size=(n, n)), 1)
        out = np.empty((n, n), dtype=object)
        for (i, j), v in np.ndenumerate(raw + raw.T):
            out[i, j] = Fraction(int(v), 2)
        return out
    raw = np.triu(rng.random((n, n)), 1)
    return raw + raw.T
