"""Finite weight spaces, set maps between them, and domain predicates.

A weight space is a finite labelled set with a symmetric, nonnegative
dissimilarity vanishing on the diagonal.  Nothing here requires the
triangle inequality; ``satisfies(u, Metric())`` checks it on demand.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from ._numeric import TOL, as_matrix, default_tol, exact_scalar_like, is_exact, normalize


class ValidationError(ValueError):
    """Raised when a matrix is not a weight. ``problems`` lists each defect."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass(frozen=True, eq=False)
class WeightSpace:
    points: tuple
    w: np.ndarray

    @cached_property
    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def exact(self) -> bool:
        return is_exact(self.w)

    def __getitem__(self, pair):
        x, y = pair
        return self.w[self.index[x], self.index[y]]

    def __eq__(self, other):
        if not isinstance(other, WeightSpace):
            return NotImplemented
        return self.points == other.points and bool(np.all(self.w == other.w))

    def __hash__(self):
        return hash((self.points, tuple(self.w.flat)))

    def __repr__(self):
        rows = ", ".join("[" + ", ".join(str(v) for v in r) + "]" for r in self.w)
        return f"WeightSpace(points={self.points!r}, w=[{rows}])"

    def pairs(self):
        """Unordered pairs of distinct points, as index tuples."""
        return itertools.combinations(range(self.n), 2)

    def values(self) -> list:
        """Off-diagonal entries, upper triangle, row-major."""
        return [self.w[i, j] for i, j in self.pairs()]

    def with_matrix(self, w: np.ndarray) -> "WeightSpace":
        return _trusted(self.points, normalize(w))

    def as_float(self) -> "WeightSpace":
        return _trusted(self.points, np.asarray(self.w, dtype=float))

    def as_exact(self) -> "WeightSpace":
        if self.exact:
            return self
        return _trusted(self.points, as_matrix([[Fraction(x) for x in r] for r in self.w]))

    def restrict(self, subset: Sequence) -> "WeightSpace":
        idx = [self.index[p] for p in subset]
        return _trusted(tuple(subset), self.w[np.ix_(idx, idx)])

    def reorder(self, points: Sequence) -> "WeightSpace":
        if set(points) != set(self.points) or len(points) != self.n:
            raise ValueError("point-set mismatch")
        return self.restrict(tuple(points))


def _trusted(points, w) -> WeightSpace:
    w = np.array(w, dtype=w.dtype, copy=True)
    w.setflags(write=False)
    return WeightSpace(tuple(points), w)


def validate(matrix, labels: Sequence[Hashable] | None = None, exact: bool | None = None) -> WeightSpace:
    """Check a square matrix and wrap it as a WeightSpace.

    Entries given as ints, Fractions, Decimals or numeric strings stay exact;
    anything else puts the space in float mode.  Offending positions in the
    error messages are 1-based ``(row, column)``.
    """
    w = as_matrix(matrix, exact=exact)
    n = w.shape[0]
    if labels is None:
        labels = tuple(range(1, n + 1))
    labels = tuple(labels)
    problems = []
    if w.ndim != 2 or w.shape[1] != n:
        raise ValidationError([f"matrix is not square: shape {w.shape}"])
    if len(labels) != n:
        problems.append(f"{len(labels)} labels for a {n}x{n} matrix")
    seen = {}
    for k, lab in enumerate(labels):
        if lab in seen:
            problems.append(f"duplicate label {lab!r} at positions {seen[lab] + 1} and {k + 1}")
        seen.setdefault(lab, k)
    if not is_exact(w) and not np.all(np.isfinite(w)):
        problems.append("non-finite entry")
    for i in range(n):
        if w[i, i] != 0:
            problems.append(f"nonzero diagonal at ({i + 1},{i + 1})")
        for j in range(n):
            if w[i, j] < 0:
                problems.append(f"negative entry at ({i + 1},{j + 1})")
            if j > i and w[i, j] != w[j, i]:
                problems.append(f"asymmetric at ({i + 1},{j + 1})")
    if problems:
        raise ValidationError(problems)
    return _trusted(labels, w)


def from_pairs(points: Sequence, weights: Mapping[tuple, object], exact: bool | None = None) -> WeightSpace:
    """Build a weight space from ``{(x, y): value}``; missing pairs are zero."""
    points = tuple(points)
    idx = {p: i for i, p in enumerate(points)}
    rows = [[0] * len(points) for _ in points]
    for (x, y), v in weights.items():
        rows[idx[x]][idx[y]] = v
        rows[idx[y]][idx[x]] = v
    return validate(rows, points, exact=exact)


def zero(points: Sequence) -> WeightSpace:
    return from_pairs(points, {})


@dataclass(frozen=True)
class SetMap:
    """A total function between finite point sets, stored as aligned images."""

    source: tuple
    target: tuple
    images: tuple

    def __post_init__(self):
        if len(self.images) != len(self.source):
            raise ValueError("map is not total on its source")
        tgt = set(self.target)
        bad = [y for y in self.images if y not in tgt]
        if bad:
            raise ValueError(f"images {bad!r} are not target points")

    @classmethod
    def from_dict(cls, source: Sequence, target: Sequence, mapping: Mapping) -> "SetMap":
        missing = [x for x in source if x not in mapping]
        if missing:
            raise ValueError(f"map undefined on {missing!r}")
        return cls(tuple(source), tuple(target), tuple(mapping[x] for x in source))

    @classmethod
    def identity(cls, points: Sequence) -> "SetMap":
        return cls(tuple(points), tuple(points), tuple(points))

    @cached_property
    def _lookup(self) -> dict:
        return dict(zip(self.source, self.images))

    def __call__(self, x):
        return self._lookup[x]

    def then(self, g: "SetMap") -> "SetMap":
        """The composite ``g o self``."""
        if set(g.source) != set(self.target):
            raise ValueError("maps are not composable")
        return SetMap(self.source, g.target, tuple(g(y) for y in self.images))

    @property
    def is_surjective(self) -> bool:
        return set(self.images) == set(self.target)

    @property
    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)


def pullback(f: SetMap, v: WeightSpace) -> WeightSpace:
    """``f^*(v)[x][y] = v[f(x)][f(y)]`` on the source of ``f``."""
    if set(f.target) != set(v.points):
        raise ValueError("map target does not match the weight space")
    idx = [v.index[y] for y in f.images]
    return _trusted(f.source, v.w[np.ix_(idx, idx)])


def _aligned(u: WeightSpace, v: WeightSpace) -> WeightSpace:
    if u.points == v.points:
        return v
    return v.reorder(u.points)


def leq(u: WeightSpace, v: WeightSpace, tol=None) -> bool:
    v = _aligned(u, v)
    if tol is None:
        tol = 0 if (u.exact and v.exact) else TOL
    return bool(np.all(u.w <= v.w + tol))


def is_nonexpansive(f: SetMap, u: WeightSpace, v: WeightSpace, tol=None) -> bool:
    if set(f.source) != set(u.points):
        raise ValueError("map source does not match the domain space")
    return leq(pullback(f, v), u, tol)


def max2(u: WeightSpace, v: WeightSpace) -> WeightSpace:
    v = _aligned(u, v)
    return u.with_matrix(np.maximum(u.w, v.w))


def sup(family: Iterable[WeightSpace]) -> WeightSpace:
    family = list(family)
    if not family:
        raise ValueError("sup of an empty family")
    out = family[0]
    for v in family[1:]:
        out = max2(out, v)
    return out


def diameter(u: WeightSpace):
    return u.w.max() if u.n else 0


def separation(u: WeightSpace):
    if u.n < 2:
        raise ValueError("separation needs at least two points")
    return min(u.values())


def antipodes(u: WeightSpace, x, tol=None) -> frozenset:
    t = default_tol(u.w, tol)
    d = diameter(u)
    row = u.w[u.index[x]]
    return frozenset(p for p, v in zip(u.points, row) if v >= d - t)


# -- domain predicates -------------------------------------------------------


class Infinity(enum.Enum):
    INF = "inf"

    def __repr__(self):
        return "INF"


INF = Infinity.INF


def _check_rho(rho):
    if not rho >= 1:
        raise ValueError(f"rho must be >= 1, got {rho!r}")


@dataclass(frozen=True)
class Metric:
    pass


@dataclass(frozen=True)
class Ultrametric:
    pass


@dataclass(frozen=True)
class QMetric:
    q: object

    def __post_init__(self):
        if self.q is not INF and not (self.q >= 1):
            raise ValueError(f"q must lie in [1, inf], got {self.q!r}")


@dataclass(frozen=True)
class RhoInframetric:
    rho: object

    def __post_init__(self):
        _check_rho(self.rho)


@dataclass(frozen=True)
class RhoRelaxed:
    rho: object

    def __post_init__(self):
        _check_rho(self.rho)


@dataclass(frozen=True)
class ASpace:
    pass


@dataclass(frozen=True)
class AmSpace:
    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 3:
            raise ValueError(f"m must be an integer >= 3, got {self.m!r}")


@dataclass(frozen=True)
class IntegerGrid:
    step: object = 1

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"grid step must be positive, got {self.step!r}")


def _triples(w):
    # axes are (x, y, z): u_xy, u_yz, u_xz
    return w[:, :, None], w[None, :, :], w[:, None, :]


def _is_aspace(w, t) -> bool:
    if w.shape[0] == 0:
        return True
    d = w.max()
    return bool(np.all((w >= d - t).any(axis=1)))


def satisfies(u: WeightSpace, kind, tol=None) -> bool:
    """Exact membership test of ``u`` in the domain named by ``kind``."""
    w = u.w
    t = default_tol(w, tol)
    if isinstance(kind, Metric) or (isinstance(kind, QMetric) and kind.q == 1):
        a, b, c = _triples(w)
        return bool(np.all(c <= a + b + t))
    if isinstance(kind, Ultrametric) or (isinstance(kind, QMetric) and kind.q is INF):
        a, b, c = _triples(w)
        return bool(np.all(c <= np.maximum(a, b) + t))
    if isinstance(kind, QMetric):
        q = kind.q
        if is_exact(w) and int(q) == q and tol is None:
            q = int(q)
            a, b, c = _triples(w ** q)
            return bool(np.all(c <= a + b))
        a, b, c = _triples(np.asarray(w, dtype=float) ** float(q))
        rhs = a + b
        tt = t if t else 0.0
        return bool(np.all(c <= rhs + tt * np.maximum(1.0, rhs)))
    if isinstance(kind, RhoInframetric):
        rho = exact_scalar_like(w, kind.rho)
        a, b, c = _triples(w)
        return bool(np.all(c <= rho * np.maximum(a, b) + t))
    if isinstance(kind, RhoRelaxed):
        rho = exact_scalar_like(w, kind.rho)
        a, b, c = _triples(w)
        return bool(np.all(c <= rho * (a + b) + t))
    if isinstance(kind, ASpace):
        return _is_aspace(w, t)
    if isinstance(kind, AmSpace):
        m = int(kind.m)
        for sub in itertools.combinations(range(u.n), m):
            if not _is_aspace(w[np.ix_(sub, sub)], t):
                return False
        return True
    if isinstance(kind, IntegerGrid):
        step = exact_scalar_like(w, kind.step)
        if is_exact(w) and tol is None:
            return all((x / step).denominator == 1 for x in w.flat)
        r = np.asarray(w, dtype=float) / float(step)
        return bool(np.all(np.abs(r - np.round(r)) <= (t or 0.0)))
    raise TypeError(f"unknown predicate kind {kind!r}")
