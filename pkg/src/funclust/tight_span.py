"""Tight spans of small metric spaces.

Functions ``f: X -> R`` are stored as value tuples aligned with the
points of the base space.  The polyhedron ``{f : f(x) + f(y) >= d_xy}``
(with ``x = y`` allowed, so ``f >= 0``) has the tight span as its bounded
complex; its 0-cells are the basic feasible solutions, which we enumerate
by brute force over square subsystems.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from ._numeric import default_tol, exact_scalar_like
from .weights import Metric, ValidationError, WeightSpace, diameter, satisfies, validate

MAX_POINTS = 8


class SizeGuardError(ValueError):
    """Input exceeds the size an exhaustive enumeration is allowed to handle."""


@dataclass(frozen=True, eq=False)
class ExtremalFunction:
    """A function on the points of ``space`` (extremality is not enforced)."""

    space: WeightSpace
    values: tuple

    def __call__(self, x):
        return self.values[self.space.index[x]]

    def __eq__(self, other):
        if not isinstance(other, ExtremalFunction):
            return NotImplemented
        return self.space.points == other.space.points and self.values == other.values

    def __hash__(self):
        return hash((self.space.points, self.values))

    def __repr__(self):
        return "f(" + ", ".join(f"{p}={v}" for p, v in zip(self.space.points, self.values)) + ")"

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=self.space.w.dtype)

    def tight_pairs(self, tol=None) -> frozenset:
        """Unordered pairs (loops included) with ``f(x) + f(y) = d_xy``."""
        t = default_tol(self.space.w, tol)
        s = self.array[:, None] + self.array[None, :]
        hit = np.abs(s - self.space.w) <= t if t else s == self.space.w
        pts = self.space.points
        return frozenset(frozenset((pts[i], pts[j]))
                         for i in range(len(pts)) for j in range(i, len(pts)) if hit[i, j])

    @property
    def height(self):
        return min(self.values)

    def minset(self, tol=None) -> frozenset:
        t = default_tol(self.space.w, tol)
        h = self.height
        return frozenset(p for p, v in zip(self.space.points, self.values) if v <= h + t)

    def distance(self, other: "ExtremalFunction"):
        """Sup-norm distance."""
        return max(abs(a - b) for a, b in zip(self.values, other.values))


def function(d: WeightSpace, values) -> ExtremalFunction:
    if len(values) != d.n:
        raise ValueError("one value per point is required")
    if d.exact:
        values = tuple(exact_scalar_like(d.w, v) for v in values)
    else:
        values = tuple(float(v) for v in values)
    return ExtremalFunction(d, values)


def kuratowski(d: WeightSpace, x) -> ExtremalFunction:
    return ExtremalFunction(d, tuple(d.w[d.index[x]]))


def is_extremal(f: ExtremalFunction, d: WeightSpace | None = None, tol=None) -> bool:
    """Feasible and ``f(x) = max_y (d_xy - f(y))`` for every ``x``."""
    d = f.space if d is None else d
    t = default_tol(d.w, tol)
    a = np.array(f.values, dtype=d.w.dtype)
    if np.any(a < -t):
        return False
    if not np.all(a[:, None] + a[None, :] >= d.w - t):
        return False
    best = (d.w - a[None, :]).max(axis=1)
    return bool(np.all(np.abs(a - best) <= t))


def root_check(d: WeightSpace, tol=None):
    """The constant function ``D/2`` if it is extremal, else None."""
    half = diameter(d) / 2 if d.exact else float(diameter(d)) / 2
    f = ExtremalFunction(d, (half,) * d.n)
    return f if is_extremal(f, d, tol) else None


def _half_like(d: WeightSpace):
    return Fraction(diameter(d)) / 2 if d.exact else float(diameter(d)) / 2


def extend_by_point(d: WeightSpace, distance, label="inf") -> WeightSpace:
    n = d.n
    if d.exact:
        distance = exact_scalar_like(d.w, distance)
    w = np.zeros((n + 1, n + 1), dtype=d.w.dtype)
    w[:n, :n] = d.w
    w[n, :n] = w[:n, n] = distance
    w[n, n] = Fraction(0) if d.exact else 0.0
    if label in d.index:
        raise ValueError(f"label {label!r} already in use")
    return validate(w, (*d.points, label))


def extend_to_aspace(d: WeightSpace, label="inf") -> WeightSpace:
    """Add a point at distance ``diam`` from every point; the result is an A-space."""
    return extend_by_point(d, diameter(d), label)


def extend_half_diameter(d: WeightSpace, label="inf") -> WeightSpace:
    """Add a point at distance ``diam / 2`` from every point."""
    return extend_by_point(d, _half_like(d), label)


@dataclass
class TightSpanReport:
    space: WeightSpace
    vertices: list
    distances: np.ndarray
    edges: list
    root: ExtremalFunction | None
    diameter: object

    @property
    def has_root(self) -> bool:
        return self.root is not None


def _constraints(n: int):
    """Rows of ``f(x) + f(y) >= d_xy``, loops first (``2 f(x) >= 0``)."""
    pairs = [(i, i) for i in range(n)] + list(itertools.combinations(range(n), 2))
    A = np.zeros((len(pairs), n))
    for k, (i, j) in enumerate(pairs):
        A[k, i] += 1
        A[k, j] += 1
    return pairs, A


def _solve_exact(A_rows, b):
    """Gauss-Jordan over Fractions for a nonsingular square system."""
    n = len(b)
    M = [[Fraction(int(a)) for a in row] + [Fraction(v)] for row, v in zip(A_rows, b)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [v / piv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                k = M[r][c]
                M[r] = [a - k * bb for a, bb in zip(M[r], M[c])]
    return tuple(M[r][n] for r in range(n))


def _check_input(d: WeightSpace, tol) -> None:
    if d.n > MAX_POINTS:
        raise SizeGuardError(f"tight-span enumeration is limited to {MAX_POINTS} points, got {d.n}")
    if d.n == 0:
        raise ValueError("empty space")
    if not satisfies(d, Metric(), tol):
        raise ValidationError(["input is not a metric"])


def _sort_key(f: ExtremalFunction):
    return float(f.height), tuple(map(float, f.values))


def vertices_by_bases(d: WeightSpace, tol=None, chunk: int = 20000) -> list:
    """Brute-force oracle: solve every nonsingular ``n x n`` subsystem.

    Float batches find the feasible bases; for exact input each distinct
    solution is re-solved in rationals and re-checked exactly.  Cost grows
    like ``C(n(n+1)/2, n)``, so keep this for ``n <= 7``.
    """
    _check_input(d, tol)
    n = d.n
    pairs, A = _constraints(n)
    wf = np.asarray(d.w, dtype=float)
    b = np.array([wf[i, j] for i, j in pairs])
    ftol = 1e-7 * max(1.0, float(wf.max()))
    found: dict[tuple, tuple] = {}
    combos = itertools.combinations(range(len(pairs)), n)
    while True:
        block = np.array(list(itertools.islice(combos, chunk)), dtype=np.intp)
        if block.size == 0:
            break
        As = A[block]
        ok = np.abs(np.linalg.det(As)) > 0.5  # integer matrices
        if not ok.any():
            continue
        block, As = block[ok], As[ok]
        sol = np.linalg.solve(As, b[block][:, :, None])[:, :, 0]
        feas = (sol @ A.T - b >= -ftol).all(axis=1)
        for basis, f in zip(block[feas], sol[feas]):
            found.setdefault(tuple(np.round(f / ftol / 10).astype(np.int64)), tuple(basis))

    out, seen = [], set()
    for basis in found.values():
        if d.exact:
            vals = _solve_exact([A[k] for k in basis], [d.w[pairs[k]] for k in basis])
            sig = vals
        else:
            vals = tuple(np.linalg.solve(A[list(basis)], b[list(basis)]))
            sig = tuple(np.round(np.array(vals) / ftol).astype(np.int64))
        f = ExtremalFunction(d, vals)
        if sig not in seen and is_extremal(f, d, tol):
            seen.add(sig)
            out.append(f)
    return sorted(out, key=_sort_key)


def _rank(rows) -> int:
    return int(np.linalg.matrix_rank(np.array(rows, dtype=float))) if len(rows) else 0


def _primitive(v) -> tuple:
    g = 0
    for x in v:
        g = math.gcd(g, int(x))
    return tuple(int(x) // g for x in v) if g else tuple(int(x) for x in v)


def _cone_rays(rows: list) -> list:
    """Extreme rays of the pointed cone ``{r : a.r >= 0 for a in rows}``.

    Double description over the integers, seeded with a basis of the rows.
    """
    n = len(rows[0])
    basis = []
    for k, a in enumerate(rows):
        if _rank([rows[i] for i in basis] + [a]) > len(basis):
            basis.append(k)
        if len(basis) == n:
            break
    B = [[Fraction(int(x)) for x in rows[k]] for k in basis]
    inv = _inverse(B)
    rays = []
    for j in range(n):
        col = [inv[i][j] for i in range(n)]
        den = math.lcm(*(x.denominator for x in col))
        rays.append(_primitive([x * den for x in col]))
    done = list(basis)
    for k, a in enumerate(rows):
        if k in basis:
            continue
        dot = [sum(x * y for x, y in zip(a, r)) for r in rays]
        keep = [r for r, v in zip(rays, dot) if v >= 0]
        for p, vp in ((r, v) for r, v in zip(rays, dot) if v > 0):
            for q, vq in ((r, v) for r, v in zip(rays, dot) if v < 0):
                common = [rows[i] for i in done
                          if sum(x * y for x, y in zip(rows[i], p)) == 0
                          and sum(x * y for x, y in zip(rows[i], q)) == 0]
                if _rank(common) == n - 2:
                    keep.append(_primitive([vp * y - vq * x for x, y in zip(p, q)]))
        rays = list(dict.fromkeys(keep))
        done.append(k)
    return rays


def _inverse(M):
    n = len(M)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [v / piv for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                k = aug[r][c]
                aug[r] = [a - k * bb for a, bb in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def _walk(d: WeightSpace, tol):
    """Vertices and edges of the constraint polyhedron, by walking its 1-skeleton.

    The graph of a pointed polyhedron is connected, so starting from the
    Kuratowski images (always vertices) reaches everything.  Edge directions
    at a vertex are the extreme rays of its cone of feasible directions.
    """
    n = d.n
    pairs, A = _constraints(n)
    rows = [tuple(int(x) for x in r) for r in A]
    w = d.w
    t = default_tol(w, tol)
    b = [w[i, j] for i, j in pairs]

    def snap(vals):
        if d.exact:
            return tuple(vals)
        # re-solve on the tight rows to stop float drift along the walk
        a = np.array(vals, dtype=float)
        tight = [k for k in range(len(pairs)) if abs(a @ A[k] - b[k]) <= max(t, 1e-9)]
        sol, *_ = np.linalg.lstsq(A[tight], np.array([b[k] for k in tight], dtype=float), rcond=None)
        return tuple(float(x) for x in sol)

    def key(vals):
        return vals if d.exact else tuple(np.round(np.array(vals) / max(t, 1e-9) / 100).astype(np.int64))

    start = [snap(tuple(w[i])) for i in range(n)]
    index = {}
    verts, edges = [], set()
    for v in start:
        if key(v) not in index:
            index[key(v)] = len(verts)
            verts.append(v)
    k = 0
    while k < len(verts):
        f = verts[k]
        slack = [f[i] + f[j] - bb for (i, j), bb in zip(pairs, b)]
        tight = [c for c, s in enumerate(slack) if s <= t]
        for r in _cone_rays([rows[c] for c in tight]):
            rates = [sum(x * y for x, y in zip(row, r)) for row in rows]
            steps = [slack[c] / -rates[c] for c in range(len(rows)) if rates[c] < 0]
            if not steps:
                continue  # unbounded ray
            step = min(steps)
            g = snap(tuple(x + step * y for x, y in zip(f, r)))
            kg = key(g)
            if kg not in index:
                index[kg] = len(verts)
                verts.append(g)
            edges.add(tuple(sorted((k, index[kg]))))
        k += 1
    return verts, edges


def tight_span_vertices(d: WeightSpace, tol=None) -> TightSpanReport:
    """All 0-cells of the tight span of a metric on at most ``MAX_POINTS`` points.

    Vertices come from a walk along the edges of the constraint polyhedron;
    the report's edges are the edges of that walk.
    """
    _check_input(d, tol)
    raw, raw_edges = _walk(d, tol)
    fs = [ExtremalFunction(d, v) for v in raw]
    order = sorted(range(len(fs)), key=lambda k: _sort_key(fs[k]))
    where = {old: new for new, old in enumerate(order)}
    vertices = [fs[k] for k in order]
    edges = sorted(tuple(sorted((where[i], where[j]))) for i, j in raw_edges if i != j)
    m = len(vertices)
    dist = np.zeros((m, m), dtype=d.w.dtype)
    for i, j in itertools.combinations(range(m), 2):
        dist[i, j] = dist[j, i] = vertices[i].distance(vertices[j])
    return TightSpanReport(d, vertices, dist, edges, root_check(d, tol), diameter(d))


def edges_by_rank(vertices, tol=None) -> list:
    """Vertex pairs whose common tight constraints have rank ``n - 1``."""
    if not vertices:
        return []
    pairs, A = _constraints(vertices[0].space.n)
    n = A.shape[1]
    tight = []
    for f in vertices:
        a, w = f.array, f.space.w
        t = default_tol(w, tol)
        tight.append({k for k, (i, j) in enumerate(pairs) if abs(a[i] + a[j] - w[i, j]) <= t})
    out = []
    for i, j in itertools.combinations(range(len(vertices)), 2):
        common = sorted(tight[i] & tight[j])
        if common and np.linalg.matrix_rank(A[common]) == n - 1:
            out.append((i, j))
    return out


def sup_distance_matrix(fs) -> np.ndarray:
    m = len(fs)
    out = np.zeros((m, m))
    for i, j in itertools.combinations(range(m), 2):
        out[i, j] = out[j, i] = float(fs[i].distance(fs[j]))
    return out


def restrict_function(f: ExtremalFunction, points) -> ExtremalFunction:
    sub = f.space.restrict(points)
    return ExtremalFunction(sub, tuple(f(p) for p in points))

