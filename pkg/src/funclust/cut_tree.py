"""Cut metrics, exact cut decomposition, the four-point test and line minorants."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .lp import check_certificate, nonneg_feasible
from .tight_span import SizeGuardError
from .weights import Metric, ValidationError, WeightSpace, satisfies, validate

MAX_CUT_POINTS = 12


@dataclass(frozen=True)
class Cut:
    """The split ``{A, X - A}``, stored by the side holding ``ground[0]``."""

    ground: tuple
    side: frozenset

    @classmethod
    def of(cls, ground: Sequence, subset: Iterable) -> "Cut":
        ground = tuple(ground)
        a = frozenset(subset)
        if not a <= set(ground):
            raise ValueError("cut side is not a subset of the ground set")
        if ground and ground[0] not in a:
            a = frozenset(ground) - a
        return cls(ground, a)

    @property
    def is_trivial(self) -> bool:
        return len(self.side) == len(self.ground)

    def separates(self, x, y) -> bool:
        return (x in self.side) != (y in self.side)

    def __repr__(self):
        return "Cut({" + ",".join(str(p) for p in self.ground if p in self.side) + "})"


def cut_metric(c: Cut) -> WeightSpace:
    rows = [[int(c.separates(x, y)) for y in c.ground] for x in c.ground]
    return validate(rows, c.ground)


def all_cuts(ground: Sequence) -> list:
    """The ``2^(n-1) - 1`` nontrivial cuts, each once."""
    ground = tuple(ground)
    rest = ground[1:]
    out = []
    for k in range(0, len(rest)):
        for comb in itertools.combinations(rest, k):
            out.append(Cut(ground, frozenset((ground[0], *comb))))
    return out


@dataclass(frozen=True)
class CutDecomposition:
    ground: tuple
    terms: tuple  # ((Cut, weight), ...)

    def __post_init__(self):
        seen = set()
        for c, lam in self.terms:
            if c.ground != self.ground:
                raise ValueError("cut on a different ground set")
            if lam < 0:
                raise ValueError("cut weights must be nonnegative")
            if c.side in seen:
                raise ValueError(f"repeated cut {c!r}")
            seen.add(c.side)

    @classmethod
    def of(cls, ground: Sequence, terms: Iterable[tuple]) -> "CutDecomposition":
        ground = tuple(ground)
        merged: dict = {}
        for side, lam in terms:
            c = side if isinstance(side, Cut) else Cut.of(ground, side)
            merged[c] = merged.get(c, 0) + Fraction(lam)
        return cls(ground, tuple(merged.items()))


def evaluate(dec: CutDecomposition) -> WeightSpace:
    n = len(dec.ground)
    w = np.full((n, n), Fraction(0), dtype=object)
    for c, lam in dec.terms:
        for i, j in itertools.combinations(range(n), 2):
            if c.separates(dec.ground[i], dec.ground[j]):
                w[i, j] += lam
                w[j, i] += lam
    return validate(w, dec.ground)


@dataclass(frozen=True)
class DecompositionResult:
    """Either a witness decomposition or a certificate of infeasibility.

    The certificate is a weight ``y`` on pairs with ``sum y_xy delta_A(x,y) >= 0``
    for every cut ``A`` and ``sum y_xy d_xy < 0``.
    """

    feasible: bool
    decomposition: CutDecomposition | None
    certificate: dict | None
    cuts_checked: int


def _pair_index(n):
    return list(itertools.combinations(range(n), 2))


def decompose(d: WeightSpace) -> DecompositionResult:
    """Exact feasibility of ``d = sum lambda_A delta_A`` with ``lambda >= 0``."""
    n = d.n
    if n > MAX_CUT_POINTS:
        raise SizeGuardError(f"cut decomposition is limited to {MAX_CUT_POINTS} points, got {n}")
    d = d.as_exact()
    cuts = all_cuts(d.points)
    pairs = _pair_index(n)
    A = [[int(c.separates(d.points[i], d.points[j])) for c in cuts] for i, j in pairs]
    b = [d.w[i, j] for i, j in pairs]
    if not pairs:
        return DecompositionResult(True, CutDecomposition(d.points, ()), None, 0)
    res = nonneg_feasible(A, b)
    if res.feasible:
        terms = tuple((c, lam) for c, lam in zip(cuts, res.x) if lam != 0)
        return DecompositionResult(True, CutDecomposition(d.points, terms), None, len(cuts))
    if not check_certificate(A, b, res.certificate):
        raise ArithmeticError("solver produced an invalid infeasibility certificate")
    cert = {(d.points[i], d.points[j]): y for (i, j), y in zip(pairs, res.certificate)}
    return DecompositionResult(False, None, cert, len(cuts))


def verify_certificate(d: WeightSpace, certificate: dict) -> bool:
    """Independent check over every nontrivial cut."""
    d = d.as_exact()
    for c in all_cuts(d.points):
        if sum(y for (x, z), y in certificate.items() if c.separates(x, z)) < 0:
            return False
    return sum(y * d[x, z] for (x, z), y in certificate.items()) < 0


def four_point_sums(d: WeightSpace, quad) -> list:
    x, y, z, w = quad
    return sorted([d[x, y] + d[z, w], d[x, z] + d[y, w], d[x, w] + d[y, z]])


def is_tree_metric(d: WeightSpace, tol=None) -> bool:
    """Four-point condition: the two largest pair-sums agree on every quadruple."""
    if not satisfies(d, Metric(), tol):
        raise ValidationError(["input is not a metric"])
    t = 0 if d.exact and tol is None else (tol if tol is not None else 1e-9)
    for quad in itertools.combinations(d.points, 4):
        s = four_point_sums(d, quad)
        if abs(s[2] - s[1]) > t:
            return False
    return True


def line_minorant(d: WeightSpace, x) -> WeightSpace:
    """``d'_zw = |d(x, z) - d(x, w)|``: the pullback of the line along ``d(x, .)``."""
    row = d.w[d.index[x]]
    return d.with_matrix(np.abs(row[:, None] - row[None, :]))
