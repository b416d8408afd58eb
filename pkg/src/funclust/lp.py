"""Exact feasibility of ``A x = b, x >= 0`` over the rationals.

Phase 1 of the simplex method on a dense Fraction tableau, with Bland's
rule so degenerate pivots cannot cycle.  An infeasible system comes back
with a Farkas certificate ``y``: ``A^T y >= 0`` and ``b . y < 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    x: tuple | None = None
    certificate: tuple | None = None
    pivots: int = 0


def _frac(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError("exact solver received a float")
    return Fraction(v)


def check_solution(A, b, x) -> bool:
    return all(v >= 0 for v in x) and all(
        sum(a * v for a, v in zip(row, x)) == bb for row, bb in zip(A, b))


def check_certificate(A, b, y) -> bool:
    """``A^T y >= 0`` and ``b . y < 0``: no nonnegative ``x`` can solve the system."""
    m = len(A)
    ncols = len(A[0]) if m else 0
    cols_ok = all(sum(A[i][j] * y[i] for i in range(m)) >= 0 for j in range(ncols))
    return cols_ok and sum(bb * v for bb, v in zip(b, y)) < 0


def nonneg_feasible(A: Sequence[Sequence], b: Sequence) -> Feasibility:
    m = len(A)
    ncols = len(A[0]) if m else 0
    A = [[_frac(v) for v in row] for row in A]
    b = [_frac(v) for v in b]
    # make b >= 0 so the artificial basis is feasible
    sign = [(-1 if bb < 0 else 1) for bb in b]
    rows = [[s * v for v in row] + [Fraction(int(i == k)) for k in range(m)] + [s * bb]
            for i, (row, bb, s) in enumerate(zip(A, b, sign))]
    width = ncols + m
    basis = [ncols + i for i in range(m)]
    cost = [Fraction(0)] * ncols + [Fraction(1)] * m
    pivots = 0
    while True:
        cb = [cost[j] for j in basis]
        reduced = [cost[j] - sum(cb[i] * rows[i][j] for i in range(m)) for j in range(width)]
        enter = next((j for j in range(width) if reduced[j] < 0), None)  # Bland: lowest index
        if enter is None:
            break
        best = None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # cannot happen in phase 1: the objective is bounded below
            raise ArithmeticError("unbounded phase-1 objective")
        r = best[1]
        piv = rows[r][enter]
        rows[r] = [v / piv for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][enter] != 0:
                k = rows[i][enter]
                rows[i] = [u - k * v for u, v in zip(rows[i], rows[r])]
        basis[r] = enter
        pivots += 1

    value = sum(rows[i][-1] for i in range(m) if basis[i] >= ncols)
    if value == 0:
        x = [Fraction(0)] * ncols
        for i, j in enumerate(basis):
            if j < ncols:
                x[j] = rows[i][-1]
        return Feasibility(True, x=tuple(x), pivots=pivots)
    # phase-1 duals: y_k = c_B B^{-1} e_k, read off the artificial columns
    cb = [cost[j] for j in basis]
    dual = [sum(cb[i] * rows[i][ncols + k] for i in range(m)) for k in range(m)]
    # undo the row sign flips and negate to get A^T y >= 0, b.y < 0
    y = tuple(-s * v for s, v in zip(sign, dual))
    return Feasibility(False, certificate=y, pivots=pivots)
