"""Exact-or-float number handling.

Matrices are numpy arrays of one of two dtypes: ``object`` holding
``Fraction`` entries (exact mode) or ``float64`` (float mode).  Exact mode
compares with zero tolerance, float mode with ``TOL``.
"""

from __future__ import annotations

import math
import numbers
from decimal import Decimal
from fractions import Fraction

import numpy as np

TOL = 1e-9


def exact_value(x):
    """Return ``x`` as a Fraction, or None when it has no exact reading."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        return None
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, Decimal):
        return Fraction(x) if x.is_finite() else None
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            return None
    return None


def float_value(x) -> float:
    if isinstance(x, str):
        x = x.strip()
        try:
            return float(Fraction(x))
        except (ValueError, ZeroDivisionError):
            return float(x)
    return float(x)


def as_matrix(rows, exact: bool | None = None) -> np.ndarray:
    """Coerce a nested sequence to an exact (object) or float array.

    With ``exact=None`` the array is exact iff every entry has an exact
    reading; ``exact=False`` forces float mode.
    """
    if isinstance(rows, np.ndarray) and rows.dtype.kind == "f" and exact is not True:
        return np.array(rows, dtype=float)
    rows = [list(r) for r in rows]
    if exact is not False:
        values = [[exact_value(x) for x in r] for r in rows]
        if all(v is not None for r in values for v in r):
            out = np.empty((len(values), len(values[0]) if values else 0), dtype=object)
            for i, r in enumerate(values):
                for j, v in enumerate(r):
                    out[i, j] = v
            return out
        if exact:
            raise ValueError("matrix has entries without an exact rational reading")
    return np.array([[float_value(x) for x in r] for r in rows], dtype=float)


def is_exact(a: np.ndarray) -> bool:
    return a.dtype == object


def default_tol(a: np.ndarray, tol: float | None = None):
    if tol is not None:
        return tol
    return 0 if is_exact(a) else TOL


def to_float(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=float)


def exact_scalar_like(a: np.ndarray, x):
    """Bring a parameter (rho, step, epsilon...) into the array's number system."""
    if is_exact(a):
        v = exact_value(x)
        if v is None:
            v = Fraction(str(x)) if isinstance(x, float) and math.isfinite(x) else None
        if v is None:
            raise ValueError(f"parameter {x!r} has no exact reading")
        return v
    return float(x)


def normalize(a: np.ndarray) -> np.ndarray:
    """Collapse an object array holding any floats to float64."""
    if a.dtype == object and any(isinstance(v, float) for v in a.flat):
        return a.astype(float)
    return a


def fmt(x) -> str:
    """Human/CSV rendering: integers bare, fractions as p/q, floats by repr."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, numbers.Integral):
        return str(int(x))
    return repr(float(x))


def jsonable(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else fmt(x)
    if isinstance(x, (numbers.Integral,)):
        return int(x)
    return float(x)
