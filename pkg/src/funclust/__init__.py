"""Functorial clustering: weights, sieves, projections, tight spans, cuts."""

from .covers import Cover, flagify, is_flag, maximal_cliques, refines
from .cut_tree import Cut, CutDecomposition, cut_metric, decompose, evaluate, is_tree_metric, line_minorant
from .projections import (
    ConvergenceError,
    Discretize,
    Identity,
    Intersection,
    PathMetric,
    Quotient,
    check_projection_laws,
    minimax_path,
    project,
    ultrametric_by_splits,
)
from .sieves import Sieve, cech_sieve, is_stationary_sample, rips_sieve, sieve_to_weight, sl_sieve
from .tight_span import (
    ExtremalFunction,
    SizeGuardError,
    extend_half_diameter,
    extend_to_aspace,
    is_extremal,
    kuratowski,
    root_check,
    tight_span_vertices,
)
from .weights import (
    INF,
    AmSpace,
    ASpace,
    IntegerGrid,
    Metric,
    QMetric,
    RhoInframetric,
    RhoRelaxed,
    SetMap,
    Ultrametric,
    ValidationError,
    WeightSpace,
    from_pairs,
    leq,
    max2,
    pullback,
    satisfies,
    validate,
)

__version__ = "0.1.0"
