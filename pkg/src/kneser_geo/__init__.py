"""Geometric witness finding for the Kneser theorem.

Given a coloring of the k-subsets of {1..n} with at most n-2k+1 colors, find
two disjoint k-subsets sharing a color. Points are placed on the moment curve
in R^(n-2k+1), each color class yields an odd "hyperplane system" function on
the sphere via 1D Helly intersections of projected k-gons, and a Borsuk-Ulam
style zero search looks for a direction where the systems coincide. Any Helly
failure met along the way is a disjoint monochromatic pair.
"""

from .errors import BudgetError, CapacityError, InputError, KneserError, PreconditionError
from .core import (
    Coloring,
    KneserInstance,
    KSubset,
    WitnessPair,
    are_disjoint,
    canonical_coloring,
    enumerate_k_subsets,
    exact_chromatic_number,
    random_coloring,
    rank_subset,
    unrank_subset,
    verify_coloring,
)
from .geometry import (
    DisjointPair,
    Direction,
    Hyperplane,
    Intersection,
    Interval,
    PointConfiguration,
    general_position_check,
    helly_1d,
    moment_curve_config,
    project_subset,
    side_counts,
)
from .systems import ColorSystem, CoincidenceResult, HellyFailure, coincidence_gap, phi, psi
from .borsuk_ulam import (
    OddMapEval,
    ZeroResult,
    find_coincidence_direction,
    find_zero_on_circle,
    find_zero_on_sphere,
)
from .witness import (
    DiagnosticReport,
    SearchParams,
    contradiction_diagnostic,
    geometric_witness_search,
    hybrid_witness,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "CapacityError",
    "CoincidenceResult",
    "ColorSystem",
    "Coloring",
    "DiagnosticReport",
    "Direction",
    "DisjointPair",
    "HellyFailure",
    "Hyperplane",
    "InputError",
    "Intersection",
    "Interval",
    "KSubset",
    "KneserError",
    "KneserInstance",
    "OddMapEval",
    "PointConfiguration",
    "PreconditionError",
    "SearchParams",
    "WitnessPair",
    "ZeroResult",
    "are_disjoint",
    "canonical_coloring",
    "coincidence_gap",
    "contradiction_diagnostic",
    "enumerate_k_subsets",
    "exact_chromatic_number",
    "find_coincidence_direction",
    "find_zero_on_circle",
    "find_zero_on_sphere",
    "general_position_check",
    "geometric_witness_search",
    "helly_1d",
    "hybrid_witness",
    "moment_curve_config",
    "phi",
    "project_subset",
    "psi",
    "random_coloring",
    "rank_subset",
    "side_counts",
    "unrank_subset",
    "verify_coloring",
]
