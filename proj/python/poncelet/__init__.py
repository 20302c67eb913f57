"""Confocal billiards, Cayley-type periodicity conditions, and geodesic
metric hierarchies, backed by the C++ core."""

from ._core import (  # noqa: F401
    PonceletError,
    basis_potential,
    cayley_condition,
    elliptic_form_eval,
    find_periodic_caustic,
    from_elliptic,
    hyperbolic_metric_at,
    integral_J,
    line_caustics,
    minkowski_to_klein,
    period_indicator,
    poisson_bracket_J,
    run_scenario,
    separability_residual_zero,
    solve_f,
    sqrt_series,
    tangent_directions,
    to_elliptic,
    trace_chords,
)

__all__ = [
    "PonceletError",
    "basis_potential",
    "cayley_condition",
    "elliptic_form_eval",
    "find_periodic_caustic",
    "from_elliptic",
    "hyperbolic_metric_at",
    "integral_J",
    "line_caustics",
    "minkowski_to_klein",
    "period_indicator",
    "poisson_bracket_J",
    "run_scenario",
    "separability_residual_zero",
    "solve_f",
    "sqrt_series",
    "tangent_directions",
    "to_elliptic",
    "trace_chords",
]
