from ._core import (
    EvalError,
    Grid,
    ParseError,
    check_frame_identities,
    divergence,
    dual_multiplier_max,
    energy_gradient,
    eval_expr,
    h1_seminorm,
    l2_norm,
    leray_project,
    pretty_expr,
    regularized_energy,
    sample_cells,
    sample_velocity_arrays,
    solve_stationary,
)

__all__ = [
    "EvalError",
    "Grid",
    "ParseError",
    "check_frame_identities",
    "divergence",
    "dual_multiplier_max",
    "energy_gradient",
    "eval_expr",
    "h1_seminorm",
    "l2_norm",
    "leray_project",
    "pretty_expr",
    "regularized_energy",
    "sample_cells",
    "sample_velocity_arrays",
    "solve_stationary",
]
