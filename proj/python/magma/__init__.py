"""Weighted Hessian functionals on convex domains.

Grids and fields, functional evaluation (including the sharp lower bound and
the scale invariant), Newton and descent-flow solvers for the power-law
Dirichlet family, the nonlinear eigenvalue driver, radial-graph duality
checks, and the independent 1-D shooting reference.
"""

from ._magma import (  # noqa: F401
    Field,
    Grid,
    InvalidArgument,
    SolverFailure,
    __version__,
    eval_H,
    eval_Hnorm,
    eval_J,
    field_from_values,
    flow_run,
    load_field,
    make_grid,
    oracle_shoot,
    radial_transform,
    rayleigh,
    save_field,
    scale_invariant,
    sobolev_check,
    solve_eigen,
    solve_fixed_rhs,
    solve_semilinear,
    solve_subcritical,
    solve_supercritical,
    test_field,
    verify_duality,
    verify_pushforward,
)
