"""Optimal polynomial approximants to 1/f in the Hardy spaces H^p, 1 < p < inf."""

from .boundary import (
    DEFAULT_GRID,
    BlaschkeProduct,
    BoundaryGrid,
    HpFunction,
    TaylorPoly,
    dual_function,
    dual_pairing,
    dual_power,
    p_norm,
    pairing,
    sample,
    taylor_coeff,
)
from .orthogonality import (
    bj_test,
    check_pythagorean,
    norming_functional,
    orthogonalize,
    pythag_params,
)
from .solver import LinearOpa, OpaResult, SolverOptions, linear_factor, solve, solve_l2

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_GRID",
    "BlaschkeProduct",
    "BoundaryGrid",
    "HpFunction",
    "LinearOpa",
    "OpaResult",
    "SolverOptions",
    "TaylorPoly",
    "bj_test",
    "check_pythagorean",
    "dual_function",
    "dual_pairing",
    "dual_power",
    "linear_factor",
    "norming_functional",
    "orthogonalize",
    "p_norm",
    "pairing",
    "pythag_params",
    "sample",
    "solve",
    "solve_l2",
    "taylor_coeff",
]
