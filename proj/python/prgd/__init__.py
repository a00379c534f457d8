"""Perturbed Riemannian gradient descent for escaping saddle points."""

from ._core import (
    CapacityError,
    CostFunction,
    InternalError,
    InvalidArgument,
    InvalidInput,
    NumericalFailure,
    ParamMode,
    PcaProblem,
    PrgdParams,
    QuadraticSaddle,
    RngStream,
    boundary_alpha,
    check_second_order_point,
    coupling_experiment,
    derive_params,
    empirical_grad_lipschitz,
    empirical_hess_lipschitz,
    min_eigpair,
    operator_norm,
    run_cli,
    run_prgd,
    run_rgd,
    sample_unit_ball,
    synthetic_pca_matrix,
)

__all__ = [
    "CapacityError",
    "CostFunction",
    "InternalError",
    "InvalidArgument",
    "InvalidInput",
    "NumericalFailure",
    "ParamMode",
    "PcaProblem",
    "PrgdParams",
    "QuadraticSaddle",
    "RngStream",
    "boundary_alpha",
    "check_second_order_point",
    "coupling_experiment",
    "derive_params",
    "empirical_grad_lipschitz",
    "empirical_hess_lipschitz",
    "min_eigpair",
    "operator_norm",
    "run_cli",
    "run_prgd",
    "run_rgd",
    "sample_unit_ball",
    "synthetic_pca_matrix",
]
