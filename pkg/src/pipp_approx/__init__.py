"""Intensity approximations for repulsive pairwise-interaction Gibbs point processes."""

from .approx import (
    ApproxResult,
    EigenvalueSpec,
    NoSolution,
    SolverError,
    approximate_intensity,
    dpp_laplace_product,
    equal_eigenvalues,
    f_dpp,
    f_ps,
    lambert_w,
    lambert_w_kappa,
    solve_lambda_dpp,
    solve_lambda_dpp_discrete,
    solve_lambda_ps,
)
from .models import (
    Family,
    ModelError,
    PairwiseInteraction,
    PointPattern,
    clip,
    diggle_gratton,
    eval_g,
    papangelou,
    piecewise_strauss_hard_core,
    strauss,
    strauss_hard_core,
)
from .quadrature import (
    InteractionSummary,
    QuadratureError,
    ball_volume,
    compute_kappa,
    integral_one_minus_g,
    summarize,
)

__version__ = "0.1.0"

__all__ = [
    "approximate_intensity",
    "ApproxResult",
    "ball_volume",
    "clip",
    "compute_kappa",
    "diggle_gratton",
    "dpp_laplace_product",
    "EigenvalueSpec",
    "equal_eigenvalues",
    "eval_g",
    "f_dpp",
    "f_ps",
    "Family",
    "integral_one_minus_g",
    "InteractionSummary",
    "lambert_w",
    "lambert_w_kappa",
    "ModelError",
    "NoSolution",
    "PairwiseInteraction",
    "papangelou",
    "piecewise_strauss_hard_core",
    "PointPattern",
    "QuadratureError",
    "solve_lambda_dpp",
    "solve_lambda_dpp_discrete",
    "solve_lambda_ps",
    "SolverError",
    "strauss",
    "strauss_hard_core",
    "summarize",
]
