"""Bezout equation ``G(z) X(z) = I`` for matrix symbols in the Wiener algebra.

The solver builds the particular solution ``Xi``, the inner kernel
parametrization ``Theta`` and the left inverse ``H`` of ``[G; H]`` from
finite sections of Toeplitz and Hankel operators.
"""

from .config import SolveConfig
from .errors import (
    BezoutError,
    DomainError,
    NoConvergenceError,
    NotASolutionError,
    NotPositiveError,
    RankError,
    ShapeError,
    SingularError,
    UnknownExampleError,
)
from .gram import GramSolver, apply_gram_inverse, apply_gram_inverse_direct, build_gram_solver
from .instances import EXAMPLES, GOLDEN_Q, example, random_symbol
from .sections import (
    gram_section,
    hankel_section,
    margin_ladder,
    strict_positivity_margin,
    toeplitz_section,
)
from .series import CoeffSeries, EvalGrid, adjoint_symbol, convolve, evaluate, lower_star
from .solver import (
    BezoutData,
    assemble_solution,
    extract_parameter,
    solution_residual,
    solve,
    solve_norm_split,
    solve_sized,
)
from .spectral import SpectralFactor, invert_outer, spectral_factorize
from .verify import VerifyReport, run_all

__all__ = [
    "BezoutData", "BezoutError", "CoeffSeries", "DomainError", "EXAMPLES", "EvalGrid",
    "GOLDEN_Q", "GramSolver", "NoConvergenceError", "NotASolutionError", "NotPositiveError",
    "RankError", "ShapeError", "SingularError", "SolveConfig", "SpectralFactor",
    "UnknownExampleError", "VerifyReport", "adjoint_symbol", "apply_gram_inverse",
    "apply_gram_inverse_direct", "assemble_solution", "build_gram_solver", "convolve",
    "evaluate", "example", "extract_parameter", "gram_section", "hankel_section",
    "invert_outer", "lower_star", "margin_ladder", "random_symbol", "run_all",
    "solution_residual", "solve", "solve_norm_split", "solve_sized", "spectral_factorize",
    "strict_positivity_margin", "toeplitz_section",
]
