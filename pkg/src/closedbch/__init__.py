"""Closed-form Baker-Campbell-Hausdorff combinations.

Two-factor products under ``[X, Y] = u X + v Y + c I``, three-factor
products by splitting the middle factor, their Virasoro specialisations,
the closed-form 2x2 matrix logarithm, and a truncated-series oracle to
check all of it.
"""

__version__ = "0.1.0"

from .core import (
    EXP_CAP,
    PairCombineResult,
    PairStructure,
    g_coef,
    g_coef_sinh,
    h_coef,
    h_coef_sinh,
    l_coef,
    pair_combine,
    vbv_f,
)
from .errors import BCHError
from .jacobi import (
    JacobiResidual,
    TripleStructure,
    jacobi_matrix,
    jacobi_residual,
    solve_dependent_constants,
)
from .mat2 import (
    INF,
    ConjClass,
    FixedPoints,
    GaussFactors,
    Kind,
    Mat2,
    classify,
    expm2,
    fixed_points,
    gauss_decompose,
    geometric_exp_form,
    iterate_exp_form,
    log_gl2,
    log_sl2,
    mobius,
    recompose,
)
from .oracle import BracketTable, bracket, dynkin_bch, triple_oracle
from .triple import (
    CombinedResult,
    SplitSolution,
    alpha_equation_lhs,
    compute_tilde,
    scale_middle,
    solve_alpha,
    triple_combine,
    two_factor_limit,
)
from .virasoro import (
    LambdaRoots,
    VirasoroElement,
    VirasoroExponent,
    VirasoroParams,
    subalgebra_one_param,
    subalgebra_two_param,
    virasoro_bracket,
    virasoro_lambda_roots,
    virasoro_triple,
    virasoro_two_factor,
)
