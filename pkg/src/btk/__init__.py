"""Toolkit for rational matrix symbols on the unit circle: inner
function arithmetic, Toeplitz and Hankel truncations, model-space
calculus, and hyponormality decision procedures.
"""

from .errors import (
    BtkError,
    CertificationError,
    ConvergenceError,
    InfeasibleError,
    InputError,
    NoSolutionByThisMethodError,
    PoleOnCircleError,
)
from ._rational import Rational
from .scalar_inner import (
    AtomicSingularMeasure,
    BlaschkeProduct,
    ScalarInner,
    blaschke_factor,
    compose_blaschke,
    coprime_blaschke,
    coprime_inner,
    disk_zeros_of_rational,
    eval_blaschke,
    eval_singular,
    gcd_blaschke,
    gcd_inner,
    lcm_blaschke,
    measure_inf,
    mutually_singular,
    singular_coprime,
    singular_gcd,
)
from .matrix_inner import (
    PotapovProduct,
    char_scalar_inner,
    coprime_with_scalar,
    degree_inner,
    det_potapov,
    eval_potapov,
    extract_left_factor,
    gcd_diagonal_family,
    is_left_inner_divisor,
    lcm_diagonal_family,
    right_coprime_pair,
)
from .symbol import (
    CoprimeFactorization,
    MatrixSymbol,
    commutes,
    compose_symbol,
    degree_symbol,
    dss_left,
    dss_right,
    inner_outer,
    is_normal,
    lower,
    naive_scalar_pullout,
    outer_test,
    scalar_coprime_decomp,
    split,
    tensored_singularity,
    upper,
)
from .hardy_ops import (
    FourierWindow,
    M_matrix,
    P_of_M,
    Q_of_M,
    W_matrix,
    compression,
    compression_kernel,
    default_truncation,
    fourier,
    hankel,
    is_psd,
    model_basis,
    moore_penrose,
    numerical_rank,
    pair_commutator,
    pseudo_commutator,
    schur_rank,
    self_commutator,
    toeplitz,
    verify_representation,
)
from .analysis import (
    CompletionVerdict,
    HyponormalVerdict,
    InterpolationCertificate,
    PairVerdict,
    TupleVerdict,
    abrahamse_check,
    completion_classify,
    degree_equality_check,
    hyponormal,
    kernel_inclusion,
    pair_analyze,
    rank_formula,
    solve_c_phi,
    tuple_analyze,
)

__version__ = "0.1.0"
