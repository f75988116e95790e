"""Exponential polynomials, finite differences and Delta^m-invariant subspaces."""

from ._kernels import BACKEND
from .algebra import (
    DEFAULT_TOL,
    eigenvalues_small,
    generalized_eigenspace,
    rank,
    rank_kernel,
    rank_kernel_exact,
    subspace_ops,
)
from .counterexample import (
    AntidifferenceFn,
    Sawtooth,
    antidifference,
    build_counterexample,
    non_analytic_witness,
    verify_period_multiple,
)
from .diffops import (
    DifferenceOp,
    apply,
    apply_sampled,
    compose,
    delta,
    djokovic_check,
    mixed,
    power,
)
from .errors import (
    ConvergenceError,
    DeltaInvError,
    HypothesisError,
    InputError,
    TheoremViolation,
)
from .exppoly import AmbientSpace, ExpPolynomial, Polynomial, coordinates, evaluate, hull, translate
from .invariance import (
    ExactStep,
    Subspace,
    box_closure,
    decompose_PE,
    diamond_closure,
    is_invariant,
    main2_equivalence,
    montel_check,
)
from .recover import (
    SampledFamily,
    companion_system,
    difference_matrix,
    frequency_recovery,
    limit_B,
    mollify,
    run_recovery,
)
from .spectral import (
    chain_subspaces,
    delta_power_monomial,
    kernel_delta_power,
    matrix_delta,
    matrix_power,
    root_decomposition,
    stirling2,
)

__version__ = "0.1.0"
