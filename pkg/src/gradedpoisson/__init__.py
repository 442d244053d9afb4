"""Exact graded Poisson geometry on T*[1]R^n and Poisson reduction checks."""
from .algebra import Chart, SuperFn, eval_even, partial_even, partial_odd, render
from .brackets import (
    DERIVED_SIGN,
    apply_vector_field,
    fn_bracket,
    is_poisson,
    jacobi_witness,
    lie_derivative_bivector,
    poisson_bracket,
    sharp,
)
from .dsl import ParseError, ProblemFile, SemanticError, parse, parse_expr
from .geometry import (
    DistributionSpec,
    RankKind,
    RankReport,
    SubmanifoldSpec,
    annihilator,
    conormal_gens,
    constant_rank_matrix,
    intersect_distribution_with_tangent,
    is_involutive,
    is_presymplectic,
)
from .ideals import GradedIdeal, Membership, build_engine, contains, is_coisotropic, normalizer_contains
from .reduction import (
    BracketTable,
    LiftDependenceError,
    ReductionProblem,
    algebraic_reduce,
    check_coisotropic_reduction,
    check_halfcond,
    check_stages,
    check_thm_a2,
    graded_reduce,
    identity_xfg,
    lift_independence,
    reduce,
)
from .report import Check, HypothesisReport, InternalInconsistency, Verdict
from .schouten import schouten_direct

__version__ = "0.1.0"
