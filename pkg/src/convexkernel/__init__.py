"""Constructive convexity toolkit over exact real arithmetic."""

from .reals import (
    BudgetExceeded,
    CReal,
    Verdict,
    WitnessViolation,
    add,
    approx_to,
    creal_abs,
    creal_max,
    creal_min,
    dichotomy,
    div,
    format_rational,
    from_rational,
    inv,
    minus_part,
    mul,
    neg,
    parse_rational,
    plus_part,
    pos_or_small,
    scale_rational,
    sqrt,
    sub,
)
from .space import Ball, Membership, NormKind, Segment, Vector, distance, hull_point, in_ball, midpoint, norm
from .moduli import (
    CheckResult,
    ModulusCertificate,
    Source,
    base_modulus_euclidean,
    diameter_bound_check,
    extended_modulus,
    intersection_delta,
    midpoint_bound_check,
)
from .witnesses import (
    DependenceWitness,
    WitnessPoint,
    hull_common_points,
    linear_dependence_witness,
    metric_point,
    near_convex_point,
    osculation_boundary_check,
    osculation_common_point,
    unique_point_strict,
)
from .harness import (
    AdversarialReal,
    Branch,
    FalsificationReport,
    Outcome,
    closure_reduction,
    hull_membership_reduction,
    make_adversarial,
    osculation_reduction,
)

__version__ = "0.1.0"
