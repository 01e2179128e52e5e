"""Executable Brouwerian counterexamples.

A decider is any callable that receives a :class:`CReal` and returns a
finite verdict after finitely many oracle queries.  Each reduction runs the
decider on the zero stream, notes the deepest precision ``K`` it inspected,
and builds an adversarial real that agrees with zero up to ``K`` but whose
sign makes the committed verdict false.  A decider that keeps querying past
the budget is reported as non-total instead.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional

from .reals import (
    BudgetExceeded,
    CReal,
    Verdict,
    _as_fraction,
    approx_to,
    creal_abs,
    dichotomy,
    dyadic,
    format_rational,
    minus_part,
    plus_part,
    pos_or_small,
    scale_rational,
    sub,
)

__all__ = [
    "AdversarialReal",
    "Branch",
    "Outcome",
    "FalsificationReport",
    "make_adversarial",
    "hull_membership_reduction",
    "osculation_reduction",
    "closure_reduction",
    "BUILTIN_DECIDERS",
    "builtin_decider",
    "default_budget",
    "BudgetExceeded",
]

DEFAULT_BUDGET = 1 << 10
# guards against deciders that loop without ever raising their precision
MAX_QUERIES = 1 << 16

Decider = Callable[[CReal], Any]


def default_budget() -> int:
    return int(os.environ.get("CONVEXKERNEL_BUDGET", DEFAULT_BUDGET))


class TooManyQueries(RuntimeError):
    pass


class AdversarialReal(CReal):
    """0 below precision N, then sign * 2**-N; records every query."""

    __slots__ = ("commitment_stage", "sign")

    def __init__(self, commitment_stage: int, sign: int, budget: Optional[int] = None):
        if commitment_stage < 0:
            raise ValueError("commitment stage must be non-negative")
        if sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        value = sign * dyadic(commitment_stage)
        zero = Fraction(0)
        super().__init__(lambda k: zero if k < commitment_stage else value,
                         record=True, budget=budget)
        self.commitment_stage = commitment_stage
        self.sign = sign

    def approx(self, k: int) -> Fraction:
        if self.query_log is not None and len(self.query_log) >= MAX_QUERIES:
            raise TooManyQueries(f"more than {MAX_QUERIES} oracle queries")
        return super().approx(k)

    @property
    def value(self) -> Fraction:
        return self.sign * dyadic(self.commitment_stage)

    def describe(self) -> dict:
        return {"commitment_stage": self.commitment_stage, "sign": self.sign}


def make_adversarial(stage: int, sign: int, budget: Optional[int] = None) -> AdversarialReal:
    return AdversarialReal(stage, sign, budget)


class Branch(enum.Enum):
    """Verdicts for the two-element-set reduction: which part of S holds alpha."""

    ZERO = "Zero"    # alpha = 0 (so alpha < c)
    ALPHA = "Alpha"  # alpha > 0


class Outcome(enum.Enum):
    FALSIFIED = "Falsified"
    NON_TOTAL = "NonTotal"
    INCONSISTENT = "Inconsistent"


@dataclass
class FalsificationReport:
    reduction: str
    principle: str
    outcome: Outcome
    probe_input: dict
    committed_verdict: Optional[str] = None
    max_queried_precision: Optional[int] = None
    refuting_input: Optional[dict] = None
    replay_verdict: Optional[str] = None
    replay_consistent: Optional[bool] = None
    margin: Optional[Fraction] = None
    check_precision: Optional[int] = None
    certificate: str = ""
    notes: list[str] = field(default_factory=list)

    @property
    def falsified(self) -> bool:
        return self.outcome is Outcome.FALSIFIED

    def to_json(self) -> dict:
        def rat(q):
            return None if q is None else format_rational(q)

        return {
            "reduction": self.reduction,
            "principle": self.principle,
            "outcome": self.outcome.value,
            "probe_input": self.probe_input,
            "committed_verdict": self.committed_verdict,
            "max_queried_precision": self.max_queried_precision,
            "refuting_input": self.refuting_input,
            "replay_verdict": self.replay_verdict,
            "replay_consistent": self.replay_consistent,
            "margin": rat(self.margin),
            "check_precision": self.check_precision,
            "certificate": self.certificate,
            "notes": list(self.notes),
        }


def _run(decider: Decider, alpha: AdversarialReal):
    """Run ``decider``; returns (verdict, log) or (None, log) if it is not total."""
    try:
        verdict = decider(alpha)
    except (BudgetExceeded, TooManyQueries):
        return None, list(alpha.query_log)
    return verdict, list(alpha.query_log)


def _show(verdict) -> str:
    if isinstance(verdict, Branch):
        return verdict.value
    return format_rational(_as_fraction(verdict))


def _certified_nonzero(x: CReal, k: int) -> Optional[Fraction]:
    """Lower bound on |x| from one approximation at ``k``, or None."""
    a = abs(x.approx(k))
    bound = a - dyadic(k)
    return bound if bound > 0 else None


def _real_line_reduction(decider: Decider, name: str, budget: Optional[int],
                         sign_for: Callable[[Verdict], int],
                         residual: Callable[[CReal, Fraction, int], CReal]) -> FalsificationReport:
    budget = default_budget() if budget is None else budget
    probe = make_adversarial(budget + 1, 0, budget)
    report = FalsificationReport(name, "LLPO", Outcome.NON_TOTAL,
                                 {"commitment_stage": None, "sign": 0, "stream": "zero"})
    verdict, log = _run(decider, probe)
    if verdict is None:
        report.notes.append(f"decider exceeded precision budget {budget} on the zero stream")
        return report
    t = _as_fraction(verdict)
    K = max(log, default=-1)
    report.committed_verdict = _show(t)
    report.max_queried_precision = K
    # either t > 0 or t < 1; the branch names the sign whose forced value it excludes
    side = dichotomy(0, 1, 1, t)
    sign = sign_for(side)
    refuting = make_adversarial(K + 1, sign)
    replay, replay_log = _run(decider, refuting)
    report.refuting_input = refuting.describe()
    report.replay_verdict = None if replay is None else _show(replay)
    report.replay_consistent = replay is not None and replay_log == log and \
        _as_fraction(replay) == t
    if not report.replay_consistent:
        report.outcome = Outcome.INCONSISTENT
        report.notes.append("decider is not a function of its oracle answers")
        return report
    alpha = make_adversarial(K + 1, sign)
    j = K + 4
    report.check_precision = j
    report.margin = _certified_nonzero(residual(alpha, t, sign), j)
    if report.margin is not None:
        report.outcome = Outcome.FALSIFIED
        report.certificate = f"t-branch {side}; residual bounded away from 0 at precision {j}"
    return report


def hull_membership_reduction(decider: Decider, budget: Optional[int] = None) -> FalsificationReport:
    """The decider claims t in [0, 1] with alpha = (2t - 1)|alpha| for every alpha.

    For alpha > 0 only t = 1 works and for alpha < 0 only t = 0.
    """
    def residual(alpha: CReal, t: Fraction, sign: int) -> CReal:
        return sub(alpha, scale_rational(creal_abs(alpha), 2 * t - 1))

    return _real_line_reduction(
        decider, "HullMembership", budget,
        # t < 1 rules out the value forced by alpha > 0
        lambda side: 1 if side is Verdict.GAMMA_LT_BETA else -1,
        residual)


def osculation_reduction(decider: Decider, budget: Optional[int] = None) -> FalsificationReport:
    """The decider claims x = lam*alpha is common to B_{alpha-}(0) and B_{alpha+}(alpha).

    For alpha > 0 the first ball is {0}, forcing lam = 0; for alpha < 0 the
    second ball is {alpha}, forcing lam = 1.
    """
    def residual(alpha: CReal, lam: Fraction, sign: int) -> CReal:
        # distance from x to the ball that alpha's sign collapses to a point
        x = scale_rational(alpha, lam)
        if sign > 0:
            return sub(creal_abs(x), minus_part(alpha))
        return sub(creal_abs(sub(x, alpha)), plus_part(alpha))

    return _real_line_reduction(
        decider, "OsculationRealLine", budget,
        # lam > 0 rules out alpha > 0, lam < 1 rules out alpha < 0
        lambda side: 1 if side is Verdict.GAMMA_GT_ALPHA else -1,
        residual)


def closure_reduction(decider: Decider, budget: Optional[int] = None) -> FalsificationReport:
    """The decider names the part of S = {0 : alpha < 1} u {alpha : alpha > 0} holding alpha >= 0.

    Checked in its LPO form: Zero asserts alpha = 0, Alpha asserts alpha > 0.
    """
    budget = default_budget() if budget is None else budget
    probe = make_adversarial(budget + 1, 0, budget)
    report = FalsificationReport("TwoElementClosure", "LPO", Outcome.NON_TOTAL,
                                 {"commitment_stage": None, "sign": 0, "stream": "zero"})
    verdict, log = _run(decider, probe)
    if verdict is None:
        report.notes.append(f"decider exceeded precision budget {budget} on the zero stream")
        return report
    verdict = Branch(verdict)
    K = max(log, default=-1)
    report.committed_verdict = verdict.value
    report.max_queried_precision = K
    sign = 1 if verdict is Branch.ZERO else 0
    refuting = make_adversarial(K + 1, sign)
    replay, replay_log = _run(decider, refuting)
    report.refuting_input = refuting.describe()
    report.replay_verdict = None if replay is None else Branch(replay).value
    report.replay_consistent = replay is not None and replay_log == log and Branch(replay) is verdict
    if not report.replay_consistent:
        report.outcome = Outcome.INCONSISTENT
        report.notes.append("decider is not a function of its oracle answers")
        return report
    alpha = make_adversarial(K + 1, sign)
    if verdict is Branch.ZERO:
        j = K + 4
        report.check_precision = j
        report.margin = _certified_nonzero(alpha, j)
        if report.margin is not None:
            report.outcome = Outcome.FALSIFIED
            report.certificate = f"alpha > 0 certified at precision {j}"
    else:
        depth = max(2 * K, 32)
        report.check_precision = depth
        if pos_or_small(alpha, dyadic(depth)) is Verdict.SMALLER_THAN_E:
            report.outcome = Outcome.FALSIFIED
            report.margin = dyadic(depth)
            report.certificate = (f"finite-depth certificate: the all-zero continuation "
                                  f"gives alpha < 2**-{depth}, so alpha > 0 is unsupported")
    return report


# --------------------------------------------------------------------------
# built-in deciders

def _hull_const(alpha: CReal, t=Fraction(1, 2)):
    return t


def _hull_threshold(alpha: CReal, k: int = 20):
    return Fraction(1) if approx_to(alpha, k) > 0 else Fraction(0)


def _hull_honest(alpha: CReal):
    k = 0
    while True:
        a = approx_to(alpha, k)
        if a > dyadic(k):
            return Fraction(1)
        if a < -dyadic(k):
            return Fraction(0)
        k += 1


def _osc_const(alpha: CReal, lam=Fraction(1, 2)):
    return lam


def _osc_threshold(alpha: CReal, k: int = 20):
    # lam = 0 is the common point when alpha > 0, lam = 1 when alpha < 0
    return Fraction(0) if approx_to(alpha, k) > 0 else Fraction(1)


def _osc_honest(alpha: CReal):
    return Fraction(1) - _hull_honest(alpha)


def _closure_const(alpha: CReal):
    return Branch.ALPHA


def _closure_threshold(alpha: CReal, k: int = 16):
    return Branch.ALPHA if approx_to(alpha, k) > dyadic(k) else Branch.ZERO


def _closure_honest(alpha: CReal):
    # Alpha once positivity is certified; alpha = 0 is never certifiable
    k = 0
    while True:
        if pos_or_small(alpha, dyadic(k)) is Verdict.POS:
            return Branch.ALPHA
        k += 1


BUILTIN_DECIDERS: dict[str, dict[str, Decider]] = {
    "hull": {"const-t": _hull_const, "threshold-k": _hull_threshold,
             "honest-partial": _hull_honest},
    "osculation": {"const-t": _osc_const, "threshold-k": _osc_threshold,
                   "honest-partial": _osc_honest},
    "closure": {"const-t": _closure_const, "threshold-k": _closure_threshold,
                "honest-partial": _closure_honest},
}

REDUCTIONS = {
    "hull": hull_membership_reduction,
    "osculation": osculation_reduction,
    "closure": closure_reduction,
}


def builtin_decider(reduction: str, text: str) -> Decider:
    """Resolve ``builtin:<name>`` or ``builtin:<name>=<param>``.

    The parameter is the constant for const-t (a rational) or the precision
    for threshold-k.
    """
    name = text.removeprefix("builtin:")
    name, _, param = name.partition("=")
    try:
        fn = BUILTIN_DECIDERS[reduction][name]
    except KeyError:
        raise ValueError(f"unknown decider {text!r} for reduction {reduction!r}") from None
    if not param:
        return fn
    if name == "threshold-k":
        k = int(param)
        return lambda alpha: fn(alpha, k)
    if name == "const-t" and reduction != "closure":
        value = _as_fraction(param)
        return lambda alpha: fn(alpha, value)
    raise ValueError(f"decider {name!r} takes no parameter")
