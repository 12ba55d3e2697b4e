"""Market entry under optimism: enter when the tail average beats the cost.

A firm weighing a sunk cost k against a random profit enters exactly
when the tail average of the profit shock exceeds k.  Since that
average is nondecreasing in the optimism level, entry is a single
crossing: there is one threshold level above which the firm enters.
The threshold is found by bisection; for power-law profits the entry
condition collapses to a cutoff on the plain quantile, which is also
provided, in both the corrected and the originally printed variants.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .distributions import Distribution, DomainError, NumericError, ZeroMeanWarning
from .superquantile import DEFAULT_TOL, Action, check_optimism, superquantile

__all__ = [
    "EntryProblem",
    "EntryDecision",
    "ParetoEntryCutoff",
    "entry_decision",
    "entry_threshold",
    "pareto_entry_cutoff",
]

_MEAN_TOL = 1e-6
_ALPHA_CEILING = 1.0 - 1e-12


@dataclass(frozen=True)
class EntryProblem:
    """A profit shock against a sunk entry cost."""

    shock: Distribution
    k: float

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 0.0):
            raise DomainError("entry cost k must be positive")
        mean = self.shock.mean()
        if math.isfinite(mean) and abs(mean) > _MEAN_TOL:
            warnings.warn(
                f"profit shock has mean {mean:.6g}; the entry model's "
                "convention is a mean-zero shock",
                ZeroMeanWarning,
                stacklevel=3,
            )


@dataclass(frozen=True)
class EntryDecision:
    """Verdict plus the margin it rests on."""

    enter: bool
    gap: float

    @property
    def verdict(self) -> str:
        return "enter" if self.enter else "stay_out"


@dataclass(frozen=True)
class ParetoEntryCutoff:
    """Quantile cutoffs for entry with a power-law profit, both variants."""

    corrected: float
    paper_variant: float


def _shock_action(problem: EntryProblem) -> Action:
    return Action("entry-shock", problem.shock, 0.0)


def entry_decision(
    problem: EntryProblem,
    alpha,
    method: str = "auto",
    tol: float = DEFAULT_TOL,
) -> EntryDecision:
    """Enter iff the shock's tail average strictly exceeds the cost.

    The printed condition is strict, so the measure-zero tie at
    equality resolves to staying out.
    """
    a = check_optimism(alpha, allow_zero=False)
    value = superquantile(_shock_action(problem), a, method, tol).value
    gap = value - problem.k
    return EntryDecision(enter=gap > 0.0, gap=gap)


def entry_threshold(problem: EntryProblem, tol: float = 1e-9) -> float:
    """Least optimism level at which the firm enters.

    The gap between tail average and cost is nondecreasing in the
    optimism level, so its root is found by plain bisection.  A cost at
    or above the best conceivable profit has no root and is rejected.
    """
    t_ = float(tol)
    if not (math.isfinite(t_) and t_ > 0.0):
        raise DomainError("tol must be positive")
    action = _shock_action(problem)
    k = problem.k

    def gap(a: float) -> float:
        return superquantile(action, a).value - k

    sup = problem.shock.support()[1]
    if math.isfinite(sup) and k >= sup:
        raise DomainError(
            "entry cost is at or above the best conceivable profit; "
            "no optimism level induces entry"
        )
    lo = min(t_, 1e-6)
    if gap(lo) > 0.0:
        return lo
    hi = None
    for j in range(1, 13):
        cand = 1.0 - 10.0 ** (-j)
        if cand <= lo:
            continue
        if gap(cand) > 0.0:
            hi = cand
            break
    if hi is None:
        if gap(_ALPHA_CEILING) > 0.0:
            hi = _ALPHA_CEILING
        else:
            raise NumericError(
                "no optimism level below 1 - 1e-12 induces entry at this cost"
            )
    for _ in range(200):
        if hi - lo <= t_:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if gap(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def pareto_entry_cutoff(beta, k) -> ParetoEntryCutoff:
    """Entry as a quantile cutoff when profit is Pareto with tail index beta.

    With tail average quantile * beta / (beta - 1), entering iff the
    tail average exceeds k means the quantile must exceed
    k (beta - 1) / beta.  The originally printed rule, k beta /
    (beta - 1), is returned alongside; the two differ by the square of
    beta / (beta - 1).
    """
    b = float(beta)
    kk = float(k)
    if not (math.isfinite(b) and b > 1.0):
        raise DomainError("shape must exceed 1")
    if not (math.isfinite(kk) and kk > 0.0):
        raise DomainError("entry cost k must be positive")
    return ParetoEntryCutoff(
        corrected=kk * (b - 1.0) / b,
        paper_variant=kk * b / (b - 1.0),
    )
