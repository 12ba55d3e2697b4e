"""Censored beliefs: the distorted worldview equivalent to tail averaging.

Averaging utility over the best (1 - alpha) mass is the same as taking
a plain expectation under a belief that throws away the worst alpha
mass and renormalizes what remains.  This module makes that belief an
object: its cdf is 0 below the alpha-quantile and
(F(z) - alpha) / (1 - alpha) above it, and its mean reproduces the tail
average exactly.

The distortion is bounded: the censored density never exceeds the true
density by more than the factor 1 / (1 - alpha), so a modeler who caps
the admissible likelihood ratio at r admits exactly the optimism levels
with 1 / (1 - alpha) <= r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import Distribution, DomainError
from .superquantile import Action, _kink_points, _quad, check_optimism

__all__ = [
    "CensoredBelief",
    "censor",
    "censored_cdf",
    "belief_mean",
    "distortion_cost",
]

_RATIO_SLACK = 1e-12


@dataclass(frozen=True)
class CensoredBelief:
    """The renormalized upper tail of an action's utility law."""

    action: Action
    alpha: float
    threshold: float

    def cdf(self, z):
        """Probability the censored utility is at most ``z``."""
        return censored_cdf(self.action, self.alpha, z)

    def density_ratio(self) -> float:
        """Worst-case likelihood ratio of the belief to the truth."""
        return 1.0 / (1.0 - self.alpha)

    def mean(self, tol: float = 1e-10) -> float:
        return belief_mean(self, tol)


def censor(action: Action, alpha) -> CensoredBelief:
    """Belief that keeps only the action's best (1 - alpha) utility mass."""
    a = check_optimism(alpha, allow_zero=False)
    if not action.law.is_continuous:
        raise DomainError("censoring needs a continuous law")
    threshold = action.u + float(action.law.quantile(a))
    return CensoredBelief(action=action, alpha=a, threshold=threshold)


def censored_cdf(action: Action, alpha, z):
    """cdf of the censored belief, vectorized over ``z``.

    Zero strictly below the alpha-quantile of the utility law, then the
    excess mass (F(z) - alpha) / (1 - alpha) clipped to [0, 1].
    """
    a = check_optimism(alpha, allow_zero=False)
    law = action.law
    z_arr = np.asarray(z, dtype=float)
    base = law.cdf(z_arr - action.u)
    out = np.clip((np.asarray(base, dtype=float) - a) / (1.0 - a), 0.0, 1.0)
    threshold = float(law.quantile(a))
    out = np.where(z_arr - action.u < threshold, 0.0, out)
    if np.ndim(z) == 0:
        return float(out)
    return out


def belief_mean(belief: CensoredBelief, tol: float = 1e-10) -> float:
    """Expectation under a censored belief, by direct tail quadrature.

    Independent of the tail-average engines, so agreement between the
    two is a real consistency check rather than a tautology.
    """
    t_ = float(tol)
    if not (math.isfinite(t_) and t_ > 0.0):
        raise DomainError("tol must be positive")
    law = belief.action.law
    q = belief.threshold - belief.action.u
    hi = law.support()[1]
    val, _ = _quad(
        lambda x: x * law.pdf(x),
        q,
        hi,
        epsabs=0.5 * t_ * (1.0 - belief.alpha),
        points=_kink_points(law),
    )
    return belief.action.u + val / (1.0 - belief.alpha)


def distortion_cost(max_ratio, alpha) -> float:
    """Penalty for adopting the censored belief under a likelihood-ratio cap.

    Censoring at optimism alpha inflates densities by exactly
    1 / (1 - alpha); beliefs within the cap are free, anything beyond it
    is inadmissible.
    """
    r = float(max_ratio)
    if not math.isfinite(r) or r < 0.0:
        raise DomainError("max_ratio must be a finite nonnegative number")
    a = check_optimism(alpha)
    needed = 1.0 / (1.0 - a)
    if needed <= r + _RATIO_SLACK:
        return 0.0
    return math.inf
