"""Stochastic choice: logit probabilities driven by tail-average values.

Feeding tail averages through a Luce/logit rule gives choice
probabilities that shift toward upside-heavy actions as optimism grows.
The curve over an optimism grid is the package's reproduction of the
classic risky-versus-safe picture: the risky action's probability
climbs from its expected-value level toward 1.

Whether a probability curve is monotone in optimism reduces to an
expected-excess comparison: the curve for action a against b is
nondecreasing exactly when E[(u_a - Q_alpha(a))+] >= E[(u_b -
Q_alpha(b))+] at every level.  Both sides are checked on a finite grid;
the verdict is explicitly grid-relative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .distributions import DomainError
from .superquantile import (
    DEFAULT_TOL,
    Action,
    action_quantile,
    check_optimism,
    superquantile,
)

__all__ = [
    "DEFAULT_GRID",
    "LuceCurve",
    "MonotoneVerdict",
    "CurveAudit",
    "luce_probs",
    "luce_curve",
    "expected_excess",
    "monotone_pair_check",
    "curve_monotonicity_audit",
    "default_grid",
]

_PROB_SUM_TOL = 1e-12
_CURVE_SLACK = 1e-9


def default_grid(count: int = 99) -> tuple[float, ...]:
    """Evenly spaced optimism levels {1/(n+1), ..., n/(n+1)}-style grid.

    The default is the 99-point grid 0.01, 0.02, ..., 0.99.
    """
    n = int(count)
    if n < 1:
        raise DomainError("grid needs at least one point")
    return tuple(np.linspace(1.0 / (n + 1), n / (n + 1.0), n))


DEFAULT_GRID = default_grid()


@dataclass(frozen=True)
class LuceCurve:
    """Values and choice probabilities per action along an optimism grid."""

    alphas: tuple[float, ...]
    values: dict[str, tuple[float, ...]]
    probs: dict[str, tuple[float, ...]]

    def labels(self) -> tuple[str, ...]:
        return tuple(self.probs)


@dataclass(frozen=True)
class MonotoneVerdict:
    """Outcome of the pairwise excess comparison on a specific grid."""

    monotone: bool
    violations: tuple[tuple[float, float, float], ...]
    grid: tuple[float, ...]


@dataclass(frozen=True)
class CurveAudit:
    """Whether a probability curve is nondecreasing along its grid."""

    monotone: bool
    first_violation: Optional[int]


def luce_probs(values: dict[str, float]) -> dict[str, float]:
    """Softmax choice probabilities over a menu of values.

    Computed with max-subtraction so wildly separated values neither
    overflow nor collapse to exact 0/1 prematurely.
    """
    if len(values) < 2:
        raise DomainError("stochastic choice needs at least two actions")
    vals = np.asarray(list(values.values()), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise DomainError("values must be finite")
    shifted = np.exp(vals - vals.max())
    probs = shifted / shifted.sum()
    return dict(zip(values.keys(), (float(p) for p in probs)))


def _check_grid(grid: Sequence[float]) -> tuple[float, ...]:
    pts = tuple(float(a) for a in grid)
    if len(pts) < 1:
        raise DomainError("grid must be nonempty")
    for a in pts:
        check_optimism(a, allow_zero=False)
    if any(b <= a for a, b in zip(pts, pts[1:])):
        raise DomainError("grid must be strictly increasing")
    return pts


def luce_curve(
    actions: Sequence[Action],
    grid: Sequence[float] = DEFAULT_GRID,
    method: str = "auto",
    tol: float = DEFAULT_TOL,
    *,
    paper_variant_pareto: bool = False,
    mc_seed: int = 0,
) -> LuceCurve:
    """Tail-average values and logit probabilities along an optimism grid."""
    if len(actions) < 2:
        raise DomainError("stochastic choice needs at least two actions")
    labels = [a.label for a in actions]
    if len(set(labels)) != len(labels):
        raise DomainError("action labels must be distinct")
    pts = _check_grid(grid)
    values: dict[str, list[float]] = {lbl: [] for lbl in labels}
    probs: dict[str, list[float]] = {lbl: [] for lbl in labels}
    for a in pts:
        row: dict[str, float] = {}
        for action in actions:
            try:
                row[action.label] = superquantile(
                    action,
                    a,
                    method,
                    tol,
                    paper_variant_pareto=paper_variant_pareto,
                    mc_seed=mc_seed,
                ).value
            except (DomainError, RuntimeError) as err:
                raise type(err)(
                    f"action {action.label!r} at alpha={a:.6g}: {err}"
                ) from err
        p = luce_probs(row)
        for lbl in labels:
            values[lbl].append(row[lbl])
            probs[lbl].append(p[lbl])
    return LuceCurve(
        alphas=pts,
        values={lbl: tuple(v) for lbl, v in values.items()},
        probs={lbl: tuple(v) for lbl, v in probs.items()},
    )


def expected_excess(action: Action, alpha, tol: float = DEFAULT_TOL) -> float:
    """Mean utility overshoot above the action's own alpha-quantile.

    E[(u - Q_alpha)+] equals (tail average - quantile) (1 - alpha),
    which reuses whichever engine the dispatcher picks.
    """
    a = check_optimism(alpha, allow_zero=False)
    value = superquantile(action, a, tol=tol).value
    quant = action_quantile(action, a)
    return (value - quant) * (1.0 - a)


def monotone_pair_check(
    a: Action,
    b: Action,
    grid: Sequence[float] = DEFAULT_GRID,
    tol: float = _CURVE_SLACK,
) -> MonotoneVerdict:
    """Grid test of the excess condition for a monotone choice curve.

    The probability of choosing ``a`` over ``b`` is nondecreasing in
    optimism iff a's expected excess dominates b's at every level; a
    finite grid can certify violations but only sample the iff's
    universal quantifier, so the grid rides along in the verdict.
    """
    pts = _check_grid(grid)
    t_ = float(tol)
    violations = []
    for alpha in pts:
        lhs = expected_excess(a, alpha)
        rhs = expected_excess(b, alpha)
        if lhs < rhs - t_:
            violations.append((alpha, lhs, rhs))
    return MonotoneVerdict(
        monotone=not violations, violations=tuple(violations), grid=pts
    )


def curve_monotonicity_audit(curve: LuceCurve, pair: tuple[str, str]) -> CurveAudit:
    """Check that the first label's probability never falls along the curve."""
    first, second = pair
    for lbl in (first, second):
        if lbl not in curve.probs:
            raise DomainError(f"label {lbl!r} not on the curve")
    p = curve.probs[first]
    for i in range(1, len(p)):
        if p[i] < p[i - 1] - _CURVE_SLACK:
            return CurveAudit(monotone=False, first_violation=i)
    return CurveAudit(monotone=True, first_violation=None)
