"""Deterministic choice among actions by tail-average utility.

The decision rule: evaluate each action's tail average at a shared
optimism level and pick the largest.  Ties within a small tolerance go
to the earliest action in input order so runs are reproducible.

Specialized front ends cover the common model classes: additive
utility-plus-shock menus, scaled heavy-tailed prizes, and exponential
(constant absolute risk aversion) utility over normal payoffs, which
admits a closed form worth having as an independent route.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

from scipy import special

from .distributions import (
    Distribution,
    DomainError,
    Normal,
    Pareto,
    ZeroMeanWarning,
)
from .superquantile import (
    DEFAULT_TOL,
    Action,
    action_quantile,
    check_optimism,
    superquantile,
)

__all__ = [
    "ChoiceProblem",
    "ChoiceResult",
    "CaraSpec",
    "evaluate",
    "choose",
    "quantile_choose",
    "additive_choose",
    "pareto_choose",
    "cara_value",
    "cara_choose",
]

TIE_TOL = 1e-9
_SHOCK_MEAN_TOL = 1e-6


@dataclass(frozen=True)
class ChoiceProblem:
    """A menu of actions judged at one optimism level."""

    actions: tuple[Action, ...]
    alpha: float
    method: str = "auto"
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if len(self.actions) < 1:
            raise DomainError("a choice needs at least one action")
        labels = [a.label for a in self.actions]
        if len(set(labels)) != len(labels):
            raise DomainError("action labels must be distinct")
        check_optimism(self.alpha)


@dataclass(frozen=True)
class ChoiceResult:
    """Winner plus every evaluated value, in input order."""

    winner: str
    values: dict[str, float] = field(compare=False)
    ties: tuple[str, ...] = ()


def evaluate(
    problem: ChoiceProblem,
    *,
    paper_variant_pareto: bool = False,
    mc_seed: int = 0,
) -> dict[str, float]:
    """Tail-average value of each action, keyed by label."""
    out: dict[str, float] = {}
    for action in problem.actions:
        try:
            res = superquantile(
                action,
                problem.alpha,
                problem.method,
                problem.tol,
                paper_variant_pareto=paper_variant_pareto,
                mc_seed=mc_seed,
            )
        except (DomainError, RuntimeError) as err:
            raise type(err)(f"action {action.label!r}: {err}") from err
        out[action.label] = res.value
    return out


def _argmax_with_ties(values: dict[str, float]) -> tuple[str, tuple[str, ...]]:
    best = max(values.values())
    tied = tuple(lbl for lbl, v in values.items() if v >= best - TIE_TOL)
    return tied[0], tied


def choose(
    problem: ChoiceProblem,
    *,
    paper_variant_pareto: bool = False,
    mc_seed: int = 0,
) -> ChoiceResult:
    """Pick the action with the largest tail-average utility."""
    values = evaluate(
        problem, paper_variant_pareto=paper_variant_pareto, mc_seed=mc_seed
    )
    winner, ties = _argmax_with_ties(values)
    return ChoiceResult(winner=winner, values=values, ties=ties)


def quantile_choose(problem: ChoiceProblem) -> ChoiceResult:
    """Pick by the plain alpha-quantile instead of the tail average.

    The quantile rule ignores everything above the threshold, so it can
    disagree with the tail average on menus that differ only in upside.
    """
    a_ = check_optimism(problem.alpha, allow_zero=False)
    values = {a.label: action_quantile(a, a_) for a in problem.actions}
    winner, ties = _argmax_with_ties(values)
    return ChoiceResult(winner=winner, values=values, ties=ties)


def _as_action(label: str, u: float, shock: Distribution) -> Action:
    mean = shock.mean()
    if math.isfinite(mean) and abs(mean) > _SHOCK_MEAN_TOL:
        warnings.warn(
            f"shock for action {label!r} has mean {mean:.6g}; the utility "
            "split is no longer deterministic-part versus pure noise",
            ZeroMeanWarning,
            stacklevel=3,
        )
    return Action.additive(label, u, shock)


def additive_choose(
    items: Sequence[tuple[str, float, Distribution]],
    alpha,
    method: str = "auto",
    tol: float = DEFAULT_TOL,
) -> ChoiceResult:
    """Choose among actions of the form sure amount + zero-mean shock."""
    actions = tuple(_as_action(lbl, float(u), shock) for lbl, u, shock in items)
    return choose(ChoiceProblem(actions, alpha, method, tol))


def pareto_choose(
    items: Sequence[tuple[str, float, tuple[float, float]]],
    alpha,
    method: str = "auto",
    tol: float = DEFAULT_TOL,
    *,
    paper_variant_pareto: bool = False,
) -> ChoiceResult:
    """Choose among sure amounts plus power-law prizes.

    Each item is (label, u, (scale, shape)); the prize is Pareto with
    that scale and tail index.
    """
    actions = tuple(
        Action.additive(lbl, float(u), Pareto(scale=float(sc), shape=float(sh)))
        for lbl, u, (sc, sh) in items
    )
    return choose(
        ChoiceProblem(actions, alpha, method, tol),
        paper_variant_pareto=paper_variant_pareto,
    )


@dataclass(frozen=True)
class CaraSpec:
    """An exponential-utility action: utility u - exp(-r w), w ~ Normal(0, sigma^2)."""

    u: float
    r: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r > 0.0):
            raise DomainError("risk aversion r must be positive")
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise DomainError("sigma must be positive")
        if not math.isfinite(self.u):
            raise DomainError("u must be finite")


def cara_value(spec: CaraSpec, alpha) -> float:
    """Tail average of exponential utility over a normal shock, closed form.

    The utility u - exp(-r w) is increasing in the shock, so its best
    (1 - alpha) mass is the shock's upper tail, and the average is
    u - exp(r^2 sigma^2 / 2) (1 - Phi(r sigma + z_alpha)) / (1 - alpha)
    by completing the square in the lognormal tail integral.
    """
    a = check_optimism(alpha, allow_zero=False)
    z = special.ndtri(a)
    tail = special.ndtr(-(spec.r * spec.sigma + z))
    bump = math.exp(0.5 * spec.r * spec.r * spec.sigma * spec.sigma)
    return spec.u - bump * tail / (1.0 - a)


def cara_choose(specs: Sequence[tuple[str, CaraSpec]], alpha) -> ChoiceResult:
    """Choose among exponential-utility actions sharing one risk aversion.

    Risk aversion is a trait of the decision maker, not of an action,
    so mixed r values on one menu are rejected; per-action sigma is
    fine.
    """
    if len(specs) < 1:
        raise DomainError("a choice needs at least one action")
    labels = [lbl for lbl, _ in specs]
    if len(set(labels)) != len(labels):
        raise DomainError("action labels must be distinct")
    rs = {s.r for _, s in specs}
    if len(rs) != 1:
        raise DomainError("all actions must share one risk aversion r")
    values = {lbl: cara_value(s, alpha) for lbl, s in specs}
    winner, ties = _argmax_with_ties(values)
    return ChoiceResult(winner=winner, values=values, ties=ties)
