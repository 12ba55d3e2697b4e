"""Upper-tail utility averages for actions, five ways.

The central quantity is the average of an action's utility over its
best (1 - alpha) probability mass.  ``alpha`` is the optimism level:
0 recovers the plain expectation, values near 1 keep only the most
favorable outcomes.  Five engines compute the same number by genuinely
different routes so they can cross-validate each other:

* ``closed_form``        family algebra, exact where available
* ``quantile_average``   quadrature of the quantile function over the tail
* ``rockafellar``        dual form min over thresholds lambda of
                         lambda + E[(u - lambda)+] / (1 - alpha)
* ``conditional_tail``   mean of the utility density above its quantile
* ``monte_carlo``        average of the top order statistics of a sample

The quantile-average engine integrates after the substitution
theta = 1 - (1 - alpha) * exp(-t), which maps the tail (alpha, 1) onto
(0, inf) and turns endpoint divergences of heavy-tailed quantile
functions into exponentially decaying integrands.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .distributions import (
    AffineTransform,
    Degenerate,
    Distribution,
    DomainError,
    Empirical,
    NumericError,
    NumericWarning,
    Triangular,
)

__all__ = [
    "DEFAULT_TOL",
    "ENGINES",
    "Action",
    "SuperquantileResult",
    "LimitReport",
    "check_optimism",
    "action_quantile",
    "superquantile",
    "superquantile_quantile_average",
    "superquantile_rockafellar",
    "superquantile_conditional_tail",
    "superquantile_monte_carlo",
    "superquantile_dalpha",
    "limit_report",
]

DEFAULT_TOL = 1e-9

ENGINES = (
    "closed_form",
    "quantile_average",
    "rockafellar",
    "conditional_tail",
    "monte_carlo",
)

_SIMPSON_BUDGET = 1_000_000
_SIMPSON_BLOCK = 8.0
_SIMPSON_MAX_BLOCKS = 96
_BISECT_WIDTH = 1e-12
_BISECT_MAX_ITER = 200
_BRACKET_MAX_GROWTH = 1000


def check_optimism(alpha, *, allow_zero: bool = True) -> float:
    """Validate an optimism level and return it as a float."""
    a = float(alpha)
    if allow_zero:
        if not (math.isfinite(a) and 0.0 <= a < 1.0):
            raise DomainError("alpha must lie in [0,1)")
    else:
        if not (math.isfinite(a) and 0.0 < a < 1.0):
            raise DomainError("alpha must lie in (0,1)")
    return a


def _check_tol(tol) -> float:
    t = float(tol)
    if not (math.isfinite(t) and t > 0.0):
        raise DomainError("tol must be positive")
    return t


@dataclass(frozen=True)
class Action:
    """An alternative whose utility is a sure amount ``u`` plus a draw from ``law``.

    Two constructions cover the usual cases: ``Action.general`` wraps a
    full utility law directly, ``Action.additive`` splits utility into a
    deterministic part and a stochastic shock.  Both evaluate
    identically because every tail operation is translation covariant.
    """

    label: str
    law: Distribution
    u: float = 0.0

    def __post_init__(self):
        if not isinstance(self.label, str) or not self.label:
            raise DomainError("label must be a nonempty string")
        if not isinstance(self.law, Distribution):
            raise DomainError("law must be a distribution")
        if not math.isfinite(float(self.u)):
            raise DomainError("u must be finite")

    @classmethod
    def general(cls, label: str, utility_law: Distribution) -> "Action":
        return cls(label, utility_law, 0.0)

    @classmethod
    def additive(cls, label: str, u: float, shock: Distribution) -> "Action":
        return cls(label, shock, float(u))

    def utility_law(self) -> Distribution:
        """The full law of this action's utility, offset folded in."""
        if self.u == 0.0:
            return self.law
        return AffineTransform(self.law, 1.0, self.u)


@dataclass(frozen=True)
class SuperquantileResult:
    """Value of a tail average plus how it was obtained.

    ``multiplier`` is the tail threshold (the alpha-quantile of the
    utility law), which is also the optimal dual variable; ``value``
    always dominates it.  ``error_bound`` is the integration tolerance
    or, for Monte Carlo, the standard error of the tail block.
    """

    value: float
    multiplier: float
    engine: str
    error_bound: float


class LimitReport(NamedTuple):
    near_zero: float
    near_one: float


def _atom_values(law: Distribution):
    """Support points of a purely atomic law with equal weights, else None."""
    if isinstance(law, Degenerate):
        return np.asarray([law.value], dtype=float)
    if isinstance(law, Empirical):
        return np.asarray(law.values, dtype=float)
    if isinstance(law, AffineTransform):
        inner = _atom_values(law.base)
        if inner is None:
            return None
        return law.scale * inner + law.shift
    return None


def _kink_points(law: Distribution):
    """Interior density kinks, for quadrature subdivision."""
    if isinstance(law, Triangular):
        return (law.mode,)
    if isinstance(law, AffineTransform):
        return tuple(law.scale * p + law.shift for p in _kink_points(law.base))
    return ()


def action_quantile(action: Action, alpha) -> float:
    """Utility level the action beats with probability 1 - alpha.

    alpha = 0 returns the worst conceivable utility and is only defined
    when the law is bounded below.
    """
    a = check_optimism(alpha)
    if a == 0.0:
        lo = action.law.support()[0]
        if not math.isfinite(lo):
            raise DomainError("alpha=0 quantile undefined for a law unbounded below")
        return action.u + lo
    return action.u + float(action.law.quantile(a))


# ---------------------------------------------------------------------------
# quantile-average engine


def _adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, state, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    state["evals"] += 2
    if state["evals"] > _SIMPSON_BUDGET:
        raise NumericError(
            "quantile averaging exceeded its evaluation budget",
            best_estimate=state["done"] + whole,
        )
    flm = f(lm)
    frm = f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return _adaptive_simpson(
        f, a, m, fa, flm, fm, left, 0.5 * tol, state, depth - 1
    ) + _adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, state, depth - 1)


def _simpson_block(f, a, b, tol, state):
    fa = f(a)
    fm = f(0.5 * (a + b))
    fb = f(b)
    state["evals"] += 3
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, state, 48)


def superquantile_quantile_average(action: Action, alpha, tol: float = DEFAULT_TOL) -> SuperquantileResult:
    """Tail average as the integral of the quantile function.

    Integrates isf(q) dq over the top tail after substituting
    q = (1 - alpha) exp(-t), so the integrand decays exponentially even
    for polynomially exploding quantiles.
    """
    a = check_optimism(alpha, allow_zero=False)
    t_ = _check_tol(tol)
    law = action.law
    tail0 = 1.0 - a
    floor = np.finfo(float).tiny

    def g(t):
        q = tail0 * math.exp(-t)
        return float(law.isf(max(q, floor))) * math.exp(-t)

    state = {"evals": 0, "done": 0.0}
    total = 0.0
    prev_block = None
    lo = 0.0
    for k in range(_SIMPSON_MAX_BLOCKS):
        block_tol = t_ * 0.25 * 0.5 ** k
        try:
            block = _simpson_block(g, lo, lo + _SIMPSON_BLOCK, block_tol, state)
        except NumericError as err:
            best = total + (err.best_estimate or 0.0)
            raise NumericError(str(err), best_estimate=action.u + best) from None
        total += block
        state["done"] = total
        if prev_block is not None:
            mag, prev_mag = abs(block), abs(prev_block)
            ratio = min(mag / prev_mag if prev_mag > 0.0 else 0.0, 0.999)
            remainder = mag * ratio / (1.0 - ratio)
            if mag <= 0.25 * t_ and remainder <= 0.5 * t_:
                break
        prev_block = block
        lo += _SIMPSON_BLOCK
        if tail0 * math.exp(-lo) < floor:
            break
    else:
        raise NumericError(
            "quantile averaging did not converge within its block budget",
            best_estimate=action.u + total,
        )
    return SuperquantileResult(
        value=action.u + total,
        multiplier=action.u + float(law.quantile(a)),
        engine="quantile_average",
        error_bound=t_,
    )


# ---------------------------------------------------------------------------
# quadrature helpers shared by the density-based engines


def _quad(f, lo, hi, epsabs, points=()):
    kwargs = {"epsabs": epsabs, "epsrel": 1e-11, "limit": 200, "full_output": 1}
    interior = [p for p in points if lo < p < hi]
    if interior and math.isfinite(lo) and math.isfinite(hi):
        kwargs["points"] = interior
    out = integrate.quad(f, lo, hi, **kwargs)
    if len(out) > 3:
        raise NumericError(f"tail integration failed: {out[3]}", best_estimate=out[0])
    return float(out[0]), float(out[1])


def _positive_part_mean(law: Distribution, lam: float, epsabs: float):
    """E[(X - lam)+] for a continuous law, by tail quadrature."""
    hi = law.support()[1]
    if math.isfinite(hi) and lam >= hi:
        return 0.0, 0.0
    return _quad(
        lambda x: (x - lam) * law.pdf(x), lam, hi, epsabs, points=_kink_points(law)
    )


def _cdf_bisection(law: Distribution, alpha: float) -> float:
    """Smallest z with cdf(z) >= alpha, located without the quantile formula."""
    lo_sup, hi_sup = law.support()
    m = law.mean()
    if math.isfinite(lo_sup):
        lo = lo_sup
    else:
        step = max(1.0, abs(m))
        lo = m - step
        for _ in range(_BRACKET_MAX_GROWTH):
            if law.cdf(lo) < alpha:
                break
            step *= 2.0
            lo = m - step
        else:
            raise NumericError("lower bracket for the tail threshold did not close")
    if math.isfinite(hi_sup):
        hi = hi_sup
    else:
        step = max(1.0, abs(m))
        hi = m + step
        for _ in range(_BRACKET_MAX_GROWTH):
            if law.cdf(hi) >= alpha:
                break
            step *= 2.0
            hi = m + step
        else:
            raise NumericError("upper bracket for the tail threshold did not close")
    for _ in range(_BISECT_MAX_ITER):
        if hi - lo <= _BISECT_WIDTH:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if law.cdf(mid) >= alpha:
            hi = mid
        else:
            lo = mid
    return hi


def superquantile_rockafellar(action: Action, alpha, tol: float = DEFAULT_TOL) -> SuperquantileResult:
    """Tail average by its dual form.

    The optimal threshold solves cdf(lambda) = alpha, so it is located
    by monotone bisection on the cdf; the dual objective is then
    lambda + E[(X - lambda)+] / (1 - alpha).
    """
    a = check_optimism(alpha, allow_zero=False)
    t_ = _check_tol(tol)
    law = action.law
    atoms = _atom_values(law)
    if atoms is not None:
        lam = float(law.quantile(a))
        excess = float(np.mean(np.maximum(atoms - lam, 0.0)))
        return SuperquantileResult(
            value=action.u + lam + excess / (1.0 - a),
            multiplier=action.u + lam,
            engine="rockafellar",
            error_bound=0.0,
        )
    lam = _cdf_bisection(law, a)
    excess, err = _positive_part_mean(law, lam, epsabs=0.5 * t_ * (1.0 - a))
    return SuperquantileResult(
        value=action.u + lam + excess / (1.0 - a),
        multiplier=action.u + lam,
        engine="rockafellar",
        error_bound=max(t_, err / (1.0 - a)),
    )


def superquantile_conditional_tail(action: Action, alpha, tol: float = DEFAULT_TOL) -> SuperquantileResult:
    """Tail average as the conditional mean above the quantile."""
    a = check_optimism(alpha, allow_zero=False)
    t_ = _check_tol(tol)
    law = action.law
    if not law.is_continuous:
        raise DomainError("conditional tail needs a continuous law")
    q = float(law.quantile(a))
    hi = law.support()[1]
    val, err = _quad(
        lambda x: x * law.pdf(x), q, hi, epsabs=0.5 * t_ * (1.0 - a), points=_kink_points(law)
    )
    return SuperquantileResult(
        value=action.u + val / (1.0 - a),
        multiplier=action.u + q,
        engine="conditional_tail",
        error_bound=max(t_, err / (1.0 - a)),
    )


def superquantile_monte_carlo(samples, alpha) -> SuperquantileResult:
    """Average of the top ceil((1 - alpha) n) order statistics of a sample.

    Deterministic given the input list; the caller owns the sampling.
    """
    a = check_optimism(alpha)
    data = np.asarray(samples, dtype=float)
    if data.ndim != 1 or data.size < 1:
        raise DomainError("samples must be a nonempty vector")
    if not np.all(np.isfinite(data)):
        raise DomainError("samples must be finite")
    n = data.size
    if n < math.ceil(1.0 / (1.0 - a)):
        raise DomainError("sample too small to resolve the tail at this alpha")
    srt = np.sort(data)
    m = max(int(math.ceil((1.0 - a) * n - 1e-12)), 1)
    block = srt[n - m:]
    value = float(block.mean())
    if a == 0.0:
        threshold = float(srt[0])
    else:
        k = min(max(int(math.ceil(a * n - 1e-12)), 1), n)
        threshold = float(srt[k - 1])
    err = float(block.std(ddof=1) / math.sqrt(m)) if m > 1 else 0.0
    return SuperquantileResult(
        value=value, multiplier=threshold, engine="monte_carlo", error_bound=err
    )


# ---------------------------------------------------------------------------
# dispatcher


def _mean_result(action: Action) -> SuperquantileResult:
    # alpha = 0 is the plain expectation; the threshold degenerates to
    # the worst conceivable utility
    return SuperquantileResult(
        value=action.u + action.law.mean(),
        multiplier=action.u + action.law.support()[0],
        engine="closed_form",
        error_bound=0.0,
    )


def superquantile(
    action: Action,
    alpha,
    method: str = "auto",
    tol: float = DEFAULT_TOL,
    *,
    paper_variant_pareto: bool = False,
    mc_size: int = 200_000,
    mc_seed: int = 0,
) -> SuperquantileResult:
    """Tail average of an action's utility at optimism ``alpha``.

    ``method`` picks an engine explicitly or, with "auto", routes to the
    cheapest reliable one: closed form when the family has one, density
    quadrature for continuous laws, the exact order-statistic average
    for atomic laws.  ``monte_carlo`` on a non-atomic law draws
    ``mc_size`` seeded inverse-transform samples.
    """
    a = check_optimism(alpha)
    if method not in ("auto",) + ENGINES:
        raise DomainError(f"unknown engine {method!r}")
    law = action.law

    if method == "auto":
        if a == 0.0:
            return _mean_result(action)
        cf = law.closed_form_superquantile(a, paper_variant_pareto=paper_variant_pareto)
        if cf is not None:
            return SuperquantileResult(
                value=action.u + float(cf),
                multiplier=action.u + float(law.quantile(a)),
                engine="closed_form",
                error_bound=0.0,
            )
        if law.is_continuous:
            return superquantile_conditional_tail(action, a, tol)
        atoms = _atom_values(law)
        if atoms is not None and atoms.size >= math.ceil(1.0 / (1.0 - a)):
            inner = superquantile_monte_carlo(atoms, a)
            return SuperquantileResult(
                value=action.u + inner.value,
                multiplier=action.u + inner.multiplier,
                engine=inner.engine,
                error_bound=inner.error_bound,
            )
        return superquantile_quantile_average(action, a, tol)

    if method == "closed_form":
        cf = law.closed_form_superquantile(a, paper_variant_pareto=paper_variant_pareto)
        if cf is None:
            raise DomainError(f"no closed-form tail average for {type(law).__name__}")
        if a == 0.0:
            multiplier = action.u + law.support()[0]
        else:
            multiplier = action.u + float(law.quantile(a))
        return SuperquantileResult(
            value=action.u + float(cf),
            multiplier=multiplier,
            engine="closed_form",
            error_bound=0.0,
        )
    if method == "monte_carlo":
        atoms = _atom_values(law)
        if atoms is None:
            atoms = np.asarray(law.sample(mc_size, mc_seed), dtype=float)
        inner = superquantile_monte_carlo(atoms, a)
        return SuperquantileResult(
            value=action.u + inner.value,
            multiplier=action.u + inner.multiplier,
            engine=inner.engine,
            error_bound=inner.error_bound,
        )
    if method == "quantile_average":
        return superquantile_quantile_average(action, a, tol)
    if method == "rockafellar":
        return superquantile_rockafellar(action, a, tol)
    return superquantile_conditional_tail(action, a, tol)


def superquantile_dalpha(
    action: Action,
    alpha,
    h: float = 1e-4,
    method: str = "auto",
    tol: float = DEFAULT_TOL,
) -> float:
    """Sensitivity of the tail average to the optimism level.

    Analytically this equals (tail average - quantile) / (1 - alpha);
    a central finite difference is computed alongside and a
    NumericWarning is attached when the two disagree beyond
    max(1e-4, 10 h^2).
    """
    a = check_optimism(alpha, allow_zero=False)
    step = float(h)
    if not (math.isfinite(step) and step > 0.0):
        raise DomainError("h must be positive")
    step = min(step, 0.5 * a, 0.5 * (1.0 - a))
    value = superquantile(action, a, method, tol).value
    quant = action_quantile(action, a)
    analytic = (value - quant) / (1.0 - a)
    up = superquantile(action, a + step, method, tol).value
    down = superquantile(action, a - step, method, tol).value
    fd = (up - down) / (2.0 * step)
    if abs(analytic - fd) > max(1e-4, 10.0 * step * step):
        warnings.warn(
            f"tail-average slope mismatch: analytic {analytic:.6g} vs "
            f"central difference {fd:.6g} at alpha={a:.6g}",
            NumericWarning,
            stacklevel=2,
        )
    return analytic


def limit_report(
    action: Action,
    eps: float = 1e-4,
    method: str = "auto",
    tol: float = DEFAULT_TOL,
) -> LimitReport:
    """Tail averages at optimism eps and 1 - eps.

    Near 0 the value approaches the mean; near 1 it approaches the
    essential supremum when the law is bounded above.
    """
    e = float(eps)
    if not (math.isfinite(e) and 0.0 < e < 0.1):
        raise DomainError("eps must lie in (0, 0.1)")
    lo = superquantile(action, e, method, tol).value
    hi = superquantile(action, 1.0 - e, method, tol).value
    return LimitReport(near_zero=lo, near_one=hi)
