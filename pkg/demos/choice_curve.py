"""A risky action overtakes a sure thing as optimism grows.

Logit choice between a standard normal payoff and a sure payoff of 1.
At low optimism the risky action is chosen with probability 1/(1+e)
(its value is its mean, 0); the probability climbs monotonically and
crosses one half where the tail average reaches 1.
"""

import math

from optimist import (
    Action,
    Degenerate,
    Normal,
    curve_monotonicity_audit,
    default_grid,
    luce_curve,
    monotone_pair_check,
)

risky = Action("risky", Normal())
safe = Action.additive("safe", 1.0, Degenerate(0.0))

grid = default_grid(99)
curve = luce_curve([risky, safe], grid=grid)

print(f"{'alpha':>6s} {'V(risky)':>9s} {'V(safe)':>8s} {'P(risky)':>9s}")
for i in range(0, len(grid), 10):
    print(
        f"{curve.alphas[i]:6.2f} {curve.values['risky'][i]:9.4f} "
        f"{curve.values['safe'][i]:8.4f} {curve.probs['risky'][i]:9.4f}"
    )

print()
print(f"limit as optimism vanishes: 1/(1+e) = {1.0 / (1.0 + math.e):.4f}")

crossing = next(
    a for a, p in zip(curve.alphas, curve.probs["risky"]) if p > 0.5
)
print(f"P(risky) first exceeds 0.5 at alpha = {crossing:.2f}")

audit = curve_monotonicity_audit(curve, ("risky", "safe"))
verdict = monotone_pair_check(risky, safe, grid=grid)
print(f"curve monotone on the grid:  {audit.monotone}")
print(f"excess condition holds:      {verdict.monotone}")
