"""How much optimism does it take to enter a market?

A firm pays a sunk cost k and receives a mean-zero random profit; it
enters when the tail average of the profit beats the cost.  The gap is
nondecreasing in optimism, so there is a single threshold level.  For
power-law profits the whole comparison collapses to a quantile cutoff.
"""

from optimist import (
    AffineTransform,
    EntryProblem,
    Normal,
    Pareto,
    entry_decision,
    entry_threshold,
    pareto_entry_cutoff,
)

problem = EntryProblem(shock=Normal(), k=1.0)
alpha_hat = entry_threshold(problem)
print(f"normal profit, k = 1: enter once alpha > {alpha_hat:.6f}")
print()
print(f"{'alpha':>6s} {'gap':>9s}  decision")
for i in range(1, 10):
    alpha = i / 10
    d = entry_decision(problem, alpha)
    print(f"{alpha:6.1f} {d.gap:9.4f}  {d.verdict}")

print()
raw = Pareto(1.0, 2.0)
recentred = EntryProblem(AffineTransform(raw, 1.0, -2.0), k=0.5)
cutoff = pareto_entry_cutoff(beta=2.0, k=recentred.k + 2.0)
print("pareto profit (beta = 2, recentred to mean zero), k = 0.5")
print(f"quantile cutoff: {cutoff.corrected:.4f}")
print(f"{'alpha':>6s} {'quantile':>9s}  generic  cutoff rule")
for alpha in (0.2, 0.4, 0.6, 0.8):
    generic = entry_decision(recentred, alpha).verdict
    by_rule = "enter" if raw.quantile(alpha) > cutoff.corrected else "stay_out"
    print(f"{alpha:6.2f} {raw.quantile(alpha):9.4f}  {generic:8s} {by_rule}")
