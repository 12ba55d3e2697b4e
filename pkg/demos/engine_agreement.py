"""Five ways to compute one tail average, and where each one shines.

The same number comes out of the closed form, the quantile integral,
the Rockafellar minimization, the conditional-tail integral, and a
seeded Monte Carlo run; the engines differ only in what they require of
the law (a formula, a quantile, a cdf, a density, samples).
"""

from optimist import Action, Normal, Pareto, limit_report, superquantile

for law in (Normal(0.0, 1.0), Pareto(1.0, 2.0)):
    action = Action("x", law)
    print(law)
    for alpha in (0.5, 0.9):
        print(f"  alpha = {alpha}")
        for method in (
            "closed_form",
            "quantile_average",
            "rockafellar",
            "conditional_tail",
            "monte_carlo",
        ):
            res = superquantile(action, alpha, method, mc_size=200_000, mc_seed=0)
            print(
                f"    {method:17s} {res.value:12.8f}"
                f"   (error bound {res.error_bound:.2e})"
            )
    near_zero, near_one = limit_report(action, eps=1e-4)
    print(f"  near alpha=0 the value is {near_zero:.6f} (mean {law.mean():.6f})")
    print(f"  near alpha=1 the value is {near_one:.6f}")
    print()
