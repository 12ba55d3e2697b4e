"""The two-action menu where quantile and tail-average rankings disagree.

Payoffs are (omega - 2/3) * a - 1/3 with omega ~ Triangular(0, 0, 2), so
both actions share the mean -1/3 and the menu is decided entirely by how
the decision maker treats the upper tail.
"""

from optimist import (
    Action,
    AffineTransform,
    ChoiceProblem,
    Triangular,
    choose,
    quantile_choose,
    superquantile,
)

prior = Triangular(0.0, 0.0, 2.0)
menu = (
    Action("a=1", AffineTransform(prior, 1.0, -1.0)),
    Action("a=-1", AffineTransform(prior, -1.0, 1.0 / 3.0)),
)

problem = ChoiceProblem(menu, alpha=0.8)
by_tail = choose(problem)
by_quantile = quantile_choose(problem)

print("alpha = 0.8")
print(f"{'action':8s} {'mean':>8s} {'quantile':>9s} {'tail avg':>9s}")
for action in menu:
    mean = superquantile(action, 0.0).value
    print(
        f"{action.label:8s} {mean:8.4f} "
        f"{by_quantile.values[action.label]:9.4f} "
        f"{by_tail.values[action.label]:9.4f}"
    )

print()
print(f"quantile rule picks   {by_quantile.winner}")
print(f"tail-average rule picks {by_tail.winner}")
