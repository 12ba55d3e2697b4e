"""What an optimist actually believes: the censored distribution.

Censoring a standard normal at optimism 0.8 throws away the bottom 80%
of outcomes and renormalizes the rest.  The mean of that belief equals
the tail average, which is the whole point: optimal wishful thinking is
acting on the censored belief.
"""

import numpy as np

from optimist import Action, Normal, belief_mean, censor, censored_cdf, superquantile

action = Action("x", Normal())
alpha = 0.8

belief = censor(action, alpha)
print(f"optimism        {alpha}")
print(f"threshold       {belief.threshold:.6f}   (the 0.8-quantile)")
print(f"density ratio   {belief.density_ratio():.1f}        (1 / (1 - alpha))")
print()

zs = np.linspace(-1.0, 4.0, 11)
gs = censored_cdf(action, alpha, zs)
print(f"{'z':>6s} {'F(z)':>8s} {'G(z)':>8s}")
for z, g in zip(zs, gs):
    print(f"{z:6.2f} {Normal().cdf(z):8.4f} {g:8.4f}")

print()
mean = belief_mean(belief)
tail = superquantile(action, alpha).value
print(f"belief mean     {mean:.9f}")
print(f"tail average    {tail:.9f}")
print(f"difference      {abs(mean - tail):.2e}")
