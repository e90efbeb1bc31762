"""Fiber band functions mu_a and their infima beta_a.

Across the field step the 1D fiber operator is
    -d2/dt2 + (a t - xi)^2  on t < 0,   -d2/dt2 + (t - xi)^2  on t > 0,
with the field ratio a in [-1, 1) \\ {0}. The band function mu_a(xi) is
its lowest eigenvalue. For a < 0 the infimum beta_a is attained at a
finite xi and sits in [|a| Theta0, |a|). For 0 < a < 1 the infimum
equals a and is reached only in the limit xi -> -inf, so no minimizer
is reported.

Runtime: under a minute.
"""

import numpy as np

from magstep import beta, mu_curve, theta0

th0 = theta0()[0]

print("a      beta_a      xi_star     |a|*Theta0   |a|")
for a in (-1.0, -0.75, -0.5, -0.25, 0.25, 0.5, 0.75):
    val, xi = beta(a)
    tail = f"{xi:.6f}" if xi is not None else "   (unattained)"
    print(f"{a:+.2f}  {val:.7f}  {tail:>14}  {abs(a) * th0:.7f}  {abs(a):.2f}")

print()
print("sampled band curves (values of mu_a on a short xi grid):")
xis = np.linspace(-1.0, 3.0, 9)
for a in (-1.0, -0.5, 0.5):
    vals = mu_curve(a, xis)
    row = "  ".join(f"{v:.4f}" for v in vals)
    print(f"  a = {a:+.1f}:  {row}")
print("  xi      " + "  ".join(f"{x:+.2f} " for x in xis))
