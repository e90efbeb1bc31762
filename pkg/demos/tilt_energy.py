"""Ground energy zeta(nu) of the tilted uniform field on a half-plane.

A uniform unit field making angle nu with the boundary plane gives the
model operator -d2/ds2 - d2/dt2 + (t cos nu - s sin nu)^2 on t > 0 with
a Neumann wall at t = 0. Its ground energy zeta(nu) interpolates
monotonically between Theta0 (tangent field, nu = 0) and 1 (normal
field, nu = pi/2). These values are the band limits of the step problem
as the fiber momentum runs off to infinity, so the curve below is what
the certification threshold min(beta_a, |a| zeta(nu0)) is made of.

Runtime: about a minute.
"""

import numpy as np

from magstep import theta0, zeta_profile

nus = np.linspace(0.0, np.pi / 2, 7)
vals = zeta_profile(nus)

th0 = theta0()[0]
print("nu/pi     zeta(nu)   (Theta0 = %.6f)" % th0)
for nu, v in zip(nus, vals):
    bar = "#" * int(round(40 * (v - th0) / (1 - th0)))
    print(f"{nu / np.pi:.4f}   {v:.6f}   {bar}")

print("\nendpoints: zeta(0) - Theta0 = %.2e,  zeta(pi/2) - 1 = %.2e"
      % (vals[0] - th0, vals[-1] - 1.0))
