"""Localization along the equator of a ball cut by a plane.

A superconducting ball in a uniform field, cut through its center by the
field plane: along the equatorial edge the field makes the angle
gamma(s) = arccos |cos s| with the wall while the cut stays normal
(alpha = pi/2). At the two points where the field is tangent to the
wall the local band minimum drops below the uniform floor |a| Theta0
and an edge state localizes there; away from tangency the analysis is
inconclusive at this resolution and is reported as such, not as absence.

The leading-order ground energy in a strong field b is b * lambda_min.

Runtime: a few minutes on a cold cache.
"""

from numpy import pi

from magstep import ball_cut_geometry, ground_energy_prediction, profile

geom = ball_cut_geometry(8)
rep = profile(geom, a=-1.0)

print(f"floor |a| Theta0 = {rep.theta_floor:.6f}")
print("s/pi     gamma/pi   lambda      margin    verdict")
for pt in rep.points:
    print(f"{pt.s / pi:.3f}   {pt.gamma / pi:.3f}     {pt.lam:.6f}  "
          f"{pt.margin:.1e}  {pt.verdict.value}")

print(f"\nlocalized arcs: {[(round(lo, 3), round(hi, 3)) for lo, hi in rep.localized]}")
print(f"inconclusive at s = {[round(s, 3) for s in rep.inconclusive]}")
print(f"minimum lambda = {rep.lambda_min:.6f} at s = {rep.minimizer_s:.3f}")
print(f"assumption (minimizer certified localized): {rep.assumption_holds}")

b = 50.0
print(f"\nleading-order ground energy at b = {b}: {ground_energy_prediction(rep, b):.4f}")
print(f"uniform-floor comparison       b*floor: {b * rep.theta_floor:.4f}")
