"""Half-plane model with a tilted parabolic valley.

zeta(nu) is the ground energy of

    -d^2/ds^2 - d^2/dt^2 + (t cos nu - s sin nu)^2   on {t > 0},

with a Neumann condition at t = 0. The operator is real; no vector
potential enters. zeta(0) is the de Gennes constant Theta0 (the s direction
decouples), zeta(pi/2) = 1 (whole-line oscillator in s, delocalized along
t), and the profile increases in between.

Box sizing is adiabatic. At fixed s the t-section is a half-line oscillator
with center s tan(nu); rescaling t by sqrt(cos nu) shows its level is
cos(nu) mu^N(sqrt(cos nu) tan(nu) s), minimized where the argument hits the
de Gennes minimizer xi_0, i.e. at s_0 = xi_0 / (sqrt(cos nu) tan(nu)), with
an effective s-spread l_s = (mu'' sin^2(nu) / 2)^(-1/4) from the curvature
mu'' of the de Gennes well. The s window takes several l_s around s_0 (plus
an allowance along the valley), the t extent follows the valley slope, and
the s spacing coarsens with l_s since nothing varies faster than the well.
"""

from __future__ import annotations

from dataclasses import replace
from functools import lru_cache
from typing import Optional

import numpy as np

from .eigencore import (Resolution, anchored_grid_2d,
                        assemble_2d_magnetic_schrodinger, lowest_eigenpair,
                        wall_mass)
from .errors import MonotonicityViolation, ParameterRange
from .fiber1d import theta0

PI = np.pi
XI0 = 0.7681837  # de Gennes minimizer, sqrt(Theta0)
MU2 = 1.16       # curvature of the de Gennes well at its minimum
H_DEFAULT = 0.1


@lru_cache(maxsize=None)
def _zeta_cached(nu: float, h: float, tol: float, max_iter: int, seed: int) -> float:
    value = np.nan
    for grow in (1.0, 1.4):  # one retry on a larger box if the walls carry mass
        s0 = XI0 / (np.sqrt(np.cos(nu)) * np.tan(nu)) if nu < PI / 2 else 0.0
        ls = (0.5 * MU2 * np.sin(nu) ** 2) ** -0.25
        W = max(14.0, 9.0 * ls) * grow
        s_lo = s0 - W
        s_hi = s0 + max(W, 34.0 * np.cos(nu) * grow)
        t_hi = max(16.0, 6.0 + (s_hi - s0) * np.tan(nu) + 10.0)
        t_hi = min(t_hi, 60.0 * grow)
        if nu > 1.2:
            t_hi = 55.0 * grow
        hs = min(1.0, max(h, ls / 14.0))
        grid = anchored_grid_2d(s_lo, s_hi, t_hi, hs, h)

        def potential(X1, X2):
            return (X2 * np.cos(nu) - X1 * np.sin(nu)) ** 2

        op = assemble_2d_magnetic_schrodinger(grid, None, potential)
        pair = lowest_eigenpair(op, tol, max_iter, seed)
        value = pair.value
        if wall_mass(pair.vector, grid) <= 1e-5:
            break
    return float(value)


def zeta(nu: float, resolution: Optional[Resolution] = None) -> float:
    """Ground energy of the tilted-valley half-plane model at tilt nu.

    nu = 0 is routed to the de Gennes constant. Values a hair above pi/2
    (from arcsin round-trips) are clamped; anything else outside [0, pi/2]
    is rejected.
    """
    res = resolution or Resolution()
    nu = float(nu)
    if PI / 2 < nu <= PI / 2 + 1e-9:
        nu = PI / 2
    if not 0.0 <= nu <= PI / 2:
        raise ParameterRange(f"tilt nu = {nu} outside [0, pi/2]")
    if nu < 1e-12:
        return theta0(replace(res, spacing=None))[0]
    return _zeta_cached(round(nu, 12), res.spacing_or(H_DEFAULT),
                        res.tol, res.max_iter, res.seed)


def zeta_profile(nu_values, resolution: Optional[Resolution] = None,
                 monotonicity_tol: float = 2e-3) -> np.ndarray:
    """zeta on an increasing array of tilts, checked for monotonicity.

    The true profile is strictly increasing; a decrease beyond
    monotonicity_tol between consecutive samples means the discretization
    cannot be trusted at this resolution and raises MonotonicityViolation.
    """
    nus = np.asarray(nu_values, dtype=float)
    vals = np.array([zeta(nu, resolution) for nu in nus])
    for i in range(len(vals) - 1):
        if vals[i + 1] < vals[i] - monotonicity_tol:
            raise MonotonicityViolation(
                f"zeta({nus[i + 1]:.6f}) = {vals[i + 1]:.8f} dips below "
                f"zeta({nus[i]:.6f}) = {vals[i]:.8f} beyond {monotonicity_tol}")
    return vals
