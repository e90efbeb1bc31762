"""One-dimensional fiber family of the step magnetic half-plane.

For momentum xi the fiber operator on the real line is

    h(a, xi) = -d^2/dt^2 + (a t - xi)^2   on t < 0,
               -d^2/dt^2 + (t - xi)^2     on t > 0,

whose lowest level is mu_a(xi); the band bottom is beta_a = inf_xi mu_a(xi).
For 0 < a < 1 the infimum equals a and is approached only as xi -> -infinity,
so beta reports no minimizer there. For -1 <= a < 0 the infimum is attained
at a unique xi and lies in [|a| Theta0, |a|). mu_neumann is the half-line
Neumann problem whose infimum over xi is the de Gennes constant Theta0; it
is computed as the whole-line problem with the symmetrized potential
(|t| - xi)^2, whose even ground state restricts exactly to the Neumann
half-line state. At a = -1 the two coincide identically (mu_{-1} = mu^N),
and on matched mirror-symmetric lattices they agree to rounding, which makes
a sharp cross-check between the two code paths.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .eigencore import (Grid1D, Resolution, anchored_grid_1d,
                        assemble_1d_schrodinger, lowest_eigenpair, richardson)
from .errors import MinimizerNotBracketed, ParameterRange

H_DEFAULT = 0.02


def _check_a(a: float, allow_one: bool = True):
    hi_ok = a <= 1.0 if allow_one else a < 1.0
    if not (-1.0 <= a and hi_ok) or a == 0.0:
        raise ParameterRange(f"field ratio a = {a} outside the admissible range")


@lru_cache(maxsize=None)
def _mu_cached(a: float, xi: float, h: float, pad_scale: float,
               tol: float, max_iter: int, seed: int) -> float:
    pad = pad_scale * 12.0 / np.sqrt(min(abs(a), 1.0))
    lo = min(0.0, xi, xi / a) - pad
    hi = max(0.0, xi, xi / a) + pad
    grid = anchored_grid_1d(lo, hi, h)

    def potential(t):
        return np.where(t < 0.0, (a * t - xi) ** 2, (t - xi) ** 2)

    op = assemble_1d_schrodinger(grid, potential)
    return lowest_eigenpair(op, tol, max_iter, seed).value


def mu(a: float, xi: float, resolution: Optional[Resolution] = None,
       pad_scale: float = 1.0) -> float:
    """Lowest fiber level mu_a(xi).

    The window covers both well centers (xi and xi/a) plus a padding of
    12 / sqrt(min(|a|, 1)) scaled by pad_scale; the result is insensitive to
    pad_scale at the 1e-8 level well before the default. a = 1 (no step) is
    accepted for completeness and gives the flat curve mu = 1.
    """
    _check_a(a, allow_one=True)
    res = resolution or Resolution()
    return _mu_cached(float(a), round(float(xi), 12), res.spacing_or(H_DEFAULT),
                      float(pad_scale), res.tol, res.max_iter, res.seed)


@lru_cache(maxsize=None)
def _mu_neumann_cached(xi: float, h: float, tol: float, max_iter: int, seed: int) -> float:
    # mirror-symmetric lattice: nodes +-(k + 1/2) h, none at the origin
    m = int(np.ceil((abs(xi) + 12.0) / h - 0.5))
    grid = Grid1D(lo=-(m + 0.5) * h, hi=(m + 0.5) * h, n=2 * m + 2)

    def potential(t):
        return (np.abs(t) - xi) ** 2

    op = assemble_1d_schrodinger(grid, potential)
    return lowest_eigenpair(op, tol, max_iter, seed).value


def mu_neumann(xi: float, resolution: Optional[Resolution] = None) -> float:
    """Lowest level of -d^2/dt^2 + (t - xi)^2 on t > 0 with Neumann at 0."""
    res = resolution or Resolution()
    return _mu_neumann_cached(round(float(xi), 12), res.spacing_or(H_DEFAULT),
                              res.tol, res.max_iter, res.seed)


@lru_cache(maxsize=None)
def _theta0_cached(h: float, tol: float, max_iter: int, seed: int) -> Tuple[float, float]:
    def f(x):
        return _mu_neumann_cached(round(float(x), 12), h, tol, max_iter, seed)

    xs = np.arange(0.2, 1.4 + 1e-12, 0.05)
    vals = [f(x) for x in xs]
    i = int(np.argmin(vals))
    if i == 0 or i == len(xs) - 1:
        raise MinimizerNotBracketed("de Gennes scan found no interior minimum")
    r = minimize_scalar(f, bracket=(xs[i - 1], xs[i], xs[i + 1]),
                        method="golden", options={"xtol": 1e-10})
    return float(r.fun), float(r.x)


def theta0(resolution: Optional[Resolution] = None,
           extrapolate: bool = False) -> Tuple[float, float]:
    """de Gennes constant with its minimizer, (Theta0, xi_0).

    Coarse scan on [0.2, 1.4] in steps of 0.05, then golden-section
    refinement. extrapolate=True adds a second run at half the spacing and
    returns the h^2-extrapolated value (the minimizer from the fine run).
    """
    res = resolution or Resolution()
    h = res.spacing_or(H_DEFAULT)
    val, xi = _theta0_cached(h, res.tol, res.max_iter, res.seed)
    if extrapolate:
        fine, xi = _theta0_cached(h / 2, res.tol, res.max_iter, res.seed)
        val = richardson(fine, val, ratio=2.0)
    return val, xi


@lru_cache(maxsize=None)
def _beta_cached(a: float, h: float, tol: float, max_iter: int,
                 seed: int) -> Tuple[float, Optional[float]]:
    def f(x):
        return _mu_cached(a, round(float(x), 12), h, 1.0, tol, max_iter, seed)

    if a > 0:
        # infimum at xi -> -infinity; report the scan floor, no minimizer
        xs = np.arange(4.0, -12.0 / np.sqrt(min(a, 1.0)), -0.25)
        return min(f(x) for x in xs), None
    xs = np.arange(-2.0, 3.0 / np.sqrt(abs(a)) + 2.0, 0.05)
    vals = [f(x) for x in xs]
    i = int(np.argmin(vals))
    if i == 0 or i == len(xs) - 1:
        raise MinimizerNotBracketed(f"beta scan for a = {a} found no interior minimum")
    r = minimize_scalar(f, bracket=(xs[i - 1], xs[i], xs[i + 1]),
                        method="golden", options={"xtol": 1e-10})
    return float(r.fun), float(r.x)


def beta(a: float, resolution: Optional[Resolution] = None) -> Tuple[float, Optional[float]]:
    """Band bottom beta_a = inf_xi mu_a(xi), with its minimizer when attained.

    Returns (value, xi_star) for a < 0 and (scan floor, None) for a > 0,
    where the infimum equals a but is not attained.
    """
    _check_a(a, allow_one=True)
    res = resolution or Resolution()
    return _beta_cached(float(a), res.spacing_or(H_DEFAULT),
                        res.tol, res.max_iter, res.seed)


def mu_curve(a: float, xi_values, resolution: Optional[Resolution] = None) -> np.ndarray:
    """mu_a sampled on an array of momenta (convenience for sweeps)."""
    return np.array([mu(a, x, resolution) for x in np.asarray(xi_values, dtype=float)])
