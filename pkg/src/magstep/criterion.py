"""Sector trial-state criterion for edge localization.

A Gaussian-weighted trial state u(rho, theta) = (g(theta) + i s(theta))
 exp(-omega rho^2 / 2) on the sector pair {-pi + alpha < theta < alpha},
with g built from exponentials piecewise in theta,

    g = c1 e^theta + c2 e^-theta   on theta <= 0,
        c3 e^theta + c4 e^-theta   on theta > 0,   c1 + c2 = c3 + c4,

turns the localization question into the sign of a scalar quadratic: after
optimizing the coefficients, the energy excess of the trial state against a
reference level Lambda is

    P(x) = A x^2 - (pi/2) Lambda x + pi/2,   x = 1/omega,

with A = A(alpha, gamma, a) in closed form. P dipping negative for some
x > 0 certifies an edge state below Lambda, which happens exactly when
Lambda^2 > 8 A / pi (for A > 0). Lambda is either the exact competitor
min(beta_a, |a| zeta(nu0)) or the hard lower bound |a| Theta0_low, which
trades sharpness for a scan with no eigenvalue solves at all.

The closed forms were cross-checked against a genuine two-dimensional
quadrature of the energy integrand (adaptive Gauss-Kronrod in rho times
composite Simpson in theta, each theta piece integrated with its own field
branch); trial_energy_quadrature keeps that oracle available.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import quad, simpson

from .eigencore import Resolution
from .errors import ParameterRange
from .fiber1d import beta
from .reduced2d import StepFieldParams
from .zeta import zeta

PI = np.pi
THETA0_LOW = 0.590106124  # proven lower bound for the de Gennes constant


class Variant(str, Enum):
    EXACT = "exact"
    THETA0_LOW = "theta0-low"


@dataclass(frozen=True)
class CriterionReport:
    """Outcome of the quadratic criterion at one parameter triple.

    lam is the reference level Lambda (lambda is a keyword). x_min locates
    the minimum of P for A > 0; for A <= 0 the quadratic has no interior
    minimum, negative_quadratic is set, x_min is the positive crossing and
    P_min a sample value beyond it.
    """

    params: StepFieldParams
    variant: Variant
    A: float
    lam: float
    x_min: float
    P_min: float
    admissible: bool
    negative_quadratic: bool = False


@dataclass(frozen=True)
class TrialFunctionSpec:
    """Angular profile coefficients; continuity at theta = 0 requires
    c1 + c2 = c3 + c4."""

    omega: float
    c1: float
    c2: float
    c3: float
    c4: float

    def __post_init__(self):
        if self.omega <= 0:
            raise ParameterRange(f"Gaussian width omega = {self.omega} must be positive")
        scale = max(1.0, abs(self.c1), abs(self.c2), abs(self.c3), abs(self.c4))
        if abs(self.c1 + self.c2 - self.c3 - self.c4) > 1e-12 * scale:
            raise ParameterRange("trial profile discontinuous: c1 + c2 != c3 + c4")


def _coefficient_a(alpha: float, gamma: float, a: float) -> float:
    ep = np.exp(PI)
    cg2 = np.cos(gamma) ** 2
    block1 = PI * cg2 * (
        4 * (a - 1) * ((a - ep) * np.exp(PI - alpha) + (a * ep - 1) * np.exp(alpha))
        - (a - 1) ** 2 * (np.exp(2 * PI - 2 * alpha) + np.exp(2 * alpha))
        - 2 * ep * (-4 * a + (3 - 2 * a + 3 * a * a) * np.cosh(PI))
    )
    block2 = 4 * (np.exp(2 * PI) - 1) * (
        -(a * a * (PI - alpha) + alpha) * (-3 + np.cos(2 * gamma))
        + 2 * (a * a - 1) * np.sin(gamma) ** 2 * np.sin(2 * alpha)
    )
    return (1.0 / 128.0) * (-1 + 1 / np.tanh(PI)) * (block1 + block2)


def coefficient_A(params: StepFieldParams) -> float:
    """Quadratic coefficient A(alpha, gamma, a) of the criterion polynomial."""
    return _coefficient_a(params.alpha, params.gamma, params.a)


def criterion_quadratic(A: float, lam: float, x: float) -> float:
    """P(x) = A x^2 - (pi/2) Lambda x + pi/2."""
    return A * x * x - PI / 2 * lam * x + PI / 2


def optimal_coefficients(params: StepFieldParams, omega: float) -> TrialFunctionSpec:
    """Coefficients minimizing the closed-form trial energy at fixed omega."""
    if omega <= 0:
        raise ParameterRange(f"Gaussian width omega = {omega} must be positive")
    alpha, a = params.alpha, params.a
    ep = np.exp(PI)
    sq = np.sqrt(PI) * np.cos(params.gamma)
    cothm1 = -1 + 1 / np.tanh(PI)
    c1 = (np.exp(PI - 2 * alpha)
          * ((-1 + a) * ep + (-1 + a) * np.exp(PI + 2 * alpha)
             + 2 * np.exp(alpha) * (-a + ep))
          * sq * cothm1 / (16 * np.sqrt(omega)))
    c2 = ((-1 + a + (-1 + a) * np.exp(2 * alpha)
           - 2 * (-1 + a * ep) * np.exp(alpha))
          * sq * cothm1 / (16 * np.sqrt(omega)))
    c3 = (np.exp(-alpha) * (-a + ep + (-1 + a) * np.cosh(PI - alpha))
          * sq / np.sinh(PI) / (8 * np.sqrt(omega)))
    return TrialFunctionSpec(omega=omega, c1=c1, c2=c2, c3=c3, c4=c1 + c2 - c3)


def trial_energy(params: StepFieldParams, spec: TrialFunctionSpec, lam: float) -> float:
    """Closed-form energy excess J[u] of the trial state against Lambda."""
    alpha, gamma, a = params.alpha, params.gamma, params.a
    omega, c1, c2, c3 = spec.omega, spec.c1, spec.c2, spec.c3
    e = np.exp
    sg = np.sqrt(PI) * np.cos(gamma) / (4 * omega ** 1.5)
    return ((2 - e(-2 * alpha) - e(-2 * PI + 2 * alpha)) / (2 * omega) * c1 * c1
            + (-e(-2 * alpha) + e(2 * PI - 2 * alpha)) / (2 * omega) * c2 * c2
            + (-e(-2 * alpha) + e(2 * alpha)) / (2 * omega) * c3 * c3
            + (1 - e(-2 * alpha)) / omega * c1 * c2
            + (-1 + e(-2 * alpha)) / omega * c1 * c3
            + (-1 + e(-2 * alpha)) / omega * c2 * c3
            + (1 - a - e(-alpha) + a * e(-PI + alpha)) * sg * c1
            + (1 - a - e(-alpha) + a * e(PI - alpha)) * sg * c2
            + (e(-alpha) - e(alpha)) * sg * c3
            + (4 * PI * omega ** 2 - 4 * PI * omega * lam
               + (a * a * (PI - alpha) + alpha) * np.cos(gamma) ** 2) / (8 * omega ** 2)
            + 2 * (a * a * (PI - alpha) + alpha
                   + (a * a - 1) * np.cos(alpha) * np.sin(alpha)) * np.sin(gamma) ** 2
            / (8 * omega ** 2))


def trial_energy_quadrature(params: StepFieldParams, spec: TrialFunctionSpec,
                            lam: float, n_theta: int = 2001) -> float:
    """Independent oracle for trial_energy: numerical quadrature in polar
    coordinates. Each theta piece carries its own field branch and its own
    one-sided angular derivative; the profile g itself is continuous."""
    alpha, gamma, a = params.alpha, params.gamma, params.a
    omega, c1, c2, c3, c4 = spec.omega, spec.c1, spec.c2, spec.c3, spec.c4
    R = 14.0 / np.sqrt(omega)

    def piece_integral(lo, hi, s, ca, cb):
        def rho_integrand(th):
            g = ca * np.exp(th) + cb * np.exp(-th)
            gp = ca * np.exp(th) - cb * np.exp(-th)

            def f(rho):
                return ((omega ** 2 * rho ** 2 + g * g
                         + (gp - s * rho * np.cos(gamma) / 2) ** 2
                         + s * s * rho ** 2 * np.sin(gamma) ** 2 * np.sin(th) ** 2
                         - lam) * rho * np.exp(-omega * rho ** 2))
            return f

        ths = np.linspace(lo, hi, n_theta)
        vals = np.array([quad(rho_integrand(th), 0, R, limit=200)[0] for th in ths])
        return simpson(vals, x=ths)

    return (piece_integral(-PI + alpha, 0.0, a, c1, c2)
            + piece_integral(0.0, alpha, 1.0, c3, c4))


def lambda_bound(params: StepFieldParams, variant: Variant = Variant.THETA0_LOW,
                 resolution: Optional[Resolution] = None) -> float:
    """Reference level Lambda for the criterion.

    exact: min(beta_a, |a| zeta(nu0)), both computed. theta0-low:
    |a| Theta0_low with no eigenvalue solve, valid because every competitor
    is at least |a| Theta0.
    """
    if variant == Variant.THETA0_LOW:
        return abs(params.a) * THETA0_LOW
    res = replace(resolution or Resolution(), spacing=None)
    return min(beta(params.a, res)[0], abs(params.a) * zeta(params.nu0, res))


def _report(params: StepFieldParams, variant: Variant, A: float, lam: float) -> CriterionReport:
    if A > 0:
        x_min = PI * lam / (4 * A)
        p_min = PI / 2 - PI ** 2 * lam ** 2 / (16 * A)
        return CriterionReport(params=params, variant=variant, A=A, lam=lam,
                               x_min=x_min, P_min=p_min, admissible=p_min < 0)
    # downward (or linear) quadratic: P eventually negative, report the
    # positive crossing instead of a minimum
    disc = (PI / 2 * lam) ** 2 - 4 * A * PI / 2
    if A == 0:
        x_cross = PI / (PI * lam) if lam > 0 else np.inf
    else:
        x_cross = (PI / 2 * lam - np.sqrt(disc)) / (2 * A)
    admissible = np.isfinite(x_cross) and x_cross > 0
    p_at = criterion_quadratic(A, lam, 2 * x_cross) if admissible else np.inf
    return CriterionReport(params=params, variant=variant, A=A, lam=lam,
                           x_min=float(x_cross), P_min=float(p_at),
                           admissible=bool(admissible), negative_quadratic=True)


def admissibility(params: StepFieldParams, variant: Variant = Variant.THETA0_LOW,
                  resolution: Optional[Resolution] = None) -> CriterionReport:
    """Evaluate the criterion at one triple: admissible means the trial
    state certifies an edge level strictly below Lambda."""
    return _report(params, variant, coefficient_A(params),
                   lambda_bound(params, variant, resolution))


@dataclass(frozen=True)
class RegionCell:
    alpha: float
    gamma: float
    a: float
    A: float
    lam: float
    P_min: float
    admissible: bool


def region_scan(alpha_values, gamma_values, a_values,
                variant: Variant = Variant.THETA0_LOW,
                resolution: Optional[Resolution] = None,
                threads: Optional[int] = None) -> Tuple[RegionCell, ...]:
    """Criterion over a parameter box, alpha-major then gamma then a.

    The exact variant precomputes beta once per field ratio and zeta once
    per tilt nu0 rounded to 3 decimals (zeta is Lipschitz of order one
    there, so the Lambda error stays far below the admissibility margins).
    """
    alphas = np.atleast_1d(np.asarray(alpha_values, dtype=float))
    gammas = np.atleast_1d(np.asarray(gamma_values, dtype=float))
    avals = np.atleast_1d(np.asarray(a_values, dtype=float))
    variant = Variant(variant)
    res = replace(resolution or Resolution(), spacing=None)

    if variant == Variant.EXACT:
        betas = {a: beta(a, res)[0] for a in sorted(set(avals.tolist()))}
        zetas = {}
        nus = {round(StepFieldParams(al, g, avals[0]).nu0, 3)
               for al in alphas for g in gammas}
        for nu in sorted(nus):
            zetas[nu] = zeta(nu, res)

        def lam_of(p: StepFieldParams) -> float:
            return min(betas[p.a], abs(p.a) * zetas[round(p.nu0, 3)])
    else:
        def lam_of(p: StepFieldParams) -> float:
            return abs(p.a) * THETA0_LOW

    def cell(al: float, g: float, a: float) -> RegionCell:
        p = StepFieldParams(al, g, a)
        r = _report(p, variant, coefficient_A(p), lam_of(p))
        return RegionCell(alpha=al, gamma=g, a=a, A=r.A, lam=r.lam,
                          P_min=r.P_min, admissible=r.admissible)

    triples = [(al, g, a) for al in alphas for g in gammas for a in avals]
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            cells = list(ex.map(lambda t: cell(*t), triples))
    else:
        cells = [cell(*t) for t in triples]
    return tuple(cells)


def write_region_csv(cells, stream) -> None:
    """CSV rows for a region scan; the caller owns any leading header line."""
    stream.write("alpha,gamma,a,A,Lambda,P_min,admissible\n")
    for c in cells:
        stream.write(f"{c.alpha:.12g},{c.gamma:.12g},{c.a:.12g},"
                     f"{c.A:.12g},{c.lam:.12g},{c.P_min:.12g},"
                     f"{'true' if c.admissible else 'false'}\n")
