"""Spectral analysis of half-plane Schrodinger operators whose magnetic
field is constant on each side of a straight interface line.

The package splits into a discretization core (eigencore), the
one-dimensional fiber problems (fiber1d), the tilted half-plane energy
(zeta), the reduced two-dimensional band problem with certification
(reduced2d), a closed-form localization criterion (criterion), decay
diagnostics (agmon), and the edge-curve profile that ties the local model
to a three-dimensional geometry (edgeprofile).
"""

__version__ = "0.1.0"

from .agmon import DecayReport, decay_report, write_shell_csv
from .criterion import (CriterionReport, RegionCell, TrialFunctionSpec,
                        Variant, admissibility, coefficient_A,
                        criterion_quadratic, lambda_bound,
                        optimal_coefficients, region_scan, trial_energy,
                        trial_energy_quadrature, write_region_csv,
                        THETA0_LOW)
from .edgeprofile import (EdgeGeometry, EdgeSample, LocalizationReport,
                          ProfilePoint, ball_cut_geometry,
                          geometry_from_csv, geometry_from_json,
                          ground_energy_prediction, profile,
                          write_report_json)
from .eigencore import (Branched, EigenPair, Grid1D, Grid2D, Resolution,
                        SparseHermitianOp, anchored_grid_1d,
                        anchored_grid_2d, assemble_1d_schrodinger,
                        assemble_2d_magnetic_schrodinger, lowest_eigenpair,
                        richardson, wall_mass)
from .errors import (AssumptionFails, GaugeDiscontinuity, GridTooSmall,
                     MagstepError, MinimizerNotBracketed,
                     MonotonicityViolation, NonConvergence,
                     NotBelowEssential, NotHermitian, ParameterRange,
                     TailTooShort)
from .fiber1d import beta, mu, mu_curve, mu_neumann, theta0
from .reduced2d import (BandProfile, BandSample, MinimumSet, Ray,
                        SpectralResult, StepFieldParams, Verdict,
                        band_profile, certify, default_tau_range,
                        eigenfunction, potential_minimum_set, sigma,
                        sigma_ess)
from .zeta import zeta, zeta_profile

__all__ = [name for name in dir() if not name.startswith("_")]
