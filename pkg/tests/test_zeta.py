"""Tilted-field half-plane energy zeta(nu)."""

import numpy as np
import pytest

from magstep import theta0, zeta, zeta_profile
from magstep.errors import MonotonicityViolation, ParameterRange

PI = np.pi


def test_zeta_zero_routes_to_theta0():
    # the nu = 0 endpoint is the de Gennes problem and shares its solver
    assert zeta(0.0) == theta0()[0]


def test_zeta_right_endpoint():
    assert zeta(PI / 2) == pytest.approx(1.0, abs=2e-3)


def test_zeta_range_and_monotonicity():
    th = theta0()[0]
    nus = np.linspace(0.0, PI / 2, 8)
    vals = zeta_profile(nus)
    assert np.all(np.diff(vals) > 0)
    assert np.all(vals >= th - 1e-3)
    assert np.all(vals <= 1.0 + 1e-3)


def test_zeta_clamps_tiny_overshoot():
    assert zeta(PI / 2 + 5e-10) == zeta(PI / 2)


def test_zeta_domain():
    with pytest.raises(ParameterRange):
        zeta(-0.1)
    with pytest.raises(ParameterRange):
        zeta(1.7)


def test_profile_flags_decreasing_sweep():
    # a sweep ordered against the increasing direction trips the check
    with pytest.raises(MonotonicityViolation):
        zeta_profile(np.array([0.9, 0.3]))
