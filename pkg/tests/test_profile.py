"""Wave profiles, decay, conserved quantities and residual checks."""

import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from rchwave.model import ModelError, amplitude, params_from_c
from rchwave.profile import (
    GridSpec,
    WaveShape,
    conserved_quantities,
    crest_curvature,
    decay_rate,
    first_integral_defect,
    ode_residual,
    profile_from_ode,
    profile_from_quadrature,
)

CASES = [(F(1), F(2)), (F(8, 5), F(2)), (F(1, 2), F(0)), (F(8, 5), F(5, 2))]


def _E_oracle(c, sigma):
    """E by direct y-quadrature with the crest singularity left to quad."""
    p = params_from_c(c)
    H = amplitude(p, sigma).H
    A, B, K, cc, s = (float(v) for v in (p.A, p.B, p.K, p.c, sigma))

    def f(y):
        S = ((A * y + B) * y + 1) * y + cc - s
        Y = y - s + K
        return y * (abs(S) + abs(Y)) / math.sqrt(S * Y)

    return quad(f, 0, H, epsabs=0, epsrel=1e-10, limit=400)[0]


@pytest.mark.parametrize("c,sigma", CASES)
def test_quadrature_and_ode_profiles_agree(c, sigma):
    p = params_from_c(c)
    q = profile_from_quadrature(p, sigma)
    o = profile_from_ode(p, sigma)
    n = min(len(q.phi), len(o.phi))
    assert n > 100
    assert np.max(np.abs(q.phi[:n] - o.phi[:n])) <= 1e-6 * q.H
    assert q.phi[0] == pytest.approx(q.H, rel=1e-14)


@pytest.mark.parametrize("c,sigma", CASES)
def test_decay_rate_matches_linearisation(c, sigma):
    p = params_from_c(c)
    q = profile_from_quadrature(p, sigma)
    expected = math.sqrt(float((sigma - p.c) / (sigma - p.K)))
    assert decay_rate(q) == pytest.approx(expected, rel=1e-2)


@pytest.mark.parametrize("c,sigma", CASES)
def test_energy_matches_independent_quadrature(c, sigma):
    p = params_from_c(c)
    E = conserved_quantities(profile_from_quadrature(p, sigma)).E
    assert E == pytest.approx(_E_oracle(c, sigma), rel=1e-8)


def test_frozen_energies():
    # frozen from the independent y-quadrature oracle above
    assert conserved_quantities(profile_from_quadrature(params_from_c(1), 2)).E == pytest.approx(
        1.3207435987323697, rel=1e-10)
    assert conserved_quantities(profile_from_quadrature(params_from_c(F(8, 5)), 2)).E == pytest.approx(
        0.337862771684933, rel=1e-10)


def test_profile_is_monotone_and_positive():
    q = profile_from_quadrature(params_from_c(F(8, 5)), 2)
    assert np.all(np.diff(q.phi) < 0)
    assert np.all(q.phi > 0)
    assert np.all(q.phi_x[1:] < 0)


def test_even_extension():
    q = profile_from_quadrature(params_from_c(1), 2)
    x, phi, px = q.full()
    assert np.allclose(x, -x[::-1])
    assert np.allclose(phi, phi[::-1])
    assert np.allclose(px, -px[::-1])


@pytest.mark.parametrize("c,sigma", CASES)
def test_residuals_small_for_true_profile(c, sigma):
    q = profile_from_quadrature(params_from_c(c), sigma)
    assert ode_residual(q) < 1e-8
    assert first_integral_defect(q) < 1e-10


def test_residual_detects_perturbation():
    q = profile_from_quadrature(params_from_c(F(8, 5)), 2)
    bumped = q.with_values(q.phi * (1 + 0.01 * np.exp(-q.xi ** 2)))
    assert ode_residual(bumped) > 1e-4


def test_crest_curvature_matches_profile():
    p = params_from_c(1)
    q = profile_from_quadrature(p, 2, GridSpec(dx=0.005))
    fd = (q.phi[1] - q.phi[0]) * 2 / q.xi[1] ** 2
    assert fd == pytest.approx(crest_curvature(p, 2), rel=1e-3)


def test_zero_amplitude_at_sigma_equal_c():
    q = profile_from_quadrature(params_from_c(F(8, 5)), F(8, 5))
    assert q.H == 0.0
    assert np.all(q.phi == 0)


def test_invalid_regime_raises():
    with pytest.raises(ModelError):
        profile_from_quadrature(params_from_c(F(6, 5)), 1)


def test_xi_of_phi_inverts_phi_of_xi():
    sh = WaveShape(params_from_c(F(8, 5)), 2)
    xi = np.linspace(0, 20, 41)
    phi = sh.phi_of_xi(xi, 1e-300)
    assert np.allclose(sh.xi_of_phi(phi), xi, atol=1e-9)


@settings(max_examples=15, deadline=None)
@given(st.fractions(min_value=F(17, 10), max_value=F(4)).map(lambda s: s.limit_denominator(50)))
def test_first_integral_holds_along_profile(sigma):
    q = profile_from_quadrature(params_from_c(F(8, 5)), sigma, GridSpec(dx=0.05))
    sh = q.shape()
    lhs = q.phi_x ** 2
    rhs = q.phi ** 2 * sh.S(q.phi) / sh.Y(q.phi)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(q.H, 1.0) ** 2
