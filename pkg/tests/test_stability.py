"""d(sigma) and its derivatives, the N finite-difference check and the spectrum."""

import math
import warnings
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from rchwave.model import AnomalyWarning, ModelError, amplitude, params_from_c
from rchwave.stability import (
    N_fd_check,
    d_prime,
    d_prime_of_H,
    d_prime_xspace,
    d_prime_yspace,
    d_second,
    d_second_fd,
    d_second_integral,
    d_value,
    spectrum_check,
    stability_report,
)

PH = params_from_c(F(8, 5))
PL = params_from_c(F(1, 2))
P1 = params_from_c(1)


def test_d_prime_methods_agree():
    for p, s in [(PH, F(2)), (PH, F(3)), (PL, F(0)), (P1, F(2))]:
        assert d_prime_xspace(p, s) == pytest.approx(d_prime_yspace(p, s), rel=1e-9)


def test_d_prime_dispatch_and_zero_wave():
    assert d_prime(PH, 2, "x") == pytest.approx(d_prime(PH, 2, "y"), rel=1e-9)
    assert d_prime_yspace(PH, F(8, 5)) == 0.0
    with pytest.raises(ValueError):
        d_prime(PH, 2, "z")


def test_d_prime_is_derivative_of_d():
    # d(sigma) = sigma E - F has d' = E
    h = F(1, 200)
    fd = (d_value(PH, 2 + h) - d_value(PH, 2 - h)) / (2 * float(h))
    assert fd == pytest.approx(d_prime_yspace(PH, 2), rel=1e-4)


def test_d_second_routes_agree_high_regime():
    for s in (F(17, 10), F(2), F(3), F(4)):
        fd = d_second_fd(PH, s)
        it = d_second_integral(PH, s)
        assert fd.value == pytest.approx(it["value"], rel=1e-8)
        assert fd.error_estimate < 1e-6 * abs(fd.value)
        assert it["value"] > 0


def test_d_second_routes_agree_low_regime():
    # same agreement at c = 1/2, where h'(sigma) < 0
    for s in (F(-2), F(0), F(1, 5)):
        fd = d_second_fd(PL, s).value
        it = d_second_integral(PL, s)
        assert it["h_prime"] < 0
        assert fd == pytest.approx(it["value"], rel=1e-7)


def test_d_second_dispatch():
    assert d_second(PH, 2, "fd") == pytest.approx(d_second(PH, 2, "integral"), rel=1e-8)


def test_U_of_H_matches_sigma_parametrisation():
    H = amplitude(PH, 2).H
    assert d_prime_of_H(PH, H) == pytest.approx(d_prime_yspace(PH, 2), rel=1e-12)


def test_d_prime_against_direct_quadrature():
    H = amplitude(P1, 2).H
    # c = 1: S = y - 1, Y = y - 7/5
    val = quad(lambda y: y * ((1 - y) + (1.4 - y)) / math.sqrt((y - 1) * (y - 1.4)), 0, H,
               epsabs=0, epsrel=1e-11)[0]
    assert d_prime_yspace(P1, 2) == pytest.approx(val, rel=1e-9)


def test_stability_report_high_c():
    r = stability_report(PH, 2)
    assert r.regime == "ElevationHighC"
    assert r.agreement_flags["d_prime_agree"] and r.agreement_flags["d_second_agree"]
    assert r.sign_verdict
    assert r.calibration_sign_ok
    assert set(r.as_dict()) >= {"sigma", "d_value", "d_prime_xspace", "d_prime_yspace", "d_second_fd",
                                "d_second_integral", "agreement_flags", "sign_verdict"}


@settings(max_examples=10, deadline=None)
@given(st.fractions(min_value=F(17, 10), max_value=F(4)).map(lambda s: s.limit_denominator(40)))
def test_d_prime_increasing_in_high_regime(sigma):
    lo = d_prime_yspace(PH, sigma)
    hi = d_prime_yspace(PH, sigma + F(1, 20))
    assert hi > lo > 0


@pytest.mark.parametrize("c,H_max", [(F(8, 5), 3.0), (F(1, 2), 0.9), (F(1), 2.0)])
def test_N_matches_finite_differences(c, H_max):
    rep = N_fd_check(params_from_c(c), H_max, n_points=50, seed=7)
    assert rep["n"] == 50
    assert rep["max_rel"] <= 1e-6


def test_spectrum_high_c():
    sp = spectrum_check(PH, 2, n=2000)
    assert sp.negative_count == 1
    assert sp.nearest_zero_ratio <= 1e-4
    assert sp.cosine_with_phi_x >= 0.999
    assert sp.Q_boundary == pytest.approx(sp.sigma_minus_c, abs=1e-3)
    assert sp.lowest[0] < -0.1


def test_spectrum_kernel_shrinks_with_resolution():
    a = abs(spectrum_check(PH, 2, n=500).nearest_zero)
    b = abs(spectrum_check(PH, 2, n=2000).nearest_zero)
    assert b < a / 4


def test_spectrum_non_elliptic_raises():
    with pytest.raises(ModelError):
        spectrum_check(PL, 0, n=200)
