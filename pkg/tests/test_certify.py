"""Three-condition positivity certificates."""

from fractions import Fraction as F

import numpy as np
import pytest

from rchwave.certify import (
    CERTIFIED,
    INCONCLUSIVE,
    REFUTED,
    certify_positivity,
    dense_min_N,
    even_x_factors,
    sweep_valid,
)
from rchwave.model import params_from_c
from rchwave.npoly import build_Gb, derive_N
from rchwave.ratpoly import ParamPoly, Poly, discriminant


def PP(*cols):
    return ParamPoly([Poly(c) for c in cols])


def test_trivial_certified():
    # G = x^2 + b^2 + 1
    G = PP([1, 0, 1], [], [1])
    r = certify_positivity(G, 0)
    assert r.verdict == CERTIFIED
    assert r.cond_i["verdict"] and r.cond_ii["verdict"] and r.cond_iii["verdict"]


@pytest.mark.parametrize("method", ["factored", "full"])
def test_refuted_with_exact_witness(method):
    # G = x^2 + 1 - b: negative near x = 0 once b > 1
    G = PP([1, -1], [], [1])
    r = certify_positivity(G, 0, (F(-1), F(3)), method=method)
    assert r.verdict == REFUTED
    w = r.overall["witness"]
    assert G(F(w["x"]), F(w["b"])) <= 0
    assert -1 < F(w["b"]) <= 3


@pytest.mark.parametrize("method", ["factored", "full"])
def test_range_restriction_certifies(method):
    G = PP([1, -1], [], [1])
    r = certify_positivity(G, 0, (F(-1), F(1, 2)), method=method)
    assert r.verdict == CERTIFIED


def test_never_refutes_a_positive_family():
    # (x^2 - b)^2 + 1 is positive everywhere; its discriminant in x still has
    # real roots in b, so the certificate may be inconclusive but never refuted
    G = PP([1, 0, 1], [], [0, -2], [], [1])
    r = certify_positivity(G, 0, None)
    assert r.verdict in (CERTIFIED, INCONCLUSIVE)
    assert r.verdict != REFUTED


def test_condition_iii_failure():
    # leading coefficient b changes sign at 0
    G = PP([1], [], [0, 1])
    r = certify_positivity(G, 1, None)
    assert not r.cond_iii["verdict"]
    assert r.verdict == REFUTED


def test_b0_outside_range_rejected():
    with pytest.raises(ValueError):
        certify_positivity(PP([1], [], [1]), 5, (F(0), F(1)))


def test_even_factorisation_identity_on_model_G():
    G = build_Gb(derive_N(params_from_c(F(8, 5))))
    fac = even_x_factors(G)
    m = fac["m"]
    for b in (F(1, 3), F(2), F(-7, 5)):
        lhs = discriminant(G.specialize(b))
        rhs = (-4) ** m * fac["leading"](b) * fac["constant"](b) * fac["disc_q"](b) ** 2
        assert lhs == rhs


def test_factored_and_full_agree_on_small_even_family():
    G = PP([2, 0, 1], [], [-1, 1], [], [1, 0, 1])  # (b^2+1) x^4 + (b - 1) x^2 + b^2 + 2
    for rng in (None, (F(0), F(2)), (F(-3), F(-1))):
        a = certify_positivity(G, 1 if rng in (None, (F(0), F(2))) else -2, rng, method="factored")
        b = certify_positivity(G, 1 if rng in (None, (F(0), F(2))) else -2, rng, method="full")
        assert a.verdict == b.verdict
        assert (a.cond_ii["roots_in_range"] == 0) == (b.cond_ii["roots_in_range"] == 0)


def test_dense_min_positive_for_high_c():
    p = params_from_c(F(8, 5))
    d = dense_min_N(p, 4, 200, 200)
    assert d["min"] > 0
    assert 0 < d["z"] < 1 and 0 < d["H"] <= 4


def test_sweep_validity():
    assert sweep_valid(F(8, 5))
    assert sweep_valid(F(1, 2))
    assert not sweep_valid(F(1))
    assert not sweep_valid(F(1, 4))


def test_result_serialises():
    r = certify_positivity(PP([1, 0, 1], [], [1]), 0, (F(-1), F(1)))
    d = r.as_dict()
    assert d["b_interval"] == ["-1/1", "1/1"]
    assert d["overall"]["verdict"] == CERTIFIED
    assert np.isfinite(d["timings"]["cond_ii"])
