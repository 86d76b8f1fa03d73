"""Tests for the exact polynomial kernel."""

import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rchwave.ratpoly import (
    ParamPoly,
    Poly,
    cardano_real_root,
    count_real_roots,
    count_real_roots_open,
    discriminant,
    interpolate,
    is_positive_on_interval,
    is_positive_on_reals,
    isolate_and_refine,
    isolate_real_roots,
    param_resultant_in_b,
    poly_gcd,
    resultant,
    squarefree_part,
    sturm_chain,
)

small_rat = st.fractions(min_value=-6, max_value=6, max_denominator=5)


@st.composite
def polys(draw, min_deg=1, max_deg=6):
    deg = draw(st.integers(min_deg, max_deg))
    cs = draw(st.lists(small_rat, min_size=deg, max_size=deg))
    lead = draw(small_rat.filter(lambda v: v != 0))
    return Poly(cs + [lead])


def sylvester_resultant(p, q):
    """Resultant as the determinant of the Sylvester matrix (Fraction Gauss)."""
    m, n = p.degree, q.degree
    size = m + n
    a = list(reversed(p.coeffs))
    b = list(reversed(q.coeffs))
    rows = []
    for i in range(n):
        rows.append([F(0)] * i + a + [F(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([F(0)] * i + b + [F(0)] * (size - n - 1 - i))
    det = F(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if piv is None:
            return F(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, size):
            f = rows[r][col] / rows[col][col]
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return det


def euclid_sturm_count(p, lo, hi):
    """Classical Sturm count over Fractions (independent of the integer PRS)."""
    g = poly_gcd(p, p.derivative())
    q = p // g
    chain = [q, q.derivative()]
    while chain[-1].degree > 0:
        chain.append(-(chain[-2] % chain[-1]))

    def var(x):
        signs = [s for s in (c.sign_at(x) for c in chain) if s]
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

    return var(lo) - var(hi)


# -- construction and arithmetic ----------------------------------------------


def test_canonical_form_and_degree():
    assert Poly([1, 2, 0, 0]).coeffs == (F(1), F(2))
    assert Poly().degree == -1
    assert Poly([0, 0]).is_zero()
    assert Poly([3]).degree == 0


def test_floats_rejected():
    with pytest.raises(TypeError):
        Poly([0.5, 1])


def test_string_coefficients():
    assert Poly(["1/2", "1.6"]).coeffs == (F(1, 2), F(8, 5))


def test_divmod_hand_example():
    # x^3 - 1 = (x - 1)(x^2 + x + 1)
    q, r = divmod(Poly([-1, 0, 0, 1]), Poly([-1, 1]))
    assert q == Poly([1, 1, 1])
    assert r.is_zero()


def test_exact_div_raises_on_remainder():
    with pytest.raises(ArithmeticError):
        Poly([1, 0, 1]).exact_div(Poly([-1, 1]))


def test_json_roundtrip():
    p = Poly([F(-3, 2), 0, F(8, 5)])
    assert p.to_json() == ["-3/2", "0/1", "8/5"]
    assert Poly.from_json(p.to_json()) == p


@given(polys(0, 5), polys(1, 4))
def test_division_identity(p, q):
    quo, rem = divmod(p, q)
    assert quo * q + rem == p
    assert rem.degree < q.degree


@given(polys(0, 4), polys(0, 4), small_rat)
def test_evaluation_is_ring_homomorphism(p, q, x):
    assert (p * q)(x) == p(x) * q(x)
    assert (p + q)(x) == p(x) + q(x)


# -- gcd / resultant / discriminant ------------------------------------------


def test_gcd_hand_example():
    p = Poly.from_roots([1, 2, 2])
    q = Poly.from_roots([2, 3])
    assert poly_gcd(p, q) == Poly.from_roots([2])


def test_squarefree_part():
    p = Poly.from_roots([1, 1, 1, F(1, 2), F(1, 2), 3]) * 7
    assert squarefree_part(p) == Poly.from_roots([1, F(1, 2), 3])


@given(polys(1, 4), polys(1, 4), polys(0, 2))
@settings(max_examples=60)
def test_gcd_divides_and_recovers_common_factor(p, q, c):
    g = poly_gcd(p * c, q * c)
    assert (p * c) % g == Poly()
    assert (q * c) % g == Poly()
    if c.degree > 0:
        assert g % c.monic() == Poly()


def test_resultant_hand_values():
    # Res(x - a, f) = f(a); Res(x^2 - 2, x^2 - 3) = (3 - 2)^2
    f = Poly([5, -1, 0, 2])
    assert resultant(Poly([-3, 1]), f) == f(3)
    assert resultant(Poly([-2, 0, 1]), Poly([-3, 0, 1])) == 1
    # leading coefficient power and degree-parity sign
    assert resultant(Poly([2, -2]), Poly([F(-3, 2), F(-1, 2), F(7, 4), 1])) == -6


@given(polys(1, 5), polys(1, 5))
@settings(max_examples=80)
def test_resultant_matches_sylvester(p, q):
    assert resultant(p, q) == sylvester_resultant(p, q)


@given(polys(1, 4), polys(1, 4))
@settings(max_examples=40)
def test_resultant_antisymmetry(p, q):
    sign = -1 if (p.degree * q.degree) % 2 else 1
    assert resultant(p, q) == sign * resultant(q, p)


def test_discriminant_low_degree():
    # a x^2 + b x + c -> b^2 - 4ac
    assert discriminant(Poly([3, 5, 2])) == 25 - 24
    # x^3 + p x + q -> -4 p^3 - 27 q^2
    assert discriminant(Poly([7, -2, 0, 1])) == -4 * (-8) - 27 * 49
    assert discriminant(Poly.from_roots([1, 1, 4])) == 0


@given(st.lists(small_rat, min_size=2, max_size=5), small_rat.filter(lambda v: v != 0))
@settings(max_examples=40)
def test_discriminant_product_of_root_differences(roots, lead):
    p = Poly.from_roots(roots) * lead
    n = len(roots)
    prod = F(1)
    for i in range(n):
        for j in range(i + 1, n):
            prod *= (roots[i] - roots[j]) ** 2
    assert discriminant(p) == lead ** (2 * n - 2) * prod


# -- Sturm counting ------------------------------------------------------------


def test_sturm_chain_ends_in_constant():
    chain = sturm_chain(Poly.from_roots([1, 2, 2, 5]))
    assert chain[-1].degree == 0
    assert len(chain) == 4  # squarefree part has degree 3


def test_count_hand_examples():
    p = Poly.from_roots([-2, 0, F(1, 3), 1, 1])
    assert count_real_roots(p) == 4
    assert count_real_roots(p, F(0), F(1)) == 2  # (0, 1] holds 1/3 and 1
    assert count_real_roots(p, F(-2), F(0)) == 1  # -2 excluded, 0 included
    assert count_real_roots_open(p, F(0), F(1)) == 1
    assert count_real_roots(Poly([1, 0, 1])) == 0


def test_count_even_polynomial_half_open():
    p = Poly.from_roots([-3, 3, -1, 1]) * Poly([0, 0, 1])
    assert count_real_roots(p) == 5
    assert count_real_roots(p, F(-3), F(1)) == 3  # -1, 0, 1
    assert count_real_roots(p, F(-4), F(-1)) == 2
    assert count_real_roots(p, F(1), F(3)) == 1


@given(polys(1, 7), st.integers(-6, 5), st.integers(1, 8))
@settings(max_examples=100)
def test_count_matches_euclidean_sturm(p, lo, width):
    lo = F(lo, 2)
    hi = lo + F(width, 3)
    assert count_real_roots(p, lo, hi) == euclid_sturm_count(p, lo, hi)


@given(polys(1, 4), st.integers(-6, 5), st.integers(1, 8))
@settings(max_examples=60)
def test_even_shortcut_agrees_with_generic_count(p, lo, width):
    even = p.substitute_power(2)
    lo = F(lo, 2)
    hi = lo + F(width, 3)
    assert count_real_roots(even, lo, hi) == euclid_sturm_count(even, lo, hi)


@given(st.lists(small_rat, min_size=1, max_size=6, unique=True))
@settings(max_examples=60)
def test_count_of_rational_roots(roots):
    p = Poly.from_roots(roots)
    assert count_real_roots(p) == len(roots)
    lo, hi = min(roots) - 1, max(roots)
    assert count_real_roots(p, lo, hi) == len(roots)
    assert count_real_roots_open(p, lo, hi) == len(roots) - 1


def test_positivity():
    assert is_positive_on_reals(Poly([1, 0, 1]))
    assert not is_positive_on_reals(Poly.from_roots([2, 2]))  # touches zero
    assert not is_positive_on_reals(Poly([1, 1]))
    assert is_positive_on_interval(Poly.from_roots([0, 2]) * -1, F(0), F(2))
    assert not is_positive_on_interval(Poly.from_roots([1]), F(0), F(2))


# -- isolation and interpolation ----------------------------------------------


def test_isolation_sqrt2():
    p = Poly([-2, 0, 1])
    ivs = isolate_and_refine(p, 1e-20)
    assert len(ivs) == 2
    (lo, hi), approx = ivs[1]
    assert lo * lo <= 2 <= hi * hi or lo * lo < 2 < hi * hi
    assert abs(approx - math.sqrt(2)) < 1e-15


def test_isolation_exact_rational_root_is_point():
    ivs = isolate_real_roots(Poly.from_roots([F(1, 2), 3]))
    assert (F(1, 2), F(1, 2)) in ivs or any(lo < F(1, 2) <= hi for lo, hi in ivs)
    assert len(ivs) == 2


@given(st.lists(small_rat, min_size=1, max_size=5, unique=True))
@settings(max_examples=40)
def test_isolation_locates_every_root(roots):
    out = isolate_and_refine(Poly.from_roots(roots), 1e-10)
    assert len(out) == len(roots)
    for (iv, approx), r in zip(out, sorted(roots)):
        assert iv[0] <= r <= iv[1]
        assert abs(approx - float(r)) < 1e-9


@given(polys(0, 5))
@settings(max_examples=40)
def test_interpolation_recovers_polynomial(p):
    nodes = [F(k, 3) for k in range(p.degree + 1)]
    assert interpolate(nodes, [p(x) for x in nodes]) == p


def test_param_discriminant_quadratic():
    # x^2 + b x + 1: discriminant b^2 - 4
    G = ParamPoly([Poly([1]), Poly([0, 1]), Poly([1])])
    assert param_resultant_in_b(G) == Poly([-4, 0, 1])


def test_param_discriminant_even_shortcut_matches_direct():
    # x^3 - 3 b^2 x + b^4 (even in b)
    G = ParamPoly([Poly([0, 0, 0, 0, 1]), Poly([0, 0, -3]), Poly(), Poly([1])])
    direct = param_resultant_in_b(G, use_square=False)
    short = param_resultant_in_b(G, use_square=True)
    assert direct == short
    for b in (F(1), F(2, 3), F(-5, 2)):
        assert direct(b) == discriminant(G.specialize(b))


def test_param_discriminant_avoids_leading_zeros():
    # leading coefficient b vanishes at the first candidate node
    G = ParamPoly([Poly([1]), Poly([2, 1]), Poly([0, 1])])
    disc = param_resultant_in_b(G)
    for b in (F(1), F(3), F(-7, 2)):
        assert disc(b) == discriminant(G.specialize(b))


# -- Cardano -------------------------------------------------------------------


def test_cardano_single_real_root():
    (r,) = cardano_real_root(1, 0, 1, -2)  # x^3 + x - 2 = (x - 1)(x^2 + x + 2)
    assert r == pytest.approx(1.0, abs=1e-15)


def test_cardano_three_real_roots():
    roots = cardano_real_root(2, -12, 22, -12)  # 2(x-1)(x-2)(x-3)
    assert roots == pytest.approx((1.0, 2.0, 3.0), abs=1e-14)


def test_cardano_cancellation_prone_case():
    # widely separated roots: 1e6 and the two small roots of 1e6 x^2 + x - 1e-6
    roots = cardano_real_root(1.0, -1e6, -1.0, 1e-6)
    small = sorted(np.roots([1e6, 1.0, -1e-6]).real)
    assert roots[0] == pytest.approx(small[0], rel=1e-9)
    assert roots[1] == pytest.approx(small[1], rel=1e-9)
    assert roots[2] == pytest.approx(1e6 + 1e-6, rel=1e-15)


@given(st.floats(-5, 5), st.floats(0.1, 5), st.floats(-5, 5))
def test_cardano_residual_small(r, scale, shift):
    # (x - r)(x^2 + 2 shift x + shift^2 + scale) has exactly one real root r
    a2 = 2 * shift - r
    a1 = shift * shift + scale - 2 * shift * r
    a0 = -r * (shift * shift + scale)
    (root,) = cardano_real_root(1.0, a2, a1, a0)
    assert root == pytest.approx(r, abs=1e-9 * (1 + abs(r) + abs(shift) ** 2))


# -- listed examples and properties -------------------------------------------


def test_listed_arithmetic_examples():
    x = Poly.x()
    q, r = divmod(x ** 2 - 1, x - 1)
    assert (q, r) == (x + 1, Poly())
    assert poly_gcd(x ** 2 - 1, x ** 2 - 2 * x + 1) == x - 1
    assert (x + 1) * (x - 1) == x ** 2 - 1


def test_listed_sturm_examples():
    x = Poly.x()
    assert len(sturm_chain(x ** 2 - 2)) == 3
    assert count_real_roots(x ** 2 - 2) == 2
    assert count_real_roots(x ** 2 + 1) == 0
    assert count_real_roots((x - 1) ** 2) == 1
    assert count_real_roots(x ** 3 - x) == 3
    assert count_real_roots(x ** 3 - x, F(0), F(2)) == 1
    assert count_real_roots(x ** 4 + 1) == 0
    assert is_positive_on_reals(x ** 4 + 1)
    assert not is_positive_on_reals(x ** 2 - 2)
    assert not is_positive_on_reals(-(x ** 2) - 1)
    assert is_positive_on_reals(Poly([3]))


def test_listed_resultant_examples():
    x = Poly.x()
    assert discriminant(x ** 2 + 3 * x + 1) == 5
    assert discriminant(x ** 2 - 2) == 8
    # 2x2 Sylvester determinant |1 -1; 1 -2| = -2 + 1
    assert resultant(x - 1, x - 2) == -1
    G = ParamPoly([Poly([0, 1]), Poly(), Poly([1])])  # x^2 + b
    assert param_resultant_in_b(G) == Poly([0, -4])


def test_listed_cardano_and_isolation_examples():
    assert cardano_real_root(1, 0, 0, -8) == pytest.approx((2.0,), abs=1e-15)
    assert cardano_real_root(1, -3, 3, -1) == pytest.approx((1.0, 1.0, 1.0), abs=1e-12)
    ivs = isolate_and_refine(Poly([-2, 0, 1]), 1e-10)
    assert [a for _, a in ivs] == pytest.approx([-math.sqrt(2), math.sqrt(2)], abs=1e-10)
    ((lo, hi), _), = isolate_and_refine(Poly([F(-3, 7), 1]), 1e-10)
    assert lo == hi == F(3, 7)


@given(polys(1, 8))
@settings(max_examples=60, deadline=None)
def test_count_agrees_with_isolation_and_sampling(p):
    n = count_real_roots(p)
    assert n == len(isolate_real_roots(p))
    # dense sampling cannot see double roots, so compare on the squarefree part
    q = squarefree_part(p)
    bound = float(max(abs(c) for c in q.coeffs[:-1]) / abs(q.lc) + 1) if q.degree else 1.0
    xs = np.linspace(-bound, bound, 200001)
    vals = q.eval_float(xs)
    changes = int(np.sum(np.sign(vals[1:]) * np.sign(vals[:-1]) < 0)) + int(np.sum(vals == 0))
    assert changes <= n


@given(st.lists(small_rat, min_size=1, max_size=4), small_rat)
@settings(max_examples=40)
def test_discriminant_zero_iff_repeated_root(roots, extra):
    p = Poly.from_roots(roots) * Poly([-extra, 1])
    repeated = extra in roots or len(set(roots)) < len(roots)
    assert (discriminant(p) == 0) == repeated
    assert (poly_gcd(p, p.derivative()).degree > 0) == repeated


@given(polys(1, 3), polys(1, 3), polys(1, 3))
@settings(max_examples=40)
def test_resultant_multiplicative(p, q, r):
    assert resultant(p * q, r) == resultant(p, r) * resultant(q, r)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=1, max_size=3), min_size=2, max_size=4),
       st.fractions(-4, 4, max_denominator=4))
@settings(max_examples=30, deadline=None)
def test_param_discriminant_specializes(rows, b):
    rows[-1][0] = rows[-1][0] or 1  # leading coefficient not identically zero
    G = ParamPoly([Poly(r) for r in rows])
    disc = param_resultant_in_b(G)
    spec = G.specialize(b)
    if spec.degree == G.degree:
        assert disc(b) == discriminant(spec)


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20), st.integers(1, 5))
@settings(max_examples=80)
def test_cardano_residual_and_isolation(a2, a1, a0, a3):
    p = Poly([a0, a1, a2, a3])
    roots = cardano_real_root(a3, a2, a1, a0)
    scale = max(abs(a3), abs(a2), abs(a1), abs(a0))
    for r in roots:
        mag = max(1.0, abs(r)) ** 3
        assert abs(p.eval_float(r)) <= 1e-10 * scale * mag
    if len(roots) == 1:
        ((lo, hi), _), = [iv for iv in isolate_and_refine(p, 1e-14)]
        assert float(lo) - 1e-12 * max(1, abs(roots[0])) <= roots[0] <= float(hi) + 1e-12 * max(1, abs(roots[0]))


def test_simplest_rational_between():
    from rchwave.ratpoly import simplest_rational_between as srb
    assert srb(F(1, 3), F(1, 2)) == F(1, 2)
    assert srb(F(3, 10), F(2, 5)) == F(1, 3)
    assert srb(F(-7, 3), F(-2, 1)) == -2
    assert srb(F(-1), F(1)) == 0
    assert srb(F(355, 113) - F(1, 10 ** 7), F(355, 113) + F(1, 10 ** 7)) == F(355, 113)
