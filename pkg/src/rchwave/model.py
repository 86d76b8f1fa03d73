"""Model constants, speed regimes and the core polynomials T, S, Y.

Everything is exact: the wave-speed constant ``c`` is a rational number and
every derived constant is a ``Fraction``.  The Coriolis frequency is
``omega = (1 - c^2) / (2 c)``, which inverts ``c = sqrt(1 + omega^2) - omega``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .ratpoly import Poly, as_fraction, count_real_roots, isolate_and_refine, refine_root, squarefree_part


class ModelError(ValueError):
    """Invalid parameters or a speed outside the regime where waves exist."""


class AnomalyWarning(UserWarning):
    """A sign or consistency check that the analysis relies on did not hold."""


@dataclass(frozen=True)
class ModelParams:
    c: Fraction
    omega: Fraction
    alpha: Fraction
    beta0: Fraction
    beta: Fraction
    K: Fraction
    w1: Fraction
    w2: Fraction
    A: Fraction
    B: Fraction
    # set by params_from_omega: |c - (sqrt(1 + omega^2) - omega)| bound
    approximation_error: Optional[float] = field(default=None, compare=False)

    @property
    def omega_float(self) -> float:
        return float(self.omega)

    def as_dict(self) -> dict:
        return {
            "c": self.c,
            "omega": self.omega,
            "alpha": self.alpha,
            "beta0": self.beta0,
            "beta": self.beta,
            "K": self.K,
            "w1": self.w1,
            "w2": self.w2,
            "A": self.A,
            "B": self.B,
        }


def params_from_c(c) -> ModelParams:
    """All model constants from the rational wave-speed constant ``c``."""
    c = as_fraction(c)
    if c <= 0:
        raise ModelError(f"c must be positive, got {c}")
    c2 = c * c
    s = 1 + c2
    alpha = c2 / s
    beta0 = c * (c2 * c2 + 6 * c2 - 1) / (6 * s)
    beta = (3 * c2 * c2 + 8 * c2 - 1) / (6 * s)
    if beta == 0:
        raise ModelError("beta vanishes; K = beta0/beta undefined")
    w1 = -3 * c * (c2 - 1) * (c2 - 2) / (2 * s ** 3)
    w2 = (c2 - 2) * (c2 - 1) ** 2 * (8 * c2 - 1) / (2 * s ** 5)
    return ModelParams(
        c=c,
        omega=(1 - c2) / (2 * c),
        alpha=alpha,
        beta0=beta0,
        beta=beta,
        K=beta0 / beta,
        w1=w1,
        w2=w2,
        A=w2 / (10 * alpha ** 3),
        B=w1 / (6 * alpha ** 2),
    )


def c_from_omega(omega, precision) -> tuple:
    """Rational c with |c - (sqrt(1 + omega^2) - omega)| <= precision.

    Returns ``(c, error_bound)``; the bound is 0 when 1 + omega^2 is a
    rational square.
    """
    om = Fraction(omega) if isinstance(omega, float) else as_fraction(omega)
    if isinstance(omega, float) and not math.isfinite(omega):
        raise ModelError("omega must be finite")
    tol = as_fraction(precision) if not isinstance(precision, float) else Fraction(precision)
    if tol <= 0:
        raise ModelError("precision must be positive")
    rad = 1 + om * om
    root = _rational_sqrt(rad)
    if root is not None:
        return root - om, 0.0
    # f(c) = c^2 + 2 omega c - 1 is negative on [0, c*) and increasing beyond
    lo, hi = Fraction(0), 1 + abs(om) + 1
    f = lambda x: x * x + 2 * om * x - 1  # noqa: E731
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    from .ratpoly import simplest_rational_between

    c = simplest_rational_between(lo, hi)
    return c, float(hi - lo)


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def params_from_omega(omega, precision="1/1000000000000") -> ModelParams:
    c, err = c_from_omega(omega, precision)
    p = params_from_c(c)
    return ModelParams(**p.as_dict(), approximation_error=err)


# ---------------------------------------------------------------------------
# Regimes


class RegimeTag(str, enum.Enum):
    ELEVATION_LOW_C = "ElevationLowC"
    ELEVATION_HIGH_C = "ElevationHighC"
    DEGENERATE = "Degenerate"
    OUT_OF_RANGE = "OutOfRange"


@dataclass(frozen=True)
class Regime:
    tag: RegimeTag
    sigma_minus_K_positive: bool


def regime_classify(params: ModelParams, sigma) -> Regime:
    """Branch of the existence theorem that (c, sigma) falls into.

    sqrt(2)/4 < c < sqrt(2), c != 1, sigma < c  -> ElevationLowC
    c > sqrt(2), sigma > c                      -> ElevationHighC
    """
    sigma = as_fraction(sigma)
    c = params.c
    c2 = c * c
    if c == 1:
        tag = RegimeTag.DEGENERATE
    elif Fraction(1, 8) < c2 < 2 and sigma < c:
        tag = RegimeTag.ELEVATION_LOW_C
    elif c2 > 2 and sigma > c:
        tag = RegimeTag.ELEVATION_HIGH_C
    else:
        tag = RegimeTag.OUT_OF_RANGE
    return Regime(tag, sigma - params.K > 0)


# ---------------------------------------------------------------------------
# Polynomials in phi


def cubic_T(params: ModelParams, sigma) -> Poly:
    """T(phi) = w2/(4 a^3) phi^3 + w1/(3 a^2) phi^2 + 3/2 phi + c - sigma."""
    sigma = as_fraction(sigma)
    a = params.alpha
    return Poly([params.c - sigma, Fraction(3, 2), params.w1 / (3 * a * a), params.w2 / (4 * a ** 3)])


def S_poly(params: ModelParams, sigma) -> Poly:
    """S(phi) = A phi^3 + B phi^2 + phi + c - sigma."""
    sigma = as_fraction(sigma)
    return Poly([params.c - sigma, 1, params.B, params.A])


def Y_poly(params: ModelParams, sigma) -> Poly:
    """Y(phi) = phi - sigma + K."""
    sigma = as_fraction(sigma)
    return Poly([params.K - sigma, 1])


def P_poly(params: ModelParams, sigma) -> Poly:
    """P(phi) = phi T(phi), the numerator of the planar vector field."""
    return cubic_T(params, sigma) * Poly.x()


def V_poly(params: ModelParams, sigma) -> Poly:
    """V(phi) = phi^2 S(phi) / 2, the potential of the first integral."""
    return S_poly(params, sigma) * Poly([0, 0, Fraction(1, 2)])


@dataclass(frozen=True)
class Amplitude:
    """Amplitude H of the wave at speed sigma with an exact isolating interval."""

    sigma: Fraction
    H: float
    interval: tuple
    sturm_count: int

    @property
    def exact(self) -> Optional[Fraction]:
        lo, hi = self.interval
        return lo if lo == hi else None


def amplitude(params: ModelParams, sigma, width: float = 1e-18) -> Amplitude:
    """Smallest positive root H of S, where the wave turns around.

    A solitary wave needs phi_x^2 = phi^2 S / Y to be positive on (0, H), so
    S and Y must share a sign there and Y must not vanish on [0, H].  In the
    high-speed branch this is H < sigma - K (both negative); when sigma < K
    both are positive.  ``sturm_count`` is the exact number of distinct roots
    of S in (0, H_hi], which is 1 by construction.
    """
    sigma = as_fraction(sigma)
    S = S_poly(params, sigma)
    if sigma == params.c:
        return Amplitude(sigma, 0.0, (Fraction(0), Fraction(0)), 1)
    if S.degree < 1:
        raise ModelError("S is constant; no amplitude")
    roots = [r for r in isolate_and_refine(S, width) if r[0][1] > 0]
    if not roots:
        raise ModelError(f"S has no positive root at sigma = {sigma}; outside the existence range")
    (lo, hi), H = roots[0]
    if lo < 0:
        lo = Fraction(0)
    q = squarefree_part(S)
    if lo < hi:
        lo, hi = refine_root(q, (lo, hi), Fraction(width))
    count = count_real_roots(S, Fraction(0), hi)
    Y = Y_poly(params, sigma)
    # Y is linear: it must keep one sign on [0, H]
    y0, yH = Y(Fraction(0)), Y(hi)
    ylo = Y(lo)
    if y0 == 0 or y0 * yH <= 0 or y0 * ylo <= 0:
        raise ModelError(
            f"singular line phi = sigma - K = {float(sigma - params.K):.17g} meets [0, H], H = {H:.17g}"
        )
    if S(Fraction(0)) * y0 < 0:
        raise ModelError(
            "S and Y have opposite signs near 0 (origin is a center, no solitary wave)"
        )
    return Amplitude(sigma, H, (lo, hi), count)


def sigma_of_H(params: ModelParams, H) -> Fraction:
    """Inverse amplitude map: sigma = A H^3 + B H^2 + H + c."""
    H = as_fraction(H)
    return ((params.A * H + params.B) * H + 1) * H + params.c


def sigma_of_H_float(params: ModelParams, H: float) -> float:
    return ((float(params.A) * H + float(params.B)) * H + 1.0) * H + float(params.c)


def dsigma_dH(params: ModelParams, H):
    """3 A H^2 + 2 B H + 1, exact for rational H, float otherwise."""
    if isinstance(H, float):
        return (3.0 * float(params.A) * H + 2.0 * float(params.B)) * H + 1.0
    H = as_fraction(H)
    return (3 * params.A * H + 2 * params.B) * H + 1


def h_prime(params: ModelParams, H):
    """Derivative of the amplitude with respect to the speed, 1 / sigma'(H).

    A non-positive denominator is reported with an :class:`AnomalyWarning`
    rather than raised: the amplitude then decreases with the speed, which
    does happen on the low-speed branch.
    """
    den = dsigma_dH(params, H)
    if den == 0:
        raise ModelError("sigma'(H) = 0; amplitude map not invertible here")
    if den < 0:
        warnings.warn(
            f"h'(sigma) < 0 at H = {float(H):.6g}: amplitude decreases with speed",
            AnomalyWarning,
            stacklevel=2,
        )
    return 1 / den
