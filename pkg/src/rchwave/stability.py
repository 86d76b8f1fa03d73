"""Convexity of d(sigma) = sigma E - F and the spectrum of the linearised operator.

d'(sigma) = E is computed two ways (x-space from the profile, y-space as a
one-dimensional integral over the amplitude range) and d''(sigma) two ways
(central differences of d' and the integral of N(z, H)).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.integrate import quad
from scipy.linalg import eigh_tridiagonal

from .model import AnomalyWarning, ModelError, ModelParams, amplitude, dsigma_dH, regime_classify
from .npoly import N_float_evaluator, derive_N
from .profile import GridSpec, WaveShape, conserved_quantities, profile_from_quadrature
from .ratpoly import as_fraction

D_PRIME_RTOL = 1e-6
D_SECOND_RTOL = 1e-4


def _quad(f, a, b, epsrel=1e-13) -> float:
    val, _err = quad(f, a, b, epsabs=0.0, epsrel=epsrel, limit=200)
    return float(val)


# ---------------------------------------------------------------------------
# d and d'


def d_prime_yspace(params: ModelParams, sigma) -> float:
    """int_0^H y (|S| + |Y|) / sqrt(S Y) dy, S and Y at (y, sigma).

    With y = H (1 - t^2) and S = (y - H) Q(y) the crest singularity cancels:
    the integrand becomes 2 H y (H t^2 |Q| + |Y|) / sqrt(H |Q Y|).
    """
    sigma = as_fraction(sigma)
    if sigma == params.c:
        return 0.0
    sh = WaveShape(params, sigma)
    return _d_prime_from_shape(sh)


def _d_prime_from_shape(sh: WaveShape) -> float:
    H = sh.H
    q0, q1, q2 = sh.q
    y0 = sh.y0

    def integrand(t):
        y = H * (1.0 - t * t)
        Q = q0 + y * (q1 + y * q2)
        Y = y + y0
        if Q * Y >= 0.0:
            raise ModelError("S Y <= 0 inside (0, H)")
        return 2.0 * H * y * (H * t * t * abs(Q) + abs(Y)) / math.sqrt(H * abs(Q * Y))

    return _quad(integrand, 0.0, 1.0)


def d_prime_of_H(params: ModelParams, H: float) -> float:
    """U(H): the y-space d' at the speed sigma = h^{-1}(H)."""
    sigma = Fraction(((float(params.A) * H + float(params.B)) * H + 1.0) * H) + params.c
    return _d_prime_from_shape(WaveShape(params, sigma, H))


def d_prime_xspace(params: ModelParams, sigma, spec: GridSpec = GridSpec()) -> float:
    """E = 1/2 int (phi^2 + phi_x^2) dx over the quadrature profile."""
    sigma = as_fraction(sigma)
    if sigma == params.c:
        return 0.0
    return conserved_quantities(profile_from_quadrature(params, sigma, spec)).E


def d_prime(params: ModelParams, sigma, method: str = "yspace") -> float:
    method = method.lower()
    if method in ("yspace", "y"):
        return d_prime_yspace(params, sigma)
    if method in ("xspace", "x"):
        return d_prime_xspace(params, sigma)
    raise ValueError(f"unknown method {method!r}")


def d_value(params: ModelParams, sigma, spec: GridSpec = GridSpec()) -> float:
    """d(sigma) = sigma E - F."""
    sigma = as_fraction(sigma)
    if sigma == params.c:
        return 0.0
    cq = conserved_quantities(profile_from_quadrature(params, sigma, spec))
    return float(sigma) * cq.E - cq.F


# ---------------------------------------------------------------------------
# d''


@dataclass(frozen=True)
class FiniteDiff:
    value: float
    coarse: float
    fine: float
    step: float

    @property
    def error_estimate(self) -> float:
        return abs(self.fine - self.coarse) / 3.0


def d_second_fd(params: ModelParams, sigma, rho=None) -> FiniteDiff:
    """Central differences of the y-space d' with steps rho and rho/2,
    combined by Richardson extrapolation (the O(rho^2) terms cancel)."""
    sigma = as_fraction(sigma)
    if rho is None:
        rho = Fraction(1, 1000) * max(1, abs(sigma - params.c))
        rho = min(rho, abs(sigma - params.c) / 4) if sigma != params.c else rho
        rho = Fraction(rho).limit_denominator(10 ** 9)
    rho = as_fraction(rho) if not isinstance(rho, float) else Fraction(rho)

    def central(h):
        return (d_prime_yspace(params, sigma + h) - d_prime_yspace(params, sigma - h)) / (2.0 * float(h))

    coarse = central(rho)
    fine = central(rho / 2)
    return FiniteDiff((4.0 * fine - coarse) / 3.0, coarse, fine, float(rho))


class _NIntegral:
    """Cached float evaluator of N for one parameter set."""

    _cache: dict = {}

    @classmethod
    def evaluator(cls, params: ModelParams):
        key = params.c
        if key not in cls._cache:
            cls._cache[key] = N_float_evaluator(derive_N(params))
        return cls._cache[key]


def d_second_integral(params: ModelParams, sigma) -> dict:
    """d'' = h'(sigma) d_H U with d_H U = -eps int_0^1 H^2 z (1-z) N / |S Y|^{3/2} dz.

    eps = sign(S) = sign(Y) on the wave; z = 1 - t^2 turns the (1-z)^{-1/2}
    endpoint behaviour into a smooth integrand 2 sqrt(H) z N / |Q Y|^{3/2}
    with S = H (z - 1) Q.
    """
    sigma = as_fraction(sigma)
    amp = amplitude(params, sigma)
    H = amp.H
    sh = WaveShape(params, sigma, H)
    N = _NIntegral.evaluator(params)
    A, B = float(params.A), float(params.B)
    y0 = sh.y0

    def integrand(t):
        z = 1.0 - t * t
        Q = A * H * H * (z * z + z + 1.0) + B * H * (z + 1.0) + 1.0
        Y = H * z + y0
        return 2.0 * math.sqrt(H) * z * float(N(z, H)) / abs(Q * Y) ** 1.5

    integral = _quad(integrand, 0.0, 1.0, epsrel=1e-12)
    eps = 1.0 if sh.S(0.5 * H) > 0 else -1.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AnomalyWarning)
        hp = 1.0 / float(dsigma_dH(params, H))
    return {"value": hp * (-eps) * integral, "h_prime": hp, "eps": eps, "N_integral": integral, "H": H}


def d_second(params: ModelParams, sigma, method: str = "integral") -> float:
    method = method.lower()
    if method in ("finitediff", "fd"):
        return d_second_fd(params, sigma).value
    if method in ("integraln", "integral", "n"):
        return d_second_integral(params, sigma)["value"]
    raise ValueError(f"unknown method {method!r}")


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


@dataclass
class StabilityReport:
    sigma: Fraction
    c: Fraction
    regime: str
    H: float
    d_value: float
    d_prime_xspace: float
    d_prime_yspace: float
    d_second_fd: float
    d_second_fd_error: float
    d_second_integral: float
    h_prime: float
    agreement_flags: dict = field(default_factory=dict)
    sign_verdict: bool = False
    calibration_sign_ok: bool = True

    def as_dict(self) -> dict:
        return asdict(self)


def stability_report(params: ModelParams, sigma, spec: GridSpec = GridSpec()) -> StabilityReport:
    sigma = as_fraction(sigma)
    regime = regime_classify(params, sigma).tag.value
    prof = profile_from_quadrature(params, sigma, spec)
    cq = conserved_quantities(prof)
    dx = cq.E
    dy = d_prime_yspace(params, sigma)
    fd = d_second_fd(params, sigma)
    integ = d_second_integral(params, sigma)
    rel1 = _rel(dx, dy)
    rel2 = _rel(fd.value, integ["value"])
    flags = {
        "d_prime_rel_diff": rel1,
        "d_prime_agree": rel1 <= D_PRIME_RTOL,
        "d_second_rel_diff": rel2,
        "d_second_agree": rel2 <= D_SECOND_RTOL,
    }
    return StabilityReport(
        sigma=sigma,
        c=params.c,
        regime=regime,
        H=prof.H,
        d_value=float(sigma) * cq.E - cq.F,
        d_prime_xspace=dx,
        d_prime_yspace=dy,
        d_second_fd=fd.value,
        d_second_fd_error=fd.error_estimate,
        d_second_integral=integ["value"],
        h_prime=integ["h_prime"],
        agreement_flags=flags,
        sign_verdict=integ["value"] > 0,
        calibration_sign_ok=(fd.value > 0) == (integ["value"] > 0),
    )


# ---------------------------------------------------------------------------
# Spectrum of the linearised operator


@dataclass
class SpectrumSummary:
    n: int
    L: float
    negative_count: int
    raw_negative_count: int
    zero_tol: float
    lowest: list
    nearest_zero: float
    Q_sup: float
    nearest_zero_ratio: float
    cosine_with_phi_x: float
    Q_boundary: float
    sigma_minus_c: float
    P_min: float

    def as_dict(self) -> dict:
        return asdict(self)


def operator_coefficients(params: ModelParams, sigma, x: np.ndarray, sh: Optional[WaveShape] = None):
    """phi, phi_x, P = sigma - K - phi and
    Q = sigma - c - 3 phi - (w1/a^2) phi^2 - (w2/a^3) phi^3 + phi_xx at points x."""
    sigma = as_fraction(sigma)
    sh = sh or WaveShape(params, sigma)
    ax = np.abs(x)
    phi = sh.phi_of_xi(ax, 1e-300)
    px = sh.phi_x(phi) * np.sign(x)
    pxx = sh.phi_xx(phi)
    a = params.alpha
    s = float(sigma)
    Q = (s - float(params.c) - 3.0 * phi - float(params.w1 / (a * a)) * phi ** 2
         - float(params.w2 / a ** 3) * phi ** 3 + pxx)
    P = s - float(params.K) - phi
    return phi, px, P, Q


def spectrum_check(params: ModelParams, sigma, n: int = 2000, L: Optional[float] = None,
                   n_eigs: int = 6, zero_rtol: float = 1e-4) -> SpectrumSummary:
    """Second-order symmetric finite differences of
    H v = -(P v_x)_x + Q v on [-L, L] with v(+-L) = 0.

    The translation mode phi_x lies in the kernel; after discretisation its
    eigenvalue is O(dx^2) with either sign.  Eigenvalues with
    |lambda| <= zero_rtol * sup|Q| are therefore treated as zero, and
    ``negative_count`` counts only those below -zero_rtol * sup|Q|
    (``raw_negative_count`` keeps the plain count).
    """
    sigma = as_fraction(sigma)
    sh = WaveShape(params, sigma)
    if L is None:
        L = float(sh.xi_of_phi(np.array([1e-7 * sh.H]))[0])
    h = 2.0 * L / (n + 1)
    x = -L + h * np.arange(1, n + 1)
    xm = -L + h * (np.arange(0, n + 1) + 0.5)  # midpoints
    phi, px, P, Q = operator_coefficients(params, sigma, x, sh)
    _, _, Pm, _ = operator_coefficients(params, sigma, xm, sh)
    P_min = float(min(P.min(), Pm.min()))
    if P_min <= 0:
        raise ModelError(f"P = sigma - K - phi reaches {P_min:.3g} <= 0: operator not elliptic")
    diag = (Pm[:-1] + Pm[1:]) / h ** 2 + Q
    off = -Pm[1:-1] / h ** 2
    k = min(n_eigs, n) - 1
    vals, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, k))
    if np.all(vals < 0):  # more negatives than requested: use the full spectrum
        vals_all = eigh_tridiagonal(diag, off, eigvals_only=True)
    else:
        vals_all = vals
    Q_sup = float(np.max(np.abs(Q)))
    tol = zero_rtol * Q_sup
    raw_neg = int(np.sum(vals_all < 0))
    neg = int(np.sum(vals_all < -tol))
    iz = int(np.argmin(np.abs(vals)))
    v = vecs[:, iz]
    cos = float(abs(v @ px) / (np.linalg.norm(v) * np.linalg.norm(px)))
    _, _, _, Qb = operator_coefficients(params, sigma, np.array([L]), sh)
    return SpectrumSummary(
        n=n,
        L=L,
        negative_count=neg,
        raw_negative_count=raw_neg,
        zero_tol=tol,
        lowest=[float(v) for v in vals],
        nearest_zero=float(vals[iz]),
        Q_sup=Q_sup,
        nearest_zero_ratio=float(abs(vals[iz]) / Q_sup),
        cosine_with_phi_x=cos,
        Q_boundary=float(Qb[0]),
        sigma_minus_c=float(sigma - params.c),
        P_min=P_min,
    )


# ---------------------------------------------------------------------------
# N against finite differences of f(z, H)


def N_fd_check(params: ModelParams, H_max: float, n_points: int = 50, seed: int = 0,
               rel_step: float = 1e-3) -> dict:
    """Compare d_H f with f = H^2 z (S + Y) / sqrt(S Y) against
    H^2 z (z - 1) N / (S Y)^{3/2} at random interior (z, H).

    Points with S Y <= 0 near the sampled (z, H) are redrawn; H_max should
    lie inside the amplitude range of the chosen c.
    """
    rng = np.random.default_rng(seed)
    N = _NIntegral.evaluator(params)
    A, B, K, c = (float(v) for v in (params.A, params.B, params.K, params.c))

    def SY(z, H):
        S = A * H ** 3 * (z ** 3 - 1) + B * H ** 2 * (z ** 2 - 1) + H * (z - 1)
        Y = H * (z - 1) - A * H ** 3 - B * H ** 2 - c + K
        return S, Y

    def f(z, H):
        S, Y = SY(z, H)
        return H * H * z * (S + Y) / math.sqrt(S * Y)

    rows = []
    attempts = 0
    while len(rows) < n_points:
        attempts += 1
        if attempts > 100 * n_points:
            raise ModelError("could not draw enough points with S Y > 0")
        z = float(rng.uniform(0.02, 0.98))
        H = float(rng.uniform(0.02, 1.0)) * H_max
        S0, Y0 = SY(z, H)
        h = rel_step * min(H, abs(S0), abs(Y0))  # stay well away from S Y = 0
        if min(np.prod(SY(z, H + k * h)) for k in (-2, -1, 1, 2)) <= 0:
            continue
        # fourth-order central stencil
        fd = (8 * (f(z, H + h) - f(z, H - h)) - (f(z, H + 2 * h) - f(z, H - 2 * h))) / (12 * h)
        analytic = H * H * z * (z - 1) * float(N(z, H)) / (S0 * Y0) ** 1.5
        rows.append({"z": z, "H": H, "fd": fd, "analytic": analytic, "rel": _rel(fd, analytic)})
    worst = max(r["rel"] for r in rows)
    return {"points": rows, "max_rel": worst, "n": len(rows)}
