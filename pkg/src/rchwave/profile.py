"""Solitary-wave profiles, conserved quantities and residual checks.

The first integral gives phi_x^2 = phi^2 g(phi) with g = S / Y, positive on
(0, H).  Writing S = (phi - H) Q(phi) isolates the simple zero at the crest,
so g = (H - phi) r(phi) with r = -Q / Y smooth and positive on [0, H].

Only the half-profile xi >= 0 is stored; the wave is even about the crest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from .model import ModelError, ModelParams, S_poly, Y_poly, amplitude
from .ratpoly import as_fraction

# Gauss-Legendre nodes on [0, 1]
_GL_X, _GL_W = np.polynomial.legendre.leggauss(48)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


class WaveShape:
    """Float helpers for S, Y, g and r at fixed (c, sigma)."""

    def __init__(self, params: ModelParams, sigma, H: Optional[float] = None):
        self.params = params
        self.sigma = as_fraction(sigma)
        self.H = amplitude(params, self.sigma).H if H is None else H
        S = S_poly(params, self.sigma)
        self.s = [float(S[k]) for k in range(4)]
        self.y0 = float(params.K - self.sigma)
        A, B, H = self.s[3], self.s[2], self.H
        # S = (phi - H) (A phi^2 + q1 phi + q0)
        self.q = (1.0 + B * H + A * H * H, B + A * H, A)
        self.lam0 = math.sqrt(self.s[0] / self.y0) if self.H > 0 else 0.0

    def S(self, phi):
        s = self.s
        return s[0] + phi * (s[1] + phi * (s[2] + phi * s[3]))

    def dS(self, phi):
        s = self.s
        return s[1] + phi * (2.0 * s[2] + 3.0 * phi * s[3])

    def Y(self, phi):
        return phi + self.y0

    def g(self, phi):
        return self.S(phi) / self.Y(phi)

    def r(self, phi):
        q0, q1, q2 = self.q
        return -(q0 + phi * (q1 + phi * q2)) / self.Y(phi)

    def phi_x(self, phi):
        """phi_x on the right half (xi > 0), where the wave decreases."""
        return -phi * np.sqrt(np.maximum(self.g(phi), 0.0))

    def phi_xx(self, phi):
        """(1/2) d/dphi [phi^2 S / Y]."""
        S, Y = self.S(phi), self.Y(phi)
        return 0.5 * (2.0 * phi * S / Y + phi * phi * (self.dS(phi) * Y - S) / (Y * Y))

    # -- inverse profile --------------------------------------------------
    def xi_crest(self, phi):
        """xi(phi) for phi in [H/2, H]: 2 sqrt(H - phi) int_0^1 dt / (psi sqrt(r(psi)))."""
        phi = np.atleast_1d(np.asarray(phi, dtype=float))
        s = np.sqrt(np.maximum(self.H - phi, 0.0))
        psi = self.H - (s[:, None] * _GL_X[None, :]) ** 2
        vals = 1.0 / (psi * np.sqrt(self.r(psi)))
        return 2.0 * s * (vals @ _GL_W)

    def xi_tail(self, phi, phi_m):
        """int_phi^phi_m dpsi / (psi sqrt(g)) in u = ln psi, composite panels."""
        phi = np.atleast_1d(np.asarray(phi, dtype=float))
        u0 = np.log(phi)
        u1 = math.log(phi_m)
        span = u1 - u0
        panels = max(1, int(math.ceil(np.max(span) / 0.5)))
        total = np.zeros_like(phi)
        for k in range(panels):
            a = u0 + span * k / panels
            b = u0 + span * (k + 1) / panels
            u = a[:, None] + (b - a)[:, None] * _GL_X[None, :]
            vals = 1.0 / np.sqrt(self.g(np.exp(u)))
            total += (b - a) * (vals @ _GL_W)
        return total

    def xi_of_phi(self, phi):
        phi = np.atleast_1d(np.asarray(phi, dtype=float))
        phi_m = 0.5 * self.H
        out = np.empty_like(phi)
        hi = phi >= phi_m
        out[hi] = self.xi_crest(phi[hi])
        if np.any(~hi):
            out[~hi] = self.xi_crest(np.array([phi_m]))[0] + self.xi_tail(phi[~hi], phi_m)
        return out

    def phi_of_xi(self, xi, floor: float) -> np.ndarray:
        """Invert xi(phi) by Newton: in s = sqrt(H - phi) near the crest,
        in u = ln(phi) in the tail.  Both parametrisations are smooth."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        H = self.H
        phi_m = 0.5 * H
        xi_m = self.xi_crest(np.array([phi_m]))[0]
        out = np.empty_like(xi)
        crest = xi <= xi_m
        if np.any(crest):
            t = xi[crest]
            r_h = self.r(H)
            s = t * H * math.sqrt(r_h) / 2.0  # xi ~ 2 s / (H sqrt(r(H)))
            s = np.clip(s, 0.0, math.sqrt(H - phi_m))
            for _ in range(60):
                phi = H - s * s
                f = self.xi_crest(phi) - t
                ds = f / (2.0 / (phi * np.sqrt(self.r(phi))))
                s = np.clip(s - ds, 0.0, math.sqrt(H))
                if np.max(np.abs(ds)) <= 1e-14 * math.sqrt(H):
                    break
            out[crest] = H - s * s
        if np.any(~crest):
            t = xi[~crest]
            u = math.log(phi_m) - self.lam0 * (t - xi_m)
            u_floor = math.log(floor) - 5.0
            for _ in range(60):
                phi = np.exp(u)
                f = xi_m + self.xi_tail(phi, phi_m) - t
                du = f * np.sqrt(self.g(phi))  # d xi / du = -1/sqrt(g)
                u = np.clip(u + du, u_floor, math.log(phi_m))
                if np.max(np.abs(du)) <= 1e-13:
                    break
            out[~crest] = np.exp(u)
        return out


@dataclass
class WaveProfile:
    sigma: Fraction
    H: float
    xi: np.ndarray
    phi: np.ndarray
    phi_x: np.ndarray
    params: ModelParams
    delta: float = 1e-8
    method: str = "quadrature"
    meta: dict = field(default_factory=dict)

    @property
    def values(self) -> np.ndarray:
        return self.phi

    @property
    def grid(self) -> np.ndarray:
        return self.xi

    @property
    def decay_rate(self) -> float:
        return decay_rate(self)

    def shape(self) -> WaveShape:
        return WaveShape(self.params, self.sigma, self.H)

    def full(self) -> tuple:
        """Even extension onto [-L, L]: (xi, phi, phi_x)."""
        xi = np.concatenate([-self.xi[:0:-1], self.xi])
        phi = np.concatenate([self.phi[:0:-1], self.phi])
        px = np.concatenate([-self.phi_x[:0:-1], self.phi_x])
        return xi, phi, px

    def with_values(self, phi: np.ndarray, method: str = "modified") -> "WaveProfile":
        """Same grid with replaced values; phi_x recomputed from the first integral."""
        sh = self.shape() if self.H > 0 else None
        px = sh.phi_x(phi) if sh else np.zeros_like(phi)
        return WaveProfile(self.sigma, self.H, self.xi.copy(), np.asarray(phi, float), px,
                           self.params, self.delta, method, dict(self.meta))


@dataclass(frozen=True)
class GridSpec:
    """Uniform half-grid 0, dx, 2 dx, ... up to L (default: where phi = delta H)."""

    dx: float = 0.02
    L: Optional[float] = None
    delta: float = 1e-8


def _zero_profile(params, sigma, spec: GridSpec, method: str) -> WaveProfile:
    z = np.zeros(1)
    return WaveProfile(as_fraction(sigma), 0.0, z.copy(), z.copy(), z.copy(), params, spec.delta, method)


def _grid(shape: WaveShape, spec: GridSpec) -> np.ndarray:
    L_max = float(shape.xi_of_phi(np.array([spec.delta * shape.H]))[0])
    L = L_max if spec.L is None else min(spec.L, L_max)
    if L < spec.dx:
        return np.zeros(1)
    n = int(math.floor(L / spec.dx + 1e-9))
    return spec.dx * np.arange(n + 1)


def _check_signs(shape: WaveShape, delta: float) -> None:
    probe = shape.H * np.concatenate([np.geomspace(delta, 0.5, 200), np.linspace(0.5, 1.0, 201)[1:-1]])
    if np.any(shape.S(probe) * shape.Y(probe) <= 0):
        raise ModelError("S Y <= 0 inside (delta H, H): sign regime violated")


def profile_from_quadrature(params: ModelParams, sigma, spec: GridSpec = GridSpec()) -> WaveProfile:
    """Profile from the inverse map xi(phi) = int_phi^H dpsi / (psi sqrt(S/Y))."""
    sigma = as_fraction(sigma)
    if sigma == params.c:
        return _zero_profile(params, sigma, spec, "quadrature")
    shape = WaveShape(params, sigma)
    _check_signs(shape, spec.delta)
    xi = _grid(shape, spec)
    phi = shape.phi_of_xi(xi, spec.delta * shape.H)
    phi[0] = shape.H
    return WaveProfile(sigma, shape.H, xi, phi, shape.phi_x(phi), params, spec.delta, "quadrature",
                       {"L": float(xi[-1]), "dx": spec.dx})


def crest_curvature(params: ModelParams, sigma, H: Optional[float] = None) -> float:
    """phi''(0) = P(H) / (H - sigma + K), from the travelling-wave ODE with phi_x = 0."""
    shape = WaveShape(params, sigma, H)
    a = params.alpha
    Hh = shape.H
    s = float(params.c - shape.sigma)
    P = s * Hh + 1.5 * Hh ** 2 + float(params.w1 / (3 * a * a)) * Hh ** 3 + float(params.w2 / (4 * a ** 3)) * Hh ** 4
    return P / shape.Y(Hh)


def profile_from_ode(
    params: ModelParams, sigma, spec: GridSpec = GridSpec(), rtol: float = 1e-12, atol: float = 1e-16
) -> WaveProfile:
    """Profile by integrating from the crest.

    dphi/dxi = -phi sqrt(S/Y) is not Lipschitz at the crest, so the first
    stretch uses the planar system (phi, zeta) started at (H, 0); once
    phi <= H/2 the scalar equation takes over and carries the tail, where it
    is stable (the planar system would drift off the stable manifold).
    """
    sigma = as_fraction(sigma)
    if sigma == params.c:
        return _zero_profile(params, sigma, spec, "ode")
    shape = WaveShape(params, sigma)
    _check_signs(shape, spec.delta)
    xi = _grid(shape, spec)
    H = shape.H
    shift = float(sigma - params.K)
    a = params.alpha
    p1 = float(params.c - sigma)
    p3 = float(params.w1 / (3 * a * a))
    p4 = float(params.w2 / (4 * a ** 3))

    def planar(_x, y):
        phi, zeta = y
        P = phi * (p1 + phi * (1.5 + phi * (p3 + phi * p4)))
        return [zeta, (P - 0.5 * zeta * zeta) / (phi - shift)]

    def half(_x, y):
        return y[0] - 0.5 * H

    half.terminal = True
    half.direction = -1
    L = xi[-1] if xi.size > 1 else 0.0
    first = solve_ivp(planar, (0.0, max(L, 1.0) + 50.0), [H, 0.0], method="DOP853",
                      rtol=rtol, atol=atol, dense_output=True, events=[half])
    if not first.t_events[0].size:
        raise ModelError("planar crest integration never reached phi = H/2")
    x_m = first.t_events[0][0]
    phi = np.empty_like(xi)
    m = xi <= x_m
    phi[m] = first.sol(xi[m])[0]
    if np.any(~m):
        def scalar(_x, y):
            return [-y[0] * math.sqrt(max(shape.g(y[0]), 0.0))]

        second = solve_ivp(scalar, (x_m, xi[-1]), [0.5 * H], method="DOP853", rtol=rtol,
                           atol=atol * 1e-6, t_eval=xi[~m])
        if not second.success:
            raise ModelError(f"tail integration failed: {second.message}")
        phi[~m] = second.y[0]
    phi[0] = H
    return WaveProfile(sigma, H, xi, phi, shape.phi_x(phi), params, spec.delta, "ode",
                       {"L": float(xi[-1]), "dx": spec.dx, "switch_xi": float(x_m)})


# ---------------------------------------------------------------------------
# Diagnostics


def decay_rate(profile: WaveProfile, window: tuple = (1e-6, 1e-2)) -> float:
    """Least-squares slope of -log(phi) against xi where phi/H lies in ``window``."""
    if profile.H == 0:
        raise ModelError("zero profile has no tail")
    ratio = profile.phi / profile.H
    m = (ratio >= window[0]) & (ratio <= window[1])
    if np.count_nonzero(m) < 5:
        raise ModelError("insufficient tail samples for a decay fit")
    slope, _ = np.polyfit(profile.xi[m], np.log(profile.phi[m]), 1)
    return float(-slope)


def _trapz_even(f: np.ndarray, dx: float) -> float:
    """Integral of an even function over [-L, L] from its half-grid samples."""
    return float(dx * (2.0 * np.sum(f) - f[0]))


@dataclass(frozen=True)
class Conserved:
    I: float
    E: float
    F: float
    tail_bound: float


def conserved_quantities(profile: WaveProfile) -> Conserved:
    """I = int u, E = 1/2 int (u^2 + u_x^2),
    F = 1/2 int (c u^2 + u^3 + K u_x^2 + w1/(6 a^2) u^4 + w2/(10 a^3) u^5 + u u_x^2).

    Trapezoid sums over the even extension (spectrally accurate for smooth
    decaying integrands) plus an exponential-tail correction beyond L, whose
    size is returned as ``tail_bound``.
    """
    if profile.H == 0:
        return Conserved(0.0, 0.0, 0.0, 0.0)
    p = profile.params
    u, ux = profile.phi, profile.phi_x
    if profile.xi.size < 2:
        raise ModelError("profile grid too coarse for quadrature")
    dx = float(profile.xi[1] - profile.xi[0])
    a = p.alpha
    c, K = float(p.c), float(p.K)
    b4, b5 = float(p.w1 / (6 * a * a)), float(p.w2 / (10 * a ** 3))
    fI = u
    fE = 0.5 * (u * u + ux * ux)
    fF = 0.5 * (c * u * u + u ** 3 + K * ux * ux + b4 * u ** 4 + b5 * u ** 5 + u * ux * ux)
    lam = profile.shape().lam0
    uL = float(u[-1])
    # beyond L: u ~ uL exp(-lam (x - L)), u_x ~ -lam u; two tails
    tI = 2.0 * uL / lam
    tE = 2.0 * 0.5 * (1.0 + lam * lam) * uL * uL / (2.0 * lam)
    tF = 2.0 * 0.5 * (c + K * lam * lam) * uL * uL / (2.0 * lam)
    I = _trapz_even(fI, dx) + tI
    E = _trapz_even(fE, dx) + tE
    F = _trapz_even(fF, dx) + tF
    return Conserved(I, E, F, float(max(abs(tI), abs(tE), abs(tF))))


def ode_residual(profile: WaveProfile) -> float:
    """Consistency of sampled values with the travelling-wave equation.

    Two parts, the larger is returned:

    * the once-integrated equation
      (c - s) u + 3/2 u^2 + w1/(3a^2) u^3 + w2/(4a^3) u^4 + (s - K) u_xx - u_x^2/2 - u u_xx
      with u_x, u_xx from the first integral, relative to the coefficient scale;
    * a one-step check between neighbouring samples: a classical RK4 step of
      the planar system from (u_i, u_x(u_i)) must land on u_{i+1}
      (relative to H).  Values that do not come from a solution fail here
      even though the algebraic part is an identity in u.
    """
    if profile.H == 0:
        return float(np.max(np.abs(profile.phi))) if profile.phi.size else 0.0
    p = profile.params
    sh = profile.shape()
    u = profile.phi
    ux = sh.phi_x(u)
    uxx = sh.phi_xx(u)
    a = p.alpha
    s = float(profile.sigma)
    coef = [float(p.c) - s, 1.5, float(p.w1 / (3 * a * a)), float(p.w2 / (4 * a ** 3)), s - float(p.K)]
    scale = max(abs(v) for v in coef) * max(1.0, profile.H)
    res = (coef[0] * u + coef[1] * u ** 2 + coef[2] * u ** 3 + coef[3] * u ** 4
           + coef[4] * uxx - 0.5 * ux * ux - u * uxx)
    alg = float(np.max(np.abs(res[1:-1]))) / scale if u.size > 2 else 0.0
    if u.size < 2:
        return alg
    h = float(profile.xi[1] - profile.xi[0])
    shift = s - float(p.K)

    def f(phi, zeta):
        P = phi * (coef[0] + phi * (1.5 + phi * (coef[2] + phi * coef[3])))
        return zeta, (P - 0.5 * zeta * zeta) / (phi - shift)

    y0, z0 = u[:-1], ux[:-1]
    k1 = f(y0, z0)
    k2 = f(y0 + 0.5 * h * k1[0], z0 + 0.5 * h * k1[1])
    k3 = f(y0 + 0.5 * h * k2[0], z0 + 0.5 * h * k2[1])
    k4 = f(y0 + h * k3[0], z0 + h * k3[1])
    y1 = y0 + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
    step = float(np.max(np.abs(y1 - u[1:]))) / profile.H
    return max(alg, step)


def first_integral_defect(profile: WaveProfile) -> float:
    """max |phi_x^2 - phi^2 S/Y| over the grid."""
    sh = profile.shape() if profile.H else None
    if sh is None:
        return 0.0
    u = profile.phi
    return float(np.max(np.abs(profile.phi_x ** 2 - u * u * sh.g(u))))
