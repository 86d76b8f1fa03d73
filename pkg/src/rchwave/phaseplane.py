"""Critical points, orbits and the homoclinic loop of the travelling-wave system.

The planar system in (phi, zeta = phi') is

    phi'  = zeta
    zeta' = (P(phi) - zeta^2 / 2) / (phi - sigma + K),     P = phi T(phi),

with first integral  Phi = V(phi) + (sigma - K - phi) zeta^2 / 2,  V' = P.
Integration uses scipy's DOP853 with event location on the dense output.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .model import ModelError, ModelParams, amplitude, cubic_T, P_poly, V_poly
from .ratpoly import as_fraction, cardano_real_root


class SingularLineError(ModelError):
    """The state is too close to phi = sigma - K where the field blows up."""


class CriticalKind(str, enum.Enum):
    SADDLE = "Saddle"
    CENTER = "Center"
    DEGENERATE_MERGE = "DegenerateMerge"


@dataclass(frozen=True)
class CriticalPoint:
    phi: float
    zeta: float
    J_sigma: float
    eigenvalues: tuple
    kind: CriticalKind
    exact_phi: Optional[Fraction] = None

    @property
    def location(self) -> tuple:
        return (self.phi, self.zeta)


@dataclass(frozen=True)
class Controls:
    rtol: float = 1e-12
    atol: float = 1e-15
    xi_max: float = 400.0
    escape_radius: float = 50.0
    guard: float = 1e-9
    max_step: float = np.inf


@dataclass
class Orbit:
    xi: np.ndarray
    phi: np.ndarray
    zeta: np.ndarray
    closure_defect: float = float("nan")
    energy_defect: float = float("nan")
    status: str = "ok"
    turning_point: Optional[float] = None
    events: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    @property
    def samples(self) -> np.ndarray:
        return np.column_stack([self.xi, self.phi, self.zeta])


class _Field:
    """Float coefficients of the planar field for fast scalar evaluation."""

    def __init__(self, params: ModelParams, sigma):
        sigma = as_fraction(sigma)
        self.params = params
        self.sigma = sigma
        a = params.alpha
        self.p1 = float(params.c - sigma)
        self.p3 = float(params.w1 / (3 * a * a))
        self.p4 = float(params.w2 / (4 * a ** 3))
        self.shift = float(sigma - params.K)  # singular line phi = shift
        v = V_poly(params, sigma)
        self.v = [float(v[k]) for k in range(6)]

    def P(self, phi):
        return phi * (self.p1 + phi * (1.5 + phi * (self.p3 + phi * self.p4)))

    def V(self, phi):
        v = self.v
        return phi * phi * (v[2] + phi * (v[3] + phi * (v[4] + phi * v[5])))

    def energy(self, phi, zeta):
        return self.V(phi) + 0.5 * (self.shift - phi) * zeta * zeta

    def rhs(self, _xi, y):
        phi, zeta = y
        return [zeta, (self.P(phi) - 0.5 * zeta * zeta) / (phi - self.shift)]


def vector_field(params: ModelParams, sigma, state, guard: float = 1e-9) -> tuple:
    """(dphi, dzeta) at ``state``; exact when the state is rational."""
    phi, zeta = state
    sigma = as_fraction(sigma)
    shift = sigma - params.K
    if isinstance(phi, (int, Fraction)) and isinstance(zeta, (int, Fraction)):
        den = Fraction(phi) - shift
        if den == 0:
            raise SingularLineError("state lies on the singular line")
        return Fraction(zeta), (P_poly(params, sigma)(Fraction(phi)) - Fraction(zeta) ** 2 / 2) / den
    f = _Field(params, sigma)
    if abs(phi - f.shift) <= guard * max(abs(f.shift), 1e-300):
        raise SingularLineError(f"|phi - (sigma - K)| below guard at phi = {phi}")
    d = f.rhs(0.0, (float(phi), float(zeta)))
    return d[0], d[1]


def _eigen(J: float) -> tuple:
    r = cmath.sqrt(J)
    return (r, -r)


def _classify(J) -> CriticalKind:
    if J > 0:
        return CriticalKind.SADDLE
    if J < 0:
        return CriticalKind.CENTER
    return CriticalKind.DEGENERATE_MERGE


def T_real_roots(params: ModelParams, sigma) -> list:
    """Real roots of T, by Cardano when cubic and directly otherwise."""
    T = cubic_T(params, sigma)
    if T.degree == 3:
        return list(cardano_real_root(*(float(v) for v in reversed(T.coeffs))))
    if T.degree == 2:
        a, b, c = float(T[2]), float(T[1]), float(T[0])
        disc = b * b - 4 * a * c
        if disc < 0:
            return []
        q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
        roots = [q / a] + ([c / q] if q != 0 else [])
        return sorted(roots)
    if T.degree == 1:
        return [float(-T[0] / T[1])]
    return []


def critical_points(params: ModelParams, sigma) -> list:
    """N0 = (0, 0) followed by the points (phi_s, 0) with T(phi_s) = 0.

    When sigma = c the point on the phi-axis merges with N0 and a single
    DegenerateMerge point is returned.
    """
    sigma = as_fraction(sigma)
    if sigma == params.c:
        return [CriticalPoint(0.0, 0.0, 0.0, (0j, 0j), CriticalKind.DEGENERATE_MERGE, Fraction(0))]
    shift = sigma - params.K
    if shift == 0:
        raise SingularLineError("sigma = K puts the origin on the singular line")
    J0 = (sigma - params.c) / shift
    out = [CriticalPoint(0.0, 0.0, float(J0), _eigen(float(J0)), _classify(J0), Fraction(0))]
    T = cubic_T(params, sigma)
    dT = T.derivative()
    exact = -T[0] / T[1] if T.degree == 1 else None
    for r in T_real_roots(params, sigma):
        den = r - float(shift)
        if den == 0.0:
            continue
        if exact is not None:
            J = exact * dT(exact) / (exact - shift)
            out.append(CriticalPoint(float(exact), 0.0, float(J), _eigen(float(J)), _classify(J), exact))
        else:
            J = r * dT.eval_float(r) / den
            out.append(CriticalPoint(r, 0.0, J, _eigen(J), _classify(J)))
    return out


def center_point(params: ModelParams, sigma) -> CriticalPoint:
    """The critical point strictly between 0 and the amplitude H."""
    H = amplitude(params, sigma).H
    for cp in critical_points(params, sigma)[1:]:
        if 0 < cp.phi < H:
            return cp
    raise ModelError("no critical point inside (0, H)")


# ---------------------------------------------------------------------------
# Integration


def integrate_orbit(
    params: ModelParams,
    sigma,
    start: Sequence[float],
    direction: int = 1,
    controls: Controls = Controls(),
    stop_at_zeta_crossings: Optional[int] = None,
    crossing_direction: int = 0,
    xi_span: Optional[float] = None,
    n_samples: int = 2001,
) -> Orbit:
    """Integrate from ``start`` forward (direction=1) or backward (-1) in xi.

    Stops at the singular-line guard, at the escape radius, at ``xi_span`` or
    ``controls.xi_max``, at the first phi sign change, or after the given
    number of zeta = 0 crossings.  The status string names the stop reason.
    """
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    f = _Field(params, sigma)
    phi0, zeta0 = float(start[0]), float(start[1])
    band = controls.guard * max(abs(f.shift), 1e-300)
    if abs(phi0 - f.shift) <= band:
        raise SingularLineError("start lies within the singular-line guard band")
    span = controls.xi_max if xi_span is None else xi_span

    def singular(_x, y):
        return abs(y[0] - f.shift) - band

    singular.terminal = True

    def escape(_x, y):
        return controls.escape_radius - math.hypot(y[0], y[1])

    escape.terminal = True

    def zeta_zero(_x, y):
        return y[1]

    zeta_zero.terminal = stop_at_zeta_crossings if stop_at_zeta_crossings else False
    zeta_zero.direction = crossing_direction * direction

    def phi_zero(_x, y):
        return y[0]

    phi_zero.terminal = phi0 != 0.0

    sol = solve_ivp(
        f.rhs,
        (0.0, direction * span),
        [phi0, zeta0],
        method="DOP853",
        rtol=controls.rtol,
        atol=controls.atol,
        dense_output=True,
        events=[singular, escape, zeta_zero, phi_zero],
        max_step=controls.max_step,
    )
    if sol.status == -1:
        status = "step_failure"
    elif sol.t_events[0].size:
        status = "singular_line"
    elif sol.t_events[1].size:
        status = "escape"
    elif stop_at_zeta_crossings and sol.t_events[2].size >= stop_at_zeta_crossings:
        status = "zeta_crossing"
    elif phi_zero.terminal and sol.t_events[3].size:
        status = "phi_crossing"
    else:
        status = "span_end"
    t_end = sol.t[-1]
    xs = np.linspace(0.0, t_end, n_samples)
    ys = sol.sol(xs)
    xs[-1], ys[:, -1] = t_end, sol.y[:, -1]
    e0 = f.energy(phi0, zeta0)
    energy = f.energy(ys[0], ys[1])
    orb = Orbit(
        xi=xs,
        phi=ys[0],
        zeta=ys[1],
        energy_defect=float(np.max(np.abs(energy - e0))),
        status=status,
        events={
            "zeta_zero": [(float(t), float(y[0])) for t, y in zip(sol.t_events[2], sol.y_events[2])],
            "phi_zero": [float(t) for t in sol.t_events[3]],
        },
        info={"nfev": int(sol.nfev), "message": sol.message},
    )
    if direction == -1:
        # keep samples ordered by increasing xi
        orb.xi, orb.phi, orb.zeta = orb.xi[::-1], orb.phi[::-1], orb.zeta[::-1]
    return orb


def default_eps(H: float) -> float:
    return 1e-6 * max(1.0, H)


def homoclinic_orbit(
    params: ModelParams,
    sigma,
    eps: Optional[float] = None,
    controls: Controls = Controls(),
    turning_tol: float = 1e-8,
    n_samples: int = 2001,
) -> Orbit:
    """Shoot along the unstable direction of the saddle at the origin.

    The forward leg stops where zeta changes sign; the field is reversible
    (zeta -> -zeta, xi -> -xi), so the returning half is the mirror image.
    As an independent check the return leg is also integrated from the
    turning point for the same xi-span; ``closure_defect`` is the distance
    between its end and the mirrored launch point.
    """
    sigma = as_fraction(sigma)
    amp = amplitude(params, sigma)
    H = amp.H
    cps = critical_points(params, sigma)
    J0 = cps[0].J_sigma
    if not J0 > 0:
        raise ModelError(f"origin is not a saddle (J = {J0:.6g}); no homoclinic loop from N0")
    lam = math.sqrt(J0)
    eps = default_eps(H) if eps is None else eps
    norm = math.hypot(1.0, lam)
    start = (eps / norm, eps * lam / norm)
    fwd = integrate_orbit(
        params, sigma, start, 1, controls, stop_at_zeta_crossings=1, crossing_direction=-1, n_samples=n_samples
    )
    if fwd.status != "zeta_crossing":
        raise ModelError(f"no zeta = 0 crossing before stopping ({fwd.status})")
    xi_turn, phi_turn = fwd.events["zeta_zero"][0]
    back = integrate_orbit(
        params, sigma, (phi_turn, 0.0), 1, controls, xi_span=xi_turn, n_samples=n_samples
    )
    end = np.array([back.phi[-1], back.zeta[-1]])
    closure = float(np.hypot(*(end - np.array([start[0], -start[1]]))))
    xi = np.concatenate([fwd.xi, 2 * xi_turn - fwd.xi[-2::-1]])
    phi = np.concatenate([fwd.phi, fwd.phi[-2::-1]])
    zeta = np.concatenate([fwd.zeta, -fwd.zeta[-2::-1]])
    rel = abs(phi_turn - H) / H if H else abs(phi_turn)
    orb = Orbit(
        xi=xi,
        phi=phi,
        zeta=zeta,
        closure_defect=closure,
        energy_defect=max(fwd.energy_defect, back.energy_defect),
        status="homoclinic",
        turning_point=phi_turn,
        events={"xi_turn": xi_turn},
        info={
            "H": H,
            "turning_rel_error": rel,
            "eps": eps,
            "lambda0": lam,
            "launch": start,
            "return_endpoint": tuple(float(v) for v in end),
            "endpoint_distance_to_origin": float(np.hypot(*end)),
        },
    )
    if rel > turning_tol:
        orb.status = "turning_point_mismatch"
        raise ModelError(f"turning point {phi_turn:.17g} differs from H = {H:.17g} (rel {rel:.3g})")
    return orb


def portrait_sample(
    params: ModelParams,
    sigma,
    seeds: Sequence[Sequence[float]],
    xi_span: float = 30.0,
    controls: Controls = Controls(rtol=1e-10, atol=1e-13),
    n_samples: int = 801,
) -> list:
    """Orbits through each seed, integrated both ways for a bounded xi-span.

    Failures (e.g. a seed on the singular line) are recorded in the orbit
    status rather than raised.  Closed orbits stop after two zeta crossings
    in each direction (one full loop).
    """
    out = []
    for seed in seeds:
        try:
            back = integrate_orbit(
                params, sigma, seed, -1, controls, xi_span=xi_span, n_samples=n_samples,
                stop_at_zeta_crossings=None,
            )
            fwd = integrate_orbit(
                params, sigma, seed, 1, controls, xi_span=xi_span, n_samples=n_samples,
                stop_at_zeta_crossings=None,
            )
        except SingularLineError as exc:
            out.append(Orbit(np.empty(0), np.empty(0), np.empty(0), status=f"failed: {exc}"))
            continue
        orb = Orbit(
            xi=np.concatenate([back.xi[:-1], fwd.xi]),
            phi=np.concatenate([back.phi[:-1], fwd.phi]),
            zeta=np.concatenate([back.zeta[:-1], fwd.zeta]),
            energy_defect=max(back.energy_defect, fwd.energy_defect),
            status=f"{back.status}|{fwd.status}",
            info={"seed": tuple(float(s) for s in seed)},
        )
        out.append(orb)
    return out


def first_integral(params: ModelParams, sigma, phi, zeta):
    """Phi(phi, zeta) = V(phi) + (sigma - K - phi) zeta^2 / 2 (float)."""
    return _Field(params, sigma).energy(phi, zeta)
