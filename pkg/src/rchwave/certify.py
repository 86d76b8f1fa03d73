"""Exact certification that G_b(x) > 0 for all real x and b in a range.

Three conditions are sufficient:

(i)   G_{b0}(x) > 0 on the reals for one b0 in the range (Sturm count);
(ii)  the discriminant of G_b in x has no real root b in the range, so the
      number of real roots of G_b cannot change across the range;
(iii) the leading coefficient g_n(b) stays positive on the range, so no
      root escapes through infinity.

When G_b is even in x, G_b(x) = q_b(x^2) and

    Disc_x G_b = (-4)^m a_m q_b(0) Disc_w(q_b)^2,

with m = deg q and a_m = g_n.  Condition (ii) is then checked on the three
smaller factors, which is exact and much cheaper than a Sturm chain for the
full discriminant.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .model import ModelParams, RegimeTag, params_from_c, regime_classify
from .npoly import N_float_evaluator, build_Gb, derive_N
from .ratpoly import (
    ParamPoly,
    Poly,
    as_fraction,
    count_real_roots,
    is_positive_on_reals,
    isolate_and_refine,
    param_resultant_in_b,
    rat_to_str,
    sturm_chain,
)

CERTIFIED = "Certified"
REFUTED = "Refuted"
INCONCLUSIVE = "Inconclusive"

DEFAULT_SWEEP = tuple(Fraction(n, 10) for n in (4, 6, 9, 12, 16, 20))
DEFAULT_H_MAX = Fraction(4)


@dataclass
class CertificationResult:
    c: Optional[Fraction]
    b_interval: object  # (lo, hi) with lo exclusive and hi inclusive, or "R"
    cond_i: dict
    cond_ii: dict
    cond_iii: dict
    overall: dict
    timings: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return self.overall["verdict"]

    def as_dict(self) -> dict:
        d = asdict(self)
        d["c"] = None if self.c is None else rat_to_str(self.c)
        if isinstance(self.b_interval, tuple):
            d["b_interval"] = [None if v is None else rat_to_str(v) for v in self.b_interval]
        return d


# ---------------------------------------------------------------------------
# helpers on ranges


def _range(b_range) -> tuple:
    if b_range is None or b_range == "R":
        return None, None
    lo, hi = b_range
    return (None if lo is None else as_fraction(lo)), (None if hi is None else as_fraction(hi))


def _in_range(b: Fraction, lo, hi) -> bool:
    return (lo is None or b > lo) and (hi is None or b <= hi)


def _positive_on_range(p: Poly, lo, hi) -> dict:
    """p > 0 on (lo, hi]: no roots there and positive at one interior point."""
    if p.degree <= 0:
        return {"roots_in_range": 0, "verdict": p.lc > 0}
    if lo is None and hi is None:
        ok = is_positive_on_reals(p)
        return {"roots_in_range": count_real_roots(p), "verdict": ok}
    n = count_real_roots(p, lo, hi)
    if lo is None:
        sample = hi - 1
    elif hi is None:
        sample = lo + 1
    else:
        sample = (lo + hi) / 2
    return {"roots_in_range": n, "verdict": n == 0 and p.sign_at(sample) > 0}


def _approx_roots(p: Poly, lo, hi, width=Fraction(1, 2 ** 30)) -> list:
    """Float locations of the distinct real roots of p in (lo, hi]."""
    if p.degree <= 0:
        return []
    k = p.trailing_zero_order()
    out = [0.0] if k and _in_range(Fraction(0), lo, hi) else []
    q = Poly(p.coeffs[k:])
    if q.degree <= 0:
        return out
    if q.is_even():
        r = q.even_part_in_square()
        for _, u in isolate_and_refine(r, width * width):
            if u > 0:
                for b in (-math.sqrt(u), math.sqrt(u)):
                    if _in_range(Fraction(b), lo, hi):
                        out.append(b)
    else:
        out += [x for _, x in isolate_and_refine(q, width) if _in_range(Fraction(x), lo, hi)]
    return sorted(out)


def even_x_factors(G: ParamPoly) -> Optional[dict]:
    """{'constant': q_b(0), 'leading': g_n, 'disc_q': Disc_w(q_b)} when G is
    even in x, else None."""
    if any(not G[k].is_zero() for k in range(1, G.degree + 1, 2)):
        return None
    Q = ParamPoly([G[k] for k in range(0, G.degree + 1, 2)])
    return {
        "m": Q.degree,
        "constant": Q[0],
        "leading": Q.leading,
        "disc_q": param_resultant_in_b(Q),
    }


# ---------------------------------------------------------------------------
# refutation by sampling


def _refute(G: ParamPoly, lo, hi, extra_b: Sequence[float] = (), n_b: int = 48, n_x: int = 400):
    """Look for (x, b) with G_b(x) <= 0; the witness is confirmed exactly."""
    blo = -4.0 if lo is None else float(lo)
    bhi = (blo + 8.0) if hi is None else float(hi)
    bs = list(np.linspace(blo, bhi, n_b + 1)[1:]) + [b for b in extra_b if blo < b <= bhi]
    # x in (-inf, inf) through x = tan(theta)
    xs = np.tan(np.linspace(-1.55, 1.55, n_x))
    best = None
    for b in bs:
        vals = G.eval_float(xs, b)
        i = int(np.argmin(vals))
        if best is None or vals[i] < best[0]:
            best = (float(vals[i]), float(xs[i]), float(b))
        if vals[i] <= 0:
            xr = Fraction(float(xs[i])).limit_denominator(10 ** 6)
            br = Fraction(float(b)).limit_denominator(10 ** 6)
            if _in_range(br, lo, hi) and G(xr, br) <= 0:
                return {"x": rat_to_str(xr), "b": rat_to_str(br), "value": float(G(xr, br))}
    return None if best is None else {"sampled_min": best[0], "at_x": best[1], "at_b": best[2], "confirmed": False}


# ---------------------------------------------------------------------------


def certify_positivity(G: ParamPoly, b0, b_range=None, *, c=None, method: str = "factored",
                       locate_roots: bool = True) -> CertificationResult:
    """Three-condition positivity certificate for G_b(x) over b in b_range.

    b_range is None (all b) or (lo, hi), read as lo < b <= hi.  ``method`` is
    "factored" (uses the even-in-x factorisation when it applies) or "full"
    (Sturm count on the whole discriminant).
    """
    import time

    lo, hi = _range(b_range)
    b0 = as_fraction(b0)
    if not _in_range(b0, lo, hi):
        raise ValueError(f"b0 = {b0} is not inside the range")
    timings = {}

    t = time.perf_counter()
    Gb0 = G.specialize(b0)
    chain = sturm_chain(Gb0)
    cond_i = {
        "b0": rat_to_str(b0),
        "degree": Gb0.degree,
        "sturm_chain_length": len(chain),
        "real_roots": count_real_roots(Gb0),
        "verdict": is_positive_on_reals(Gb0),
    }
    timings["cond_i"] = time.perf_counter() - t

    t = time.perf_counter()
    try:
        factors = even_x_factors(G) if method == "factored" else None
        if factors is not None:
            parts = {}
            for name in ("constant", "leading", "disc_q"):
                p = factors[name]
                if p.is_zero():
                    raise ArithmeticError(f"factor {name} vanishes identically")
                n = count_real_roots(p, lo, hi) if p.degree > 0 else 0
                parts[name] = {
                    "degree": p.degree,
                    "roots_in_range": n,
                    "roots_on_R": count_real_roots(p) if p.degree > 0 else 0,
                }
                if locate_roots and parts[name]["roots_on_R"]:
                    parts[name]["approx_roots_on_R"] = _approx_roots(p, None, None)
            deg_full = factors["leading"].degree + factors["constant"].degree + 2 * factors["disc_q"].degree
            total = sum(v["roots_in_range"] for v in parts.values())
            cond_ii = {
                "method": "factored",
                "identity": "Disc_x G = (-4)^m g_n q(0) Disc(q)^2",
                "discriminant_degree": deg_full,
                "factors": parts,
                "roots_in_range": total,
                "verdict": total == 0,
            }
        else:
            D = param_resultant_in_b(G)
            n = count_real_roots(D, lo, hi)
            cond_ii = {
                "method": "full",
                "discriminant_degree": D.degree,
                "roots_in_range": n,
                "roots_on_R": count_real_roots(D),
                "verdict": n == 0,
            }
            if locate_roots and cond_ii["roots_on_R"]:
                cond_ii["approx_roots_on_R"] = _approx_roots(D, None, None)
    except ArithmeticError as exc:
        cond_ii = {"verdict": False, "error": str(exc), "inconclusive": True}
    timings["cond_ii"] = time.perf_counter() - t

    t = time.perf_counter()
    cond_iii = {"degree": G.leading.degree, **_positive_on_range(G.leading, lo, hi)}
    timings["cond_iii"] = time.perf_counter() - t

    if cond_i["verdict"] and cond_ii["verdict"] and cond_iii["verdict"]:
        overall = {"verdict": CERTIFIED}
    else:
        failed = [n for n, d in (("i", cond_i), ("ii", cond_ii), ("iii", cond_iii)) if not d["verdict"]]
        extra = []
        for part in cond_ii.get("factors", {}).values():
            extra += part.get("approx_roots_on_R", [])
        extra += cond_ii.get("approx_roots_on_R", [])
        found = _refute(G, lo, hi, extra_b=extra)
        if found is not None and "x" in found:
            overall = {"verdict": REFUTED, "witness": found, "failed_conditions": failed}
        else:
            overall = {
                "verdict": INCONCLUSIVE,
                "reason": f"condition(s) {', '.join(failed)} failed and no nonpositive sample was found",
                "failed_conditions": failed,
                "sampling": found,
            }
    return CertificationResult(c, b_range if b_range is not None else "R", cond_i, cond_ii, cond_iii, overall, timings)


# ---------------------------------------------------------------------------
# numeric cross-check


def dense_min_N(params: ModelParams, H_max, n_z: int = 400, n_H: int = 400, N=None) -> dict:
    """Minimum of N(z, H) on an interior z-grid of (0, 1) times (0, H_max]."""
    ev = N_float_evaluator(N if N is not None else derive_N(params))
    z = (np.arange(n_z) + 0.5) / n_z
    H = float(H_max) * np.arange(1, n_H + 1) / n_H
    Z, HH = np.meshgrid(z, H, indexing="ij")
    vals = ev(Z, HH)
    i = np.unravel_index(int(np.argmin(vals)), vals.shape)
    return {"min": float(vals[i]), "z": float(Z[i]), "H": float(HH[i]), "H_max": float(H_max), "grid": [n_z, n_H]}


def sweep_valid(c) -> bool:
    """True if c supports elevation waves in one of the two branches."""
    p = params_from_c(c)
    probe = c + 1 if c * c > 2 else c - Fraction(1, 100)
    return regime_classify(p, probe).tag in (RegimeTag.ELEVATION_HIGH_C, RegimeTag.ELEVATION_LOW_C)


def certify_c(c, H_max=DEFAULT_H_MAX, b0=None, method: str = "factored", n_dense: int = 400) -> dict:
    """Certify N > 0 on (0, 1) x (0, H_max] at one rational c; b = sqrt(H)."""
    c = as_fraction(c)
    params = params_from_c(c)
    N = derive_N(params)
    G = build_Gb(N)
    H_max = as_fraction(H_max)
    b_hi = Fraction(math.sqrt(H_max)).limit_denominator(10 ** 6)
    if b_hi * b_hi > H_max:  # keep the certified range inside (0, H_max]
        b_hi = Fraction(math.floor(math.sqrt(H_max) * 10 ** 6), 10 ** 6)
    b0 = as_fraction(b0) if b0 is not None else b_hi / 2
    res = certify_positivity(G, b0, (Fraction(0), b_hi), c=c, method=method)
    dense = dense_min_N(params, b_hi * b_hi, n_dense, n_dense, N=N)
    return {
        "c": rat_to_str(c),
        "b_max": rat_to_str(b_hi),
        "result": res.as_dict(),
        "dense_min_N": dense,
        "consistent": (res.verdict == CERTIFIED) == (dense["min"] > 0),
    }


def certification_sweep(cs=DEFAULT_SWEEP, H_max=DEFAULT_H_MAX, jobs: int = 1) -> list:
    cs = [as_fraction(c) for c in cs if sweep_valid(as_fraction(c))]
    if jobs > 1 and len(cs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(certify_c, cs, [H_max] * len(cs)))
    return [certify_c(c, H_max) for c in cs]
