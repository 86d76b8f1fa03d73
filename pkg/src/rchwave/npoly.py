"""The polynomial N(z, H) behind d''(sigma), the map to G_b(x), and audits.

With y = H z and sigma = h^{-1}(H),

    d'(sigma) = U(H) = int_0^1 f(z, H) dz,   f = H^2 z (S + Y) / sqrt(S Y),

where S = S(Hz, sigma), Y = Y(Hz, sigma).  Both are polynomials in (z, H):

    S = A H^3 (z^3 - 1) + B H^2 (z^2 - 1) + H (z - 1)
    Y = H (z - 1) - A H^3 - B H^2 - c + K.

Differentiating, d_H f = M / (S Y)^{3/2} with

    M = 2 H z (S + Y) S Y + H^2 z (S_H + Y_H) S Y - 1/2 H^2 z (S + Y)(S_H Y + S Y_H),

and M is divisible by H^2 z (z - 1).  We set N = M / (H^2 z (z - 1)); with
that sign the z = H = 0 value of N is 3 (K - c)^2 / 2 >= 0.  (S and Y share
the sign eps on 0 < z < 1; the positive integrand is eps * f, so
d_H(eps f) = -eps H^2 z (1 - z) N / (S Y)^{3/2}.)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .model import ModelParams
from .mpoly import MPoly
from .ratpoly import ParamPoly, Poly
from .transcriptions import G8_OPERATOR_GAP, G_REFERENCE, G_VARS, N_REFERENCE_HALF, N_VARS

ZH = ("z", "H")


def _sym(name: str) -> MPoly:
    return MPoly.var(N_VARS, name)


def S_bar_symbolic() -> MPoly:
    A, B, z, H = _sym("A"), _sym("B"), _sym("z"), _sym("H")
    return A * H ** 3 * (z ** 3 - 1) + B * H ** 2 * (z ** 2 - 1) + H * (z - 1)


def Y_bar_symbolic() -> MPoly:
    A, B, K, c, z, H = (_sym(v) for v in N_VARS)
    return H * (z - 1) - A * H ** 3 - B * H ** 2 - c + K


def numerator_M(S: MPoly, Y: MPoly) -> MPoly:
    z, H = MPoly.var(S.vars, "z"), MPoly.var(S.vars, "H")
    SH, YH = S.diff("H"), Y.diff("H")
    SY = S * Y
    return (
        2 * H * z * (S + Y) * SY
        + H ** 2 * z * (SH + YH) * SY
        - Fraction(1, 2) * H ** 2 * z * (S + Y) * (SH * Y + S * YH)
    )


def derive_N_symbolic() -> MPoly:
    """N in the variables (A, B, K, c, z, H), by exact division of M."""
    M = numerator_M(S_bar_symbolic(), Y_bar_symbolic())
    return M.div_monomial({"H": 2, "z": 1}).div_linear("z", 1)


def _constants(params: ModelParams) -> dict:
    return {"A": params.A, "B": params.B, "K": params.K, "c": params.c}


def S_bar(params: ModelParams) -> MPoly:
    return S_bar_symbolic().subs(_constants(params), keep=ZH)


def Y_bar(params: ModelParams) -> MPoly:
    return Y_bar_symbolic().subs(_constants(params), keep=ZH)


def derive_N(params: ModelParams) -> MPoly:
    """N(z, H) for fixed constants; the division by H^2 z (z - 1) is checked
    to be exact (an ArithmeticError is raised otherwise)."""
    M = numerator_M(S_bar(params), Y_bar(params))
    return M.div_monomial({"H": 2, "z": 1}).div_linear("z", 1)


def transcribed_N_symbolic() -> MPoly:
    return Fraction(1, 2) * MPoly.parse(N_REFERENCE_HALF, N_VARS)


def transcribed_N(params: ModelParams) -> MPoly:
    """The reference N display with the model constants substituted."""
    return transcribed_N_symbolic().subs(_constants(params), keep=ZH)


@dataclass
class NComparison:
    derived_terms: int
    reference_terms: int
    mismatches: list
    constant_term_derived: MPoly
    constant_term_reference: MPoly
    reference_matches_flipped_S: bool

    def as_dict(self) -> dict:
        return {
            "derived_terms": self.derived_terms,
            "reference_terms": self.reference_terms,
            "mismatch_count": len(self.mismatches),
            "mismatches": [
                {"monomial": m, "derived": str(a), "reference": str(b)} for m, a, b in self.mismatches
            ],
            "reference_matches_flipped_S": self.reference_matches_flipped_S,
            "z0H0_part_derived": str(self.constant_term_derived),
            "z0H0_part_reference": str(self.constant_term_reference),
        }


def compare_N() -> NComparison:
    """Monomial-by-monomial comparison of derived and reference N in
    (A, B, K, c, z, H).  Also tests the hypothesis that the reference was
    produced with S replaced by -S (and divided by H^2 z (1 - z))."""
    derived = derive_N_symbolic()
    ref = transcribed_N_symbolic()
    flipped = numerator_M(-S_bar_symbolic(), Y_bar_symbolic())
    flipped_N = flipped.div_monomial({"H": 2, "z": 1}).div_linear("z", 1) * -1
    return NComparison(
        derived_terms=len(derived),
        reference_terms=len(ref),
        mismatches=derived.diff_report(ref),
        constant_term_derived=derived.subs({"z": 0, "H": 0}),
        constant_term_reference=ref.subs({"z": 0, "H": 0}),
        reference_matches_flipped_S=(flipped_N == ref),
    )


# ---------------------------------------------------------------------------
# G_b(x) = (1 + x^2)^6 N(x^2 / (1 + x^2), b^2)


def _binomial_row(m: int) -> list:
    row = [1]
    for _ in range(m):
        row = [a + b for a, b in zip(row + [0], [0] + row)]
    return row


def build_Gb(N: MPoly, zdeg: int = 6) -> ParamPoly:
    """Clear denominators after z = x^2/(1+x^2), H = b^2.

    z^i (1 + x^2)^6 = x^{2i} (1 + x^2)^{6-i}, so the result is even in x of
    degree 2 * zdeg.  N must be a polynomial in (z, H) only.
    """
    if N.vars != ZH:
        raise ValueError("N must be a polynomial in (z, H)")
    if N.degree("z") > zdeg:
        raise ValueError(f"N has z-degree {N.degree('z')} > {zdeg}; G_b would exceed degree {2 * zdeg}")
    hdeg = max(N.degree("H"), 0)
    coeffs = [[Fraction(0)] * (2 * hdeg + 1) for _ in range(2 * zdeg + 1)]
    for (i, j), c in N.terms.items():
        row = _binomial_row(zdeg - i)
        for k, binom in enumerate(row):
            coeffs[2 * (i + k)][2 * j] += c * binom
    G = ParamPoly(Poly(col) for col in coeffs)
    if any(not G[k].is_zero() for k in range(1, G.degree + 1, 2)):
        raise ArithmeticError("odd powers of x in G_b")
    return G


def build_Gb_symbolic(N: MPoly, zdeg: int = 6) -> dict:
    """Same substitution keeping (A, B, K, c) symbolic: {k: g_k in G_VARS}."""
    out: dict = {}
    for e, c in N.terms.items():
        d = dict(zip(N.vars, e))
        i, j = d.pop("z"), d.pop("H")
        row = _binomial_row(zdeg - i)
        for k, binom in enumerate(row):
            key = 2 * (i + k)
            mono = tuple(d.get(v, 0) for v in G_VARS[:-1]) + (2 * j,)
            terms = out.setdefault(key, {})
            terms[mono] = terms.get(mono, Fraction(0)) + c * binom
    return {k: MPoly(G_VARS, t) for k, t in sorted(out.items())}


def appendix_gb_symbolic() -> dict:
    return {k: MPoly.parse(v, G_VARS) for k, v in G_REFERENCE.items()}


def appendix_gb(params: ModelParams) -> ParamPoly:
    """The reference coefficients g_0 ... g_12 as a ParamPoly in b."""
    vals = _constants(params)
    coeffs = []
    for k in range(13):
        src = G_REFERENCE.get(k)
        if src is None:
            coeffs.append(Poly())
            continue
        g = MPoly.parse(src, G_VARS).subs(vals, keep=("b",))
        coeffs.append(g.to_univariate("b"))
    return ParamPoly(coeffs)


def _b_free(g: MPoly) -> bool:
    return g.degree("b") <= 0


def compare_with_appendix(derived: Optional[dict] = None, max_listed: int = 400) -> dict:
    """Structured discrepancy report: reference g_k against G_b built from the
    derived N (and, for context, from the reference N).

    A global normalisation factor is estimated from the K^2 b^0 coefficient
    of g_12 and applied before the monomial comparison.
    """
    derived = derived if derived is not None else build_Gb_symbolic(derive_N_symbolic())
    from_ref_N = build_Gb_symbolic(transcribed_N_symbolic())
    appendix = appendix_gb_symbolic()
    key_K2 = {"K": 2}

    def factor(candidate: dict) -> Optional[Fraction]:
        a = appendix[12].coeff(key_K2)
        d = candidate.get(12, MPoly(G_VARS)).coeff(key_K2)
        return a / d if d else None

    report = {"normalisation": {}, "coefficients": {}, "flags": []}
    for label, cand in (("derived", derived), ("reference_N", from_ref_N)):
        f = factor(cand)
        report["normalisation"][label] = None if f is None else f"{f.numerator}/{f.denominator}"
        for k in range(0, 13, 2):
            g_app = appendix.get(k, MPoly(G_VARS))
            g_cand = cand.get(k, MPoly(G_VARS)) * (f if f is not None else 1)
            diffs = g_app.diff_report(g_cand)
            entry = report["coefficients"].setdefault(f"g{k}", {})
            entry[label] = {
                "agree": not diffs,
                "mismatch_count": len(diffs),
                "mismatches": [
                    {"monomial": m, "appendix": str(a), label: str(b)} for m, a, b in diffs[:max_listed]
                ],
            }
    for k in range(0, 13, 2):
        entry = report["coefficients"][f"g{k}"]
        entry["appendix_b_free"] = _b_free(appendix.get(k, MPoly(G_VARS)))
        entry["derived_b_free"] = _b_free(derived.get(k, MPoly(G_VARS)))
    g0 = report["coefficients"]["g0"]
    if g0["appendix_b_free"] and not g0["derived_b_free"]:
        report["flags"].append(
            {
                "id": "g0_b_free",
                "detail": "appendix g0 has no b dependence, but N(0, H) carries H-dependent "
                "terms, so g0(b) = N(0, b^2) must depend on b",
            }
        )
    report["flags"].append(
        {
            "id": "g8_operator_gap",
            "detail": f"printed '{G8_OPERATOR_GAP['printed']}' read as '{G8_OPERATOR_GAP['adopted']}'",
        }
    )
    mismatching = [k for k, v in report["coefficients"].items() if not v["derived"]["agree"]]
    if mismatching:
        report["flags"].append({"id": "coefficient_mismatch", "detail": ", ".join(mismatching)})
    return report


def N_float_evaluator(N: MPoly):
    """Vectorised float evaluator (z, H) -> N(z, H)."""
    import numpy as np

    arr = N.to_dense(ZH)

    def ev(z, H):
        z = np.asarray(z, dtype=float)
        H = np.asarray(H, dtype=float)
        return np.polynomial.polynomial.polyval2d(z, H, arr)

    return ev
