"""Sparse multivariate polynomials with rational coefficients.

Just enough algebra for deriving N(z, H): ring operations, partial
derivatives, substitution and exact division by monomials and linear
factors.  Terms are stored as {exponent tuple: Fraction}.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .ratpoly import Poly, as_fraction

Exps = Tuple[int, ...]


class MPoly:
    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exps, Fraction] = None):
        self.vars = tuple(variables)
        n = len(self.vars)
        clean: Dict[Exps, Fraction] = {}
        for e, c in (terms or {}).items():
            if len(e) != n:
                raise ValueError("exponent tuple length does not match variables")
            c = as_fraction(c)
            if c:
                clean[tuple(e)] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------------
    @classmethod
    def const(cls, variables, value) -> "MPoly":
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def var(cls, variables, name: str) -> "MPoly":
        e = [0] * len(variables)
        e[list(variables).index(name)] = 1
        return cls(variables, {tuple(e): 1})

    @classmethod
    def parse(cls, text: str, variables: Sequence[str]) -> "MPoly":
        """Parse sums of terms like ``- 12*A^2*H^7*z^4 + 3*K^2``."""
        variables = tuple(variables)
        index = {v: i for i, v in enumerate(variables)}
        body = re.sub(r"\s+", "", text)
        if not body:
            return cls(variables)
        if body[0] not in "+-":
            body = "+" + body
        out: Dict[Exps, Fraction] = {}
        for sign, term in re.findall(r"([+-])([^+-]+)", body):
            coeff = Fraction(1)
            e = [0] * len(variables)
            for factor in term.split("*"):
                if re.fullmatch(r"\d+(/\d+)?", factor):
                    coeff *= Fraction(factor)
                    continue
                m = re.fullmatch(r"([A-Za-z]\w*)(?:\^(\d+))?", factor)
                if not m or m.group(1) not in index:
                    raise ValueError(f"cannot parse factor {factor!r} in term {term!r}")
                e[index[m.group(1)]] += int(m.group(2) or 1)
            if sign == "-":
                coeff = -coeff
            key = tuple(e)
            out[key] = out.get(key, Fraction(0)) + coeff
        return cls(variables, out)

    # -- structure -------------------------------------------------------------
    def _same(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.vars != self.vars:
                raise ValueError("variable sets differ")
            return other
        return MPoly.const(self.vars, other)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.vars == other.vars and self.terms == other.terms
        return self == MPoly.const(self.vars, other)

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def degree(self, name: str) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def coeff(self, exps: Mapping[str, int]) -> Fraction:
        e = tuple(exps.get(v, 0) for v in self.vars)
        return self.terms.get(e, Fraction(0))

    def __repr__(self) -> str:
        return f"MPoly({self.vars}, {len(self.terms)} terms)"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    # -- arithmetic ------------------------------------------------------------
    def __neg__(self) -> "MPoly":
        return MPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "MPoly":
        other = self._same(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MPoly(self.vars, out)

    __radd__ = __add__

    def __sub__(self, other) -> "MPoly":
        return self + (-self._same(other))

    def __rsub__(self, other) -> "MPoly":
        return self._same(other) - self

    def __mul__(self, other) -> "MPoly":
        other = self._same(other)
        out: Dict[Exps, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MPoly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        result = MPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def diff(self, name: str) -> "MPoly":
        i = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MPoly(self.vars, out)

    def div_monomial(self, exps: Mapping[str, int]) -> "MPoly":
        d = tuple(exps.get(v, 0) for v in self.vars)
        out = {}
        for e, c in self.terms.items():
            if any(a < b for a, b in zip(e, d)):
                raise ArithmeticError(f"monomial division leaves a remainder at {e}")
            out[tuple(a - b for a, b in zip(e, d))] = c
        return MPoly(self.vars, out)

    def div_linear(self, name: str, root) -> "MPoly":
        """Exact division by (name - root); raises if the remainder is nonzero."""
        i = self.vars.index(name)
        root = as_fraction(root)
        groups: Dict[Exps, Dict[int, Fraction]] = {}
        for e, c in self.terms.items():
            key = e[:i] + (0,) + e[i + 1:]
            groups.setdefault(key, {})[e[i]] = c
        out = {}
        for key, col in groups.items():
            deg = max(col)
            carry = Fraction(0)  # synthetic division, highest power first
            for k in range(deg, 0, -1):
                carry = col.get(k, Fraction(0)) + root * carry
                e = list(key)
                e[i] = k - 1
                out[tuple(e)] = carry
            if col.get(0, Fraction(0)) + root * carry != 0:
                raise ArithmeticError(f"division by ({name} - {root}) is not exact")
        return MPoly(self.vars, out)

    # -- substitution and evaluation --------------------------------------------
    def subs(self, values: Mapping[str, object], keep: Sequence[str] = None) -> "MPoly":
        """Substitute numbers or MPolys (over ``keep``) for some variables."""
        keep = tuple(keep) if keep is not None else tuple(v for v in self.vars if v not in values)
        result = MPoly(keep)
        cache: Dict[Tuple[str, int], MPoly] = {}

        def power(v, k):
            if (v, k) not in cache:
                val = values[v]
                base = val if isinstance(val, MPoly) else MPoly.const(keep, val)
                cache[(v, k)] = base ** k
            return cache[(v, k)]

        acc: Dict[Exps, Fraction] = {}
        for e, c in self.terms.items():
            base = tuple(0 if k in values else e[self.vars.index(k)] for k in keep)
            term = MPoly(keep, {base: c})
            for v, k in zip(self.vars, e):
                if k and v in values:
                    term = term * power(v, k)
            for te, tc in term.terms.items():
                acc[te] = acc.get(te, Fraction(0)) + tc
        result.terms = {e: c for e, c in acc.items() if c}
        return result

    def __call__(self, **values):
        missing = [v for v in self.vars if v not in values]
        if missing:
            raise ValueError(f"missing values for {missing}")
        exact = all(isinstance(values[v], (int, Fraction)) for v in self.vars)
        total = Fraction(0) if exact else 0.0
        vals = [values[v] if exact else float(values[v]) for v in self.vars]
        for e, c in self.terms.items():
            t = c if exact else float(c)
            for x, k in zip(vals, e):
                if k:
                    t = t * x ** k
            total += t
        return total

    def to_dense(self, order: Sequence[str]):
        """Nested coefficient array (numpy float) indexed by exponents of ``order``."""
        import numpy as np

        if set(order) != set(self.vars):
            raise ValueError("order must list every variable")
        idx = [self.vars.index(v) for v in order]
        shape = [max((e[i] for e in self.terms), default=0) + 1 for i in idx]
        arr = np.zeros(shape)
        for e, c in self.terms.items():
            arr[tuple(e[i] for i in idx)] += float(c)
        return arr

    def to_univariate(self, name: str) -> Poly:
        i = self.vars.index(name)
        deg = self.degree(name)
        coeffs = [Fraction(0)] * (deg + 1)
        for e, c in self.terms.items():
            if any(k for j, k in enumerate(e) if j != i):
                raise ValueError("polynomial depends on other variables")
            coeffs[e[i]] += c
        return Poly(coeffs)

    def coefficients_in(self, name: str) -> Dict[int, "MPoly"]:
        """Split as sum_k coeff_k * name^k with coeff_k free of ``name``."""
        i = self.vars.index(name)
        out: Dict[int, Dict[Exps, Fraction]] = {}
        for e, c in self.terms.items():
            key = e[:i] + (0,) + e[i + 1:]
            out.setdefault(e[i], {})[key] = c
        return {k: MPoly(self.vars, t) for k, t in out.items()}

    def diff_report(self, other: "MPoly") -> list:
        """Monomials where the two polynomials disagree: (exps dict, self, other)."""
        other = self._same(other)
        rows = []
        for e in sorted(set(self.terms) | set(other.terms)):
            a, b = self.terms.get(e, Fraction(0)), other.terms.get(e, Fraction(0))
            if a != b:
                rows.append(({v: k for v, k in zip(self.vars, e) if k}, a, b))
        return rows

    def rename(self, variables: Iterable[str]) -> "MPoly":
        return MPoly(tuple(variables), self.terms)
