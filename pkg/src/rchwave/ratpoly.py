"""Exact univariate polynomials over the rationals.

Coefficients are ``fractions.Fraction`` stored constant term first.  The heavy
routines (gcd, resultant, Sturm chains) run on primitive integer coefficient
lists with subresultant remainder sequences so that coefficient growth stays
polynomial; the public API converts back to :class:`Poly`.

A floating-point Cardano solver lives here too because it is checked against
the exact root isolation.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Rational = Union[int, Fraction]
Bound = Optional[Fraction]


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions and ``"p/q"`` / decimal strings exactly.

    Floats are rejected: the exact layer never inherits binary rounding.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def rat_to_str(value: Rational) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


class Poly:
    """Dense polynomial with rational coefficients, constant term first.

    Instances are immutable and canonical (no trailing zero coefficients).
    The zero polynomial has no coefficients and degree ``-1``.
    """

    __slots__ = ("_c", "_fc")

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._c = tuple(cs)
        self._fc = None

    @classmethod
    def _raw(cls, coeffs: Sequence[Fraction]) -> "Poly":
        p = cls.__new__(cls)
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        p._c = tuple(cs)
        p._fc = None
        return p

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, value: Rational) -> "Poly":
        return cls((value,))

    @classmethod
    def from_roots(cls, roots: Iterable[Rational]) -> "Poly":
        p = cls((1,))
        for r in roots:
            p = p * cls((-as_fraction(r), 1))
        return p

    # -- basic structure -------------------------------------------------
    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    @property
    def lc(self) -> Fraction:
        if not self._c:
            return Fraction(0)
        return self._c[-1]

    def is_zero(self) -> bool:
        return not self._c

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self._c):
            return self._c[k]
        return Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == Poly((other,))._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        return f"Poly({[rat_to_str(c) for c in self._c]})"

    def __str__(self) -> str:
        return self.pretty("x")

    def pretty(self, var: str = "x") -> str:
        if not self._c:
            return "0"
        parts = []
        for k in range(len(self._c) - 1, -1, -1):
            c = self._c[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- arithmetic --------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly((other,))

    def __neg__(self) -> "Poly":
        return Poly._raw([-c for c in self._c])

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly._raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        a, b = self._c, other._c
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return Poly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        result, base = Poly((1,)), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other) -> tuple:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._c)
        db = other.degree
        if self.degree < db:
            return Poly(), self
        inv_lc = 1 / other.lc
        quot = [Fraction(0)] * (self.degree - db + 1)
        bc = other._c
        for k in range(self.degree - db, -1, -1):
            q = rem[k + db] * inv_lc
            quot[k] = q
            if q:
                for i in range(db + 1):
                    rem[k + i] -= q * bc[i]
        return Poly._raw(quot), Poly._raw(rem[:db])

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    # -- calculus and transforms -------------------------------------------
    def derivative(self) -> "Poly":
        return Poly._raw([k * c for k, c in enumerate(self._c)][1:])

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = 1 / self.lc
        return Poly._raw([c * inv for c in self._c])

    def compose(self, inner: "Poly") -> "Poly":
        out = Poly()
        for c in reversed(self._c):
            out = out * inner + c
        return out

    def substitute_power(self, k: int) -> "Poly":
        """Return p(x**k)."""
        out = [Fraction(0)] * (k * self.degree + 1) if self._c else []
        for i, c in enumerate(self._c):
            out[k * i] = c
        return Poly._raw(out)

    def is_even(self) -> bool:
        return all(c == 0 for c in self._c[1::2])

    def even_part_in_square(self) -> "Poly":
        """For even p(x) = q(x**2), return q."""
        if not self.is_even():
            raise ValueError("polynomial is not even")
        return Poly._raw(self._c[0::2])

    def trailing_zero_order(self) -> int:
        for k, c in enumerate(self._c):
            if c != 0:
                return k
        return 0

    # -- evaluation --------------------------------------------------------
    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self._c):
                acc = acc * x + c
            return acc
        return self.eval_float(x)

    def float_coeffs(self) -> tuple:
        if self._fc is None:
            self._fc = tuple(float(c) for c in self._c)
        return self._fc

    def eval_float(self, x):
        """Horner evaluation in floating point; works on numpy arrays."""
        acc = 0.0 * x
        for c in reversed(self.float_coeffs()):
            acc = acc * x + c
        return acc

    def sign_at(self, x: Rational) -> int:
        v = self(as_fraction(x))
        return (v > 0) - (v < 0)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> list:
        return [rat_to_str(c) for c in self._c]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "Poly":
        return cls(as_fraction(s) for s in data)


# ---------------------------------------------------------------------------
# Integer-coefficient core.  Lists are constant term first and trimmed.


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _to_int(p: Poly) -> list:
    """Primitive integer polynomial with the same sign as ``p``."""
    if p.is_zero():
        return []
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints]


def _content(a: list) -> int:
    g = 0
    for v in a:
        g = math.gcd(g, v)
        if g == 1:
            break
    return g


def _primitive(a: list) -> list:
    """Primitive part with positive leading coefficient."""
    if not a:
        return []
    g = _content(a)
    if a[-1] < 0:
        g = -g
    return [v // g for v in a]


def _prem(a: list, b: list) -> list:
    """Pseudo-remainder lc(b)**(deg a - deg b + 1) * a mod b."""
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return list(a)
    r = list(a)
    lb = b[-1]
    e = da - db + 1
    while r and len(r) - 1 >= db:
        q = r[-1]
        shift = len(r) - 1 - db
        r = [lb * v for v in r]
        for i, bv in enumerate(b):
            r[i + shift] -= q * bv
        r.pop()
        _trim(r)
        e -= 1
    if e and r:
        f = lb ** e
        r = [f * v for v in r]
    return r


def _int_derivative(a: list) -> list:
    return _trim([k * v for k, v in enumerate(a)][1:])


def _int_exact_div(a: list, b: list) -> list:
    """Exact division of integer polynomials (quotient must be integral up to content)."""
    q, r = divmod(Poly._raw([Fraction(v) for v in a]), Poly._raw([Fraction(v) for v in b]))
    if not r.is_zero():
        raise ArithmeticError("division is not exact")
    return _to_int(q)


def _int_gcd(a: list, b: list) -> list:
    """Primitive gcd via the subresultant remainder sequence."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return _primitive(a)
    a, b = _primitive(a), _primitive(b)
    g = h = 1
    while True:
        delta = len(a) - len(b)
        r = _prem(a, b)
        if not r:
            break
        if len(r) == 1:
            return [1]
        beta = g * h ** delta
        a, b = b, [v // beta for v in r]
        g = a[-1]
        h = h if delta == 0 else g ** delta // h ** (delta - 1)
    return _primitive(b)


def _int_resultant(a: list, b: list) -> int:
    """Resultant of integer polynomials by the subresultant algorithm."""
    if not a or not b:
        return 0
    da, db = len(a) - 1, len(b) - 1
    if da == 0:
        return a[0] ** db
    if db == 0:
        return b[0] ** da
    ca, cb = _content(a), _content(b)
    if a[-1] < 0:
        ca = -ca
    if b[-1] < 0:
        cb = -cb
    a = [v // ca for v in a]
    b = [v // cb for v in b]
    t = ca ** db * cb ** da
    s = 1
    if da < db:
        a, b = b, a
        if da % 2 and db % 2:
            s = -1
    g = h = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = _prem(a, b)
        if not r:
            return 0
        beta = g * h ** delta
        a, b = b, [v // beta for v in r]
        g = a[-1]
        h = h if delta == 0 else g ** delta // h ** (delta - 1)
        if len(b) == 1:
            da = len(a) - 1
            h = b[0] ** da if da == 1 else b[0] ** da // h ** (da - 1)
            return s * t * h


def _int_sign_at(a: list, x: Fraction) -> int:
    """Sign of an integer polynomial at an exact rational point."""
    if not a:
        return 0
    n, d = x.numerator, x.denominator
    acc = 0
    dp = 1
    for v in reversed(a):
        acc = acc * n + v * dp
        dp *= d
    # acc = d**deg * p(n/d) and d > 0
    return (acc > 0) - (acc < 0)


def _int_sign_at_inf(a: list, positive: bool) -> int:
    if not a:
        return 0
    s = 1 if a[-1] > 0 else -1
    if not positive and (len(a) - 1) % 2:
        s = -s
    return s


def _int_squarefree(a: list) -> list:
    g = _int_gcd(a, _int_derivative(a))
    if len(g) <= 1:
        return _primitive(a)
    return _primitive(_int_exact_div(a, g))


def _int_sturm(a: list) -> list:
    """Sturm chain of a squarefree integer polynomial, each member scaled by a
    positive factor.  Uses subresultant divisions and tracks the sign of the
    scalar relating each member to the classical Euclidean Sturm chain."""
    r_prev = _primitive(a)
    r_cur = _primitive(_int_derivative(a))
    chain = [r_prev]
    if not r_cur:
        return chain
    chain.append(r_cur)
    sign_prev, sign_cur = 1, 1
    g = h = 1
    while len(r_cur) > 1:
        delta = len(r_prev) - len(r_cur)
        r = _prem(r_prev, r_cur)
        if not r:
            break
        beta = g * h ** delta
        r_next = [v // beta for v in r]
        lc_sign = 1 if r_cur[-1] > 0 else -1
        beta_sign = 1 if beta > 0 else -1
        sign_next = -sign_prev * lc_sign ** (delta + 1) * beta_sign
        g = r_cur[-1]
        h = h if delta == 0 else g ** delta // h ** (delta - 1)
        r_prev, r_cur = r_cur, r_next
        sign_prev, sign_cur = sign_cur, sign_next
        chain.append(r_cur if sign_cur > 0 else [-v for v in r_cur])
    return chain


def _variations(signs: Iterable[int]) -> int:
    count, last = 0, 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def _chain_variations(chain: list, x: Bound, positive_inf: bool) -> int:
    if x is None:
        return _variations(_int_sign_at_inf(p, positive_inf) for p in chain)
    return _variations(_int_sign_at(p, x) for p in chain)


# ---------------------------------------------------------------------------
# Public exact operations


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic greatest common divisor."""
    if p.is_zero() and q.is_zero():
        return Poly()
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    g = _int_gcd(_to_int(p), _to_int(q))
    return Poly(g).monic()


def squarefree_part(p: Poly) -> Poly:
    if p.is_zero():
        raise ValueError("zero polynomial")
    return Poly(_int_squarefree(_to_int(p))).monic()


def sturm_chain(p: Poly) -> list:
    """Sturm sequence p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k).

    A non-squarefree input is first replaced by its squarefree part, so the
    chain always ends in a nonzero constant.  Members are returned up to
    positive constant factors, which leaves every sign count unchanged.
    """
    if p.is_zero():
        raise ValueError("Sturm chain of the zero polynomial")
    a = _to_int(p)
    if len(a) > 1:
        a = _int_squarefree(a)
    return [Poly(m) for m in _int_sturm(a)]


def _check_interval(lo: Bound, hi: Bound) -> tuple:
    lo = None if lo is None else as_fraction(lo)
    hi = None if hi is None else as_fraction(hi)
    if lo is not None and hi is not None and not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi}]")
    return lo, hi


def _prepare_count(p: Poly) -> tuple:
    """Split p = x**k * q with q(0) != 0 and reduce q to squarefree integer form.

    If q is even, q(x) = r(x**2) and the squarefree reduction is done on r
    (half the degree); the flag tells the caller which variable ``a`` is in.
    """
    if p.is_zero():
        raise ValueError("root count of the zero polynomial")
    k = p.trailing_zero_order()
    q = Poly._raw(p.coeffs[k:])
    a = _to_int(q)
    even = len(a) > 1 and all(v == 0 for v in a[1::2])
    if even:
        a = a[0::2]
    if len(a) > 1:
        a = _int_squarefree(a)
    return k, a, even


def _count_int(a: list, lo: Bound, hi: Bound, even: bool = False) -> int:
    if len(a) <= 1:
        return 0
    if even:
        # q(x) = r(x^2): count through y = x^2 on each half-line
        chain = _int_sturm(a)
        total = 0
        if hi is None or hi > 0:
            plo = Fraction(0) if lo is None or lo < 0 else lo
            phi = None if hi is None else hi
            total += _count_sq(chain, plo, phi)
        if lo is None or lo < 0:
            # negative roots x in (lo, min(hi,0)] <-> -x in [-min(hi,0), -lo)
            nlo = Fraction(0) if hi is None or hi > 0 else -hi
            nhi = None if lo is None else -lo
            total += _count_sq(chain, nlo, nhi, closed_left=True)
        return total
    chain = _int_sturm(a)
    return _chain_variations(chain, lo, False) - _chain_variations(chain, hi, True)


def _count_sq(chain: list, lo: Fraction, hi: Bound, closed_left: bool = False) -> int:
    """Roots x of r(x^2) with x in (lo, hi] (or [lo, hi) if closed_left),
    for 0 <= lo; r(0) != 0 is guaranteed by the caller."""
    ylo = lo * lo
    yhi = None if hi is None else hi * hi
    if yhi is not None and ylo >= yhi:
        return 0
    n = _chain_variations(chain, ylo, False) - _chain_variations(chain, yhi, True)
    if closed_left:
        # switch (lo, hi] to [lo, hi)
        if _int_sign_at(chain[0], ylo) == 0 and lo > 0:
            n += 1
        if yhi is not None and _int_sign_at(chain[0], yhi) == 0:
            n -= 1
    return n


def count_real_roots(p: Poly, lo: Bound = None, hi: Bound = None) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi].

    ``None`` stands for -inf (``lo``) or +inf (``hi``).  Repeated roots count
    once.  Even polynomials are counted through x**2, which is exact and keeps
    the large discriminants of the certification step tractable.
    """
    lo, hi = _check_interval(lo, hi)
    k, a, even = _prepare_count(p)
    n = _count_int(a, lo, hi, even)
    if k and (lo is None or lo < 0) and (hi is None or hi >= 0):
        n += 1
    return n


def count_real_roots_open(p: Poly, lo: Bound = None, hi: Bound = None) -> int:
    """Distinct real roots in the open interval (lo, hi)."""
    n = count_real_roots(p, lo, hi)
    if hi is not None and p(as_fraction(hi)) == 0:
        n -= 1
    return n


def is_positive_on_reals(p: Poly) -> bool:
    """True iff p(x) > 0 for every real x."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree == 0:
        return p.lc > 0
    if p.degree % 2 or p.lc < 0:
        return False
    return count_real_roots(p) == 0


def is_positive_on_interval(p: Poly, lo: Bound, hi: Bound) -> bool:
    """True iff p > 0 on the open interval (lo, hi)."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    if count_real_roots_open(p, lo, hi):
        return False
    return p.sign_at(_sample_point(lo, hi)) > 0


def _sample_point(lo: Bound, hi: Bound) -> Fraction:
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def resultant(p: Poly, q: Poly) -> Fraction:
    """Res(p, q) via the subresultant remainder sequence (exact)."""
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant with the zero polynomial")
    ip, iq = _to_int(p), _to_int(q)
    # p = sp * ip with sp = p.lc / ip.lc, likewise q
    sp = p.lc / ip[-1]
    sq = q.lc / iq[-1]
    return _int_resultant(ip, iq) * sp ** q.degree * sq ** p.degree


def discriminant(p: Poly) -> Fraction:
    """(-1)^(n(n-1)/2) / a_n * Res(p, p')."""
    n = p.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    if n == 1:
        return Fraction(1)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(p, p.derivative()) / p.lc


def interpolate(nodes: Sequence[Rational], values: Sequence[Rational]) -> Poly:
    """Exact interpolating polynomial through (nodes[i], values[i])."""
    xs = [as_fraction(v) for v in nodes]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    dd = [as_fraction(v) for v in values]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    p = Poly((dd[-1],)) if n else Poly()
    for k in range(n - 2, -1, -1):
        p = p * Poly((-xs[k], 1)) + dd[k]
    return p


# ---------------------------------------------------------------------------
# Root isolation


def root_bound(p: Poly) -> Fraction:
    """Cauchy bound: every root satisfies |x| < bound."""
    lc = abs(p.lc)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(p: Poly) -> list:
    """Disjoint intervals (lo, hi] each holding exactly one distinct real root.

    Exactly located rational roots come back as point intervals (r, r).
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree < 1:
        return []
    q = squarefree_part(p)
    chain = [_to_int(m) for m in sturm_chain(q)]
    qi = chain[0]

    def count(lo, hi):
        return _chain_variations(chain, lo, False) - _chain_variations(chain, hi, True)

    m = Fraction(1 << math.ceil(root_bound(q)).bit_length())  # dyadic midpoints stay short
    out = []
    stack = [(-m, m)]
    while stack:
        lo, hi = stack.pop()
        n = count(lo, hi)
        if n == 0:
            continue
        if n == 1:
            if _int_sign_at(qi, hi) == 0:
                out.append((hi, hi))
            else:
                out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort()
    return out


def refine_root(p: Poly, interval: tuple, target_width: Rational) -> tuple:
    """Bisect an isolating interval of a squarefree ``p`` below ``target_width``."""
    lo, hi = interval
    width = as_fraction(target_width)
    if lo == hi:
        return lo, hi
    a = _to_int(p)
    s_hi = _int_sign_at(a, hi)
    if s_hi == 0:
        return hi, hi
    while hi - lo > width:
        mid = (lo + hi) / 2
        s_mid = _int_sign_at(a, mid)
        if s_mid == 0:
            return mid, mid
        if s_mid == s_hi:
            hi = mid
        else:
            lo = mid
    # a rational root with a small denominator is the simplest number in range
    cand = simplest_rational_between(lo, hi)
    if _int_sign_at(a, cand) == 0:
        return cand, cand
    return lo, hi


def simplest_rational_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in the closed interval [lo, hi]."""
    lo, hi = as_fraction(lo), as_fraction(hi)
    if lo > hi:
        raise ValueError("empty interval")
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_rational_between(-hi, -lo)
    fl = lo.numerator // lo.denominator
    if Fraction(fl) == lo:
        return lo
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # lo and hi share the integer part; recurse on reciprocals of the fractional parts
    return fl + 1 / simplest_rational_between(1 / (hi - fl), 1 / (lo - fl))


def isolate_and_refine(p: Poly, target_width: float) -> list:
    """[(interval, float approximation), ...] sorted by location."""
    q = squarefree_part(p)
    width = Fraction(target_width)
    if width <= 0:
        raise ValueError("target width must be positive")
    out = []
    for iv in isolate_real_roots(q):
        lo, hi = refine_root(q, iv, width)
        out.append(((lo, hi), float((lo + hi) / 2)))
    return out


# ---------------------------------------------------------------------------
# Polynomials whose coefficients are polynomials in a parameter b


class ParamPoly:
    """G_b(x) = sum_k g_k(b) x**k with each g_k a :class:`Poly` in b."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Poly]):
        cs = [c if isinstance(c, Poly) else Poly.const(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self._c = tuple(cs)

    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    @property
    def b_degree(self) -> int:
        return max((c.degree for c in self._c), default=-1)

    @property
    def leading(self) -> Poly:
        return self._c[-1] if self._c else Poly()

    def __getitem__(self, k: int) -> Poly:
        if 0 <= k < len(self._c):
            return self._c[k]
        return Poly()

    def __eq__(self, other) -> bool:
        return isinstance(other, ParamPoly) and self._c == other._c

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        return f"ParamPoly(deg_x={self.degree}, deg_b={self.b_degree})"

    def specialize(self, b: Rational) -> Poly:
        b = as_fraction(b)
        return Poly(c(b) for c in self._c)

    def __call__(self, x: Rational, b: Rational) -> Fraction:
        return self.specialize(b)(as_fraction(x))

    def eval_float(self, x, b):
        acc = 0.0 * x * b
        for c in reversed(self._c):
            acc = acc * x + c.eval_float(b)
        return acc

    def is_even_in_b(self) -> bool:
        return all(c.is_even() for c in self._c)

    def to_json(self) -> list:
        return [c.to_json() for c in self._c]


def param_resultant_in_b(G: ParamPoly, *, use_square: Optional[bool] = None) -> Poly:
    """Discriminant of G_b with respect to x, as an exact polynomial in b.

    Evaluation-interpolation: specialise at D + 1 rational values of b where
    the leading coefficient does not vanish, take exact scalar discriminants,
    and interpolate.  D = (2n - 2) * deg_b + deg_b(g_n) bounds the degree.
    When every coefficient is even in b the work is done in u = b**2 (half as
    many nodes) and mapped back.
    """
    n = G.degree
    if n < 1:
        raise ValueError("need degree >= 1 in x")
    lead = G.leading
    if lead.is_zero():
        raise ValueError("leading coefficient vanishes identically")
    if use_square is None:
        use_square = G.is_even_in_b()
    if use_square:
        H = ParamPoly(c.even_part_in_square() for c in G.coeffs)
        return _disc_by_interpolation(H).substitute_power(2)
    return _disc_by_interpolation(G)


def _disc_by_interpolation(G: ParamPoly) -> Poly:
    n = G.degree
    lead = G.leading
    bound = (2 * n - 2) * G.b_degree + lead.degree
    nodes, values = [], []
    b = 0
    attempts = 0
    while len(nodes) < bound + 1:
        attempts += 1
        if attempts > 4 * (bound + 1) + lead.degree + 8:
            raise ArithmeticError("could not find enough non-degenerate sample points")
        node = Fraction(b)
        b = -b if b > 0 else -b + 1  # 0, 1, -1, 2, -2, ...
        if lead(node) == 0:
            continue
        nodes.append(node)
        values.append(discriminant(G.specialize(node)))
    return interpolate(nodes, values)


# ---------------------------------------------------------------------------
# Floating-point Cardano


def _cbrt(x: float) -> float:
    if x == 0.0:
        return 0.0
    r = math.copysign(abs(x) ** (1.0 / 3.0), x)
    return r - (r * r * r - x) / (3.0 * r * r)


def cardano_real_root(a3: float, a2: float, a1: float, a0: float, polish: bool = True) -> tuple:
    """Real roots of a3 x^3 + a2 x^2 + a1 x + a0, ascending.

    With x = eta - a2/(3 a3) the cubic becomes eta^3 + 3 p eta + 2 q.  If
    q^2 + p^3 > 0 the single real root eta = cbrt(-q + sqrt) + cbrt(-q - sqrt)
    is returned as a 1-tuple; otherwise the trigonometric form gives all
    three.  ``polish`` applies Newton steps on the original cubic.
    """
    a3, a2, a1, a0 = float(a3), float(a2), float(a1), float(a0)
    if a3 == 0.0:
        raise ValueError("leading coefficient is zero; not a cubic")
    b, c, d = a2 / a3, a1 / a3, a0 / a3
    shift = -b / 3.0
    p = (3.0 * c - b * b) / 9.0
    q = (2.0 * b ** 3 - 9.0 * b * c + 27.0 * d) / 54.0
    disc = q * q + p ** 3
    if _exact_cubic_disc_sign(a3, a2, a1, a0) < 0:
        # one real root; the float value of q^2 + p^3 may have cancelled
        s = math.sqrt(max(disc, 0.0))
        # larger-magnitude cube root first, partner from u v = -p
        u = _cbrt(-q - s if q > 0 else -q + s)
        v = -p / u if u != 0.0 else 0.0
        roots = [u + v + shift]
    elif p >= 0.0:
        roots = [shift] * 3
    else:
        r = math.sqrt(-p)
        arg = max(-1.0, min(1.0, -q / (r ** 3)))
        th = math.acos(arg)
        trig = [2.0 * r * math.cos((th - 2.0 * math.pi * k) / 3.0) + shift for k in range(3)]
        big = _newton_cubic(a3, a2, a1, a0, max(trig, key=abs))
        roots = [big] + _deflated_pair(a3, a1, a0, big, trig)
    if polish:
        roots = [_newton_cubic(a3, a2, a1, a0, x) for x in roots]
    return tuple(sorted(roots))


def _deflated_pair(a3, a1, a0, big, fallback) -> list:
    """Remaining two roots after dividing out the largest one, r = big.

    Backward deflation: (x - r)(a3 x^2 + e1 x + e0) with e0 = -a0/r and
    e1 = (e0 - a1)/r, then the cancellation-free quadratic formula.
    """
    if big == 0.0:
        return sorted(fallback, key=abs)[:2]
    e0 = -a0 / big
    e1 = (e0 - a1) / big
    disc = e1 * e1 - 4.0 * a3 * e0
    if disc < 0.0:
        disc = 0.0
    t = -0.5 * (e1 + math.copysign(math.sqrt(disc), e1))
    if t == 0.0:
        return [0.0, 0.0]
    return [t / a3, e0 / t]


def _exact_cubic_disc_sign(a3, a2, a1, a0) -> int:
    """Sign of the cubic discriminant, computed exactly from the float inputs.

    Negative means one real root; this is the sign of -(q^2 + p^3).
    """
    a, b, c, d = (Fraction(v) for v in (a3, a2, a1, a0))
    disc = 18 * a * b * c * d - 4 * b ** 3 * d + b * b * c * c - 4 * a * c ** 3 - 27 * a * a * d * d
    return (disc > 0) - (disc < 0)


def _newton_cubic(a3, a2, a1, a0, x, steps: int = 3) -> float:
    for _ in range(steps):
        f = ((a3 * x + a2) * x + a1) * x + a0
        df = (3.0 * a3 * x + 2.0 * a2) * x + a1
        if df == 0.0:
            break
        nx = x - f / df
        if abs(((a3 * nx + a2) * nx + a1) * nx + a0) >= abs(f):
            break
        x = nx
    return x
