"""Exact rational functions of ``s = sqrt(x)``.

Every generating function in the catalog that is free of logarithms, and the
second derivative of every generating function, is a rational function of
``s``.  Keeping those functions as exact polynomials with :class:`Fraction`
coefficients lets us

* compose difference generators without losing the exact cancellation at
  ``x = 1`` (the numerator factor ``(s - 1)**m`` is pulled out symbolically),
* differentiate with respect to ``x`` exactly, and
* evaluate in floating point without catastrophic cancellation near ``x = 1``.

The canonical form is::

    value(x) = (s - 1)**m * N(s) / (s**a * (1 + s**2)**b)

with ``N(1) != 0`` unless the function is identically zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Tuple

import numpy as np

Poly = Tuple[Fraction, ...]  # ascending coefficients in s


def _poly(coeffs: Iterable) -> Poly:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _poly(out)


def poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return _poly(out)


def poly_scale(a: Poly, c) -> Poly:
    c = Fraction(c)
    return _poly(x * c for x in a)


def poly_pow(a: Poly, k: int) -> Poly:
    out: Poly = (Fraction(1),)
    for _ in range(k):
        out = poly_mul(out, a)
    return out


def poly_deriv(a: Poly) -> Poly:
    return _poly(i * c for i, c in enumerate(a) if i > 0)


def poly_shift_one(a: Poly) -> Poly:
    """Coefficients of ``a(1 + v)`` in ascending powers of ``v``."""
    out: Poly = ()
    for c in reversed(a):
        # Horner: out = out * (1 + v) + c
        out = poly_add(poly_mul(out, (Fraction(1), Fraction(1))), (c,))
    return out


def poly_eval_exact(a: Poly, s: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * s + c
    return acc


def _divmod_linear_root_one(a: Poly) -> Tuple[Poly, Fraction]:
    # synthetic division by (s - 1)
    n = len(a)
    if n == 0:
        return (), Fraction(0)
    q = [Fraction(0)] * (n - 1)
    acc = Fraction(0)
    for i in range(n - 1, 0, -1):
        acc = acc + a[i]
        q[i - 1] = acc
    rem = acc + a[0]
    return _poly(q), rem


def _div_one_plus_s2(a: Poly) -> Tuple[Poly, bool]:
    # exact division by (1 + s^2); returns (quotient, exact?)
    rem = list(a)
    n = len(rem)
    if n < 3:
        return a, False
    q = [Fraction(0)] * (n - 2)
    for i in range(n - 1, 1, -1):
        c = rem[i]
        q[i - 2] = c
        rem[i] -= c
        rem[i - 2] -= c
    if rem[0] != 0 or rem[1] != 0:
        return a, False
    return _poly(q), True


S_MINUS_1: Poly = (Fraction(-1), Fraction(1))
S2_MINUS_1: Poly = (Fraction(-1), Fraction(0), Fraction(1))
ONE_PLUS_S2: Poly = (Fraction(1), Fraction(0), Fraction(1))


@dataclass(frozen=True)
class SqrtRational:
    """``(s-1)**root * num(s) / (s**s_pow * (1+s**2)**x1_pow)`` with ``s = sqrt(x)``."""

    num: Poly
    s_pow: int = 0
    x1_pow: int = 0
    root: int = 0

    @classmethod
    def from_poly(cls, numerator: Sequence, s_pow: int = 0, x1_pow: int = 0) -> "SqrtRational":
        """Build from an expanded numerator polynomial (ascending powers of s)."""
        return cls._normalize(_poly(numerator), s_pow, x1_pow)

    @classmethod
    def _normalize(cls, p: Poly, s_pow: int, x1_pow: int) -> "SqrtRational":
        if not p:
            return cls((), 0, 0, 0)
        # negative powers of s in the denominator are moved to the numerator
        if s_pow < 0:
            p = (Fraction(0),) * (-s_pow) + p
            s_pow = 0
        while s_pow > 0 and p[0] == 0:
            p = p[1:]
            s_pow -= 1
        while x1_pow > 0:
            q, exact = _div_one_plus_s2(p)
            if not exact:
                break
            p = q
            x1_pow -= 1
        root = 0
        while True:
            q, rem = _divmod_linear_root_one(p)
            if rem != 0:
                break
            p = q
            root += 1
        return cls(p, s_pow, x1_pow, root)

    # -- algebra ---------------------------------------------------------
    def expanded(self) -> Poly:
        return poly_mul(poly_pow(S_MINUS_1, self.root), self.num)

    def is_zero(self) -> bool:
        return not self.num

    def __neg__(self) -> "SqrtRational":
        return SqrtRational(poly_scale(self.num, -1), self.s_pow, self.x1_pow, self.root)

    def scale(self, c) -> "SqrtRational":
        c = Fraction(c)
        if c == 0:
            return SqrtRational(())
        return SqrtRational(poly_scale(self.num, c), self.s_pow, self.x1_pow, self.root)

    def __rmul__(self, c) -> "SqrtRational":
        return self.scale(c)

    def __add__(self, other: "SqrtRational") -> "SqrtRational":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        a = max(self.s_pow, other.s_pow)
        b = max(self.x1_pow, other.x1_pow)

        def lift(r: SqrtRational) -> Poly:
            p = r.expanded()
            p = (Fraction(0),) * (a - r.s_pow) + p
            return poly_mul(p, poly_pow(ONE_PLUS_S2, b - r.x1_pow))

        return SqrtRational._normalize(poly_add(lift(self), lift(other)), a, b)

    def __sub__(self, other: "SqrtRational") -> "SqrtRational":
        return self + (-other)

    def d_dx(self) -> "SqrtRational":
        """Exact derivative with respect to ``x`` (``d/dx = (1/(2s)) d/ds``)."""
        if self.is_zero():
            return self
        p = self.expanded()
        a, b = self.s_pow, self.x1_pow
        s_times_1ps2 = (Fraction(0), Fraction(1), Fraction(0), Fraction(1))
        term1 = poly_mul(poly_deriv(p), s_times_1ps2)
        weight = poly_add(poly_scale(ONE_PLUS_S2, a), (Fraction(0), Fraction(0), Fraction(2 * b)))
        numerator = poly_add(term1, poly_scale(poly_mul(p, weight), -1))
        return SqrtRational._normalize(poly_scale(numerator, Fraction(1, 2)), a + 2, b + 1)

    # -- evaluation ------------------------------------------------------
    #: Below this ``|s - 1|`` the numerator is evaluated in powers of ``s - 1``.
    SHIFT_RADIUS = 0.5

    @cached_property
    def _coeffs_s(self) -> list:
        return [float(c) for c in reversed(self.num)]

    @cached_property
    def _coeffs_v(self) -> list:
        return [float(c) for c in reversed(poly_shift_one(self.num))]

    def eval_sv(self, s, v):
        """Evaluate given ``s = sqrt(x)`` and an accurate ``v = s - 1``."""
        s = np.asarray(s, dtype=float)
        v = np.asarray(v, dtype=float)
        if self.is_zero():
            return np.zeros(np.broadcast(s, v).shape)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            near = np.abs(v) <= self.SHIFT_RADIUS
            if np.all(near):
                val = np.polyval(self._coeffs_v, v)
            elif not np.any(near):
                val = np.polyval(self._coeffs_s, s)
            else:
                val = np.where(near, np.polyval(self._coeffs_v, v), np.polyval(self._coeffs_s, s))
            if self.root:
                val = val * v**self.root
            if self.s_pow:
                val = val / s**self.s_pow
            if self.x1_pow:
                val = val / (1.0 + s * s) ** self.x1_pow
        return val

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        s = np.sqrt(x)
        # s - 1 = (x - 1)/(s + 1) avoids rounding s before the subtraction
        return self.eval_sv(s, (x - 1.0) / (s + 1.0))

    def value_at_one(self) -> Fraction:
        """Exact value at ``x = 1``."""
        if self.root or self.is_zero():
            return Fraction(0)
        return poly_eval_exact(self.num, Fraction(1)) / Fraction(2) ** self.x1_pow

    def leading_at_one(self) -> Tuple[int, Fraction]:
        """Order of vanishing at ``x = 1`` (in ``s - 1``) and the leading coefficient."""
        return self.root, poly_eval_exact(self.num, Fraction(1)) / Fraction(2) ** self.x1_pow


def monomial(power: int, coeff=1) -> SqrtRational:
    """``coeff * s**power`` (negative powers allowed)."""
    if power >= 0:
        return SqrtRational.from_poly([0] * power + [coeff])
    return SqrtRational.from_poly([coeff], s_pow=-power)


def poly_compose(p: Poly, q: Poly) -> Poly:
    """``p(q(s))``."""
    out: Poly = ()
    for c in reversed(p):
        out = poly_add(poly_mul(out, q), (c,))
    return out


def as_sqrt_rational(value) -> SqrtRational:
    """Coerce a polynomial (ascending coefficients) into a SqrtRational."""
    if isinstance(value, SqrtRational):
        return value
    return SqrtRational.from_poly(value)


# ---------------------------------------------------------------------------
# rational functions plus logarithms
# ---------------------------------------------------------------------------

#: Order of the exact logarithm expansion used near ``x = 1``.
LOG_ORDER = 10
#: Range of ``s - 1`` on which the expanded form is used.
LOCAL_RANGE = (-0.35, 0.6)
#: The tail series is summed for ``|z| <= _TAIL_SERIES_RADIUS``; 0.8**180 ~ 4e-18.
_TAIL_SERIES_RADIUS = 0.8
_TAIL_TERMS = 180

_LOG_HEAD: Poly = _poly([0] + [Fraction((-1) ** (j + 1), j) for j in range(1, LOG_ORDER + 1)])
_TAIL_COEFFS = [
    (-1) ** (j + 1) / j for j in range(LOG_ORDER + 1, LOG_ORDER + 1 + _TAIL_TERMS)
]


def log1p_tail(z):
    """``(log1p(z) - sum_{j<=N} (-1)^(j+1) z^j / j) / z^(N+1)`` with ``N = LOG_ORDER``."""
    z = np.asarray(z, dtype=float)
    series = np.polyval(_TAIL_COEFFS[::-1], z)
    small = np.abs(z) <= _TAIL_SERIES_RADIUS
    if np.all(small):
        return series
    head = [float(c) for c in reversed(_LOG_HEAD)]
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (np.log1p(z) - np.polyval(head, z)) / z ** (LOG_ORDER + 1)
    return np.where(small, series, direct)


_V_OF_S: Poly = S_MINUS_1


def _u_power(j: int) -> SqrtRational:
    # u = (1 + s^2)/(2 s) - 1 = (s - 1)^2 / (2 s)
    return SqrtRational.from_poly(
        poly_scale(poly_pow(S_MINUS_1, 2 * j), Fraction(1, 2**j)), s_pow=j
    )


@dataclass(frozen=True)
class LogForm:
    """``R(s) + A(s) ln s + B(s) ln((1 + s^2)/(2 s))`` with ``R`` rational, ``A, B`` polynomials.

    Every logarithmic generator in the catalog has this shape.  The second
    logarithm is ``ln(m / g)`` for the arithmetic mean ``m = (x + 1)/2`` and
    geometric mean ``g = sqrt(x)``, whose argument ``1 + (s - 1)^2/(2 s)`` is
    computed without cancellation.  Near ``s = 1`` the logarithms are split
    into their degree-``LOG_ORDER`` Taylor polynomials, merged exactly into
    ``R``, plus remainders evaluated by series.  That removes the cancellation
    between the rational and logarithmic parts of a difference.
    """

    rat: SqrtRational
    ln_s: Poly = ()
    ln_r: Poly = ()

    @classmethod
    def lift(cls, value) -> "LogForm":
        if isinstance(value, LogForm):
            return value
        return cls(as_sqrt_rational(value))

    def __add__(self, other) -> "LogForm":
        other = LogForm.lift(other)
        return LogForm(self.rat + other.rat, poly_add(self.ln_s, other.ln_s),
                       poly_add(self.ln_r, other.ln_r))

    __radd__ = __add__

    def scale(self, c) -> "LogForm":
        return LogForm(self.rat.scale(c), poly_scale(self.ln_s, c), poly_scale(self.ln_r, c))

    def __rmul__(self, c) -> "LogForm":
        return self.scale(c)

    def __neg__(self) -> "LogForm":
        return self.scale(-1)

    def __sub__(self, other) -> "LogForm":
        return self + (-LogForm.lift(other))

    def is_zero(self) -> bool:
        return self.rat.is_zero() and not self.ln_s and not self.ln_r

    @cached_property
    def _local(self) -> SqrtRational:
        out = self.rat + SqrtRational.from_poly(
            poly_mul(self.ln_s, poly_compose(_LOG_HEAD, _V_OF_S))
        )
        if self.ln_r:
            head_u = SqrtRational(())
            for j in range(1, LOG_ORDER + 1):
                head_u = head_u + _u_power(j).scale(_LOG_HEAD[j])
            for k, c in enumerate(self.ln_r):
                if c:
                    out = out + SqrtRational._normalize(
                        poly_scale(head_u.expanded(), c),
                        head_u.s_pow - k,
                        head_u.x1_pow,
                    )
        return out

    @cached_property
    def _a(self) -> list:
        return [float(c) for c in reversed(self.ln_s)] or [0.0]

    @cached_property
    def _b(self) -> list:
        return [float(c) for c in reversed(self.ln_r)] or [0.0]

    def eval_sv(self, s, v):
        s, v = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(v, dtype=float))
        shape = s.shape
        s, v = s.ravel(), v.ravel()
        u = v * v / (2.0 * s)
        out = np.empty_like(s)
        near = (v >= LOCAL_RANGE[0]) & (v <= LOCAL_RANGE[1])
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            if np.any(near):
                sn, vn, un = s[near], v[near], u[near]
                n1 = LOG_ORDER + 1
                out[near] = (
                    self._local.eval_sv(sn, vn)
                    + np.polyval(self._a, sn) * vn**n1 * log1p_tail(vn)
                    + np.polyval(self._b, sn) * un**n1 * log1p_tail(un)
                )
            far = ~near
            if np.any(far):
                sf, vf, uf = s[far], v[far], u[far]
                out[far] = (
                    self.rat.eval_sv(sf, vf)
                    + np.polyval(self._a, sf) * np.log1p(vf)
                    + np.polyval(self._b, sf) * np.log1p(uf)
                )
        return out.reshape(shape)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        s = np.sqrt(x)
        return self.eval_sv(s, (x - 1.0) / (s + 1.0))
