"""Catalog of normalised convex generating functions.

Every measure ``M`` in the catalog is a Csiszár f-divergence
``M(P||Q) = sum_i q_i f(p_i / q_i)`` with ``f(1) = 0``.  Each catalog entry
carries its generating function ``f`` and an exact closed-form second
derivative (a :class:`~divkit.sqrtrational.SqrtRational` in ``s = sqrt(x)``),
so convexity checks and derivative ratios never rely on finite differences.

Identifiers
-----------
Stable string names used throughout the package and the CLI:

* base measures: ``delta``, ``hellinger``, ``psi``, ``k0``, ``f``, ``j``,
  ``i``, ``t``, ``b1`` ... ``b6``, ``exp_k``
* the K_t family: ``k_t:0``, ``k_t:1``, ...
* chain differences: ``d:<x>-<y>`` with ``x`` to the right of ``y`` in the
  ordering ``delta, i, h, j, t, k0, psi, f`` (e.g. ``d:k0-h``)
* second-level differences ``l:1`` ... ``l:15``
* the printed closed forms of the second-level differences, kept for
  cross-checking only: ``lp:1`` ... ``lp:15``
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from .errors import IndexOutOfRangeError, InvalidPairError, NonPositiveXError, UnknownIdError
from .sqrtrational import (
    ONE_PLUS_S2,
    S2_MINUS_1,
    S_MINUS_1,
    LogForm,
    SqrtRational,
    poly_mul,
    poly_pow,
)

F = Fraction

# ---------------------------------------------------------------------------
# identifiers
# ---------------------------------------------------------------------------

BASE_TAGS = (
    "delta", "hellinger", "psi", "k0", "f", "j", "i", "t",
    "b1", "b2", "b3", "b4", "b5", "b6", "exp_k",
)

#: Ordered elements of the first chain with their canonical coefficients.
CHAIN_ORDER = ("delta", "i", "h", "j", "t", "k0", "psi", "f")
CHAIN_COEFFS = {
    "delta": F(1, 4), "i": F(1), "h": F(1), "j": F(1, 8),
    "t": F(1), "k0": F(1, 8), "psi": F(1, 16), "f": F(1, 16),
}
_TOKEN_TO_BASE = {tok: ("hellinger" if tok == "h" else tok) for tok in CHAIN_ORDER}
_BASE_TO_TOKEN = {v: k for k, v in _TOKEN_TO_BASE.items()}
_ALIASES = {"h": "hellinger", "kt": "k_t", "exp": "exp_k", "expk": "exp_k", "e_k": "exp_k"}

#: Second chain: (coefficient, difference name) for m_1 ... m_6.
L_CHAIN = (
    (F(1), "d:h-delta"),
    (F(1, 2), "d:k0-delta"),
    (F(1), "d:k0-h"),
    (F(1, 4), "d:psi-delta"),
    (F(1, 2), "d:psi-k0"),
    (F(1, 4), "d:f-k0"),
)

#: L_k = m_j - m_i, 1-based chain positions (j, i).
L_PAIRS = (
    (2, 1), (3, 2), (3, 1), (4, 3), (4, 2), (4, 1), (5, 4), (5, 3),
    (5, 2), (5, 1), (6, 5), (6, 4), (6, 3), (6, 2), (6, 1),
)

MAX_KT = 64


@dataclass(frozen=True)
class WeightedId:
    """A chain element: one of the eight first-chain measures with its coefficient."""

    token: str
    coeff: Fraction

    def __post_init__(self):
        if self.token not in CHAIN_COEFFS:
            raise UnknownIdError(f"{self.token!r} is not a chain element")
        if F(self.coeff) != CHAIN_COEFFS[self.token]:
            raise InvalidPairError(
                f"coefficient {self.coeff} is not canonical for {self.token} "
                f"(expected {CHAIN_COEFFS[self.token]})"
            )
        object.__setattr__(self, "coeff", F(self.coeff))

    @classmethod
    def of(cls, token: str) -> "WeightedId":
        token = _BASE_TO_TOKEN.get(token, token)
        if token not in CHAIN_COEFFS:
            raise UnknownIdError(f"{token!r} is not a chain element")
        return cls(token, CHAIN_COEFFS[token])

    @property
    def rank(self) -> int:
        return CHAIN_ORDER.index(self.token)

    @property
    def measure(self) -> "MeasureId":
        return MeasureId.base(_TOKEN_TO_BASE[self.token])


@dataclass(frozen=True, order=True)
class MeasureId:
    """Identifier of a catalog measure.

    ``family`` is one of ``base``, ``k_t``, ``diff``, ``l``, ``lp``.
    """

    family: str
    tag: str = ""
    index: int = 0

    # constructors -------------------------------------------------------
    @classmethod
    def base(cls, tag: str) -> "MeasureId":
        tag = _ALIASES.get(tag, tag)
        if tag not in BASE_TAGS:
            raise UnknownIdError(f"unknown base measure {tag!r}")
        return cls("base", tag)

    @classmethod
    def kt(cls, t: int) -> "MeasureId":
        if int(t) != t or t < 0 or t > MAX_KT:
            raise IndexOutOfRangeError(f"K_t index must be an integer in [0, {MAX_KT}], got {t!r}")
        return cls("k_t", "", int(t))

    @classmethod
    def diff(cls, x, y) -> "MeasureId":
        wx = x if isinstance(x, WeightedId) else WeightedId.of(x)
        wy = y if isinstance(y, WeightedId) else WeightedId.of(y)
        if wx.rank <= wy.rank:
            raise InvalidPairError(
                f"D_{wx.token},{wy.token}: {wx.token} must lie to the right of {wy.token} in the chain"
            )
        return cls("diff", f"{wx.token}-{wy.token}")

    @classmethod
    def l(cls, k: int) -> "MeasureId":  # noqa: E743
        if int(k) != k or not 1 <= k <= 15:
            raise IndexOutOfRangeError(f"L index must be in 1..15, got {k!r}")
        return cls("l", "", int(k))

    @classmethod
    def printed_l(cls, k: int) -> "MeasureId":
        if int(k) != k or not 1 <= k <= 15:
            raise IndexOutOfRangeError(f"L index must be in 1..15, got {k!r}")
        return cls("lp", "", int(k))

    @classmethod
    def parse(cls, text) -> "MeasureId":
        if isinstance(text, MeasureId):
            return text
        s = str(text).strip().lower()
        try:
            if ":" in s:
                head, _, arg = s.partition(":")
                head = _ALIASES.get(head, head)
                if head == "k_t":
                    return cls.kt(int(arg))
                if head == "l":
                    return cls.l(int(arg))
                if head == "lp":
                    return cls.printed_l(int(arg))
                if head == "d":
                    x, sep, y = arg.partition("-")
                    if not sep:
                        raise UnknownIdError(f"malformed difference name {text!r}")
                    return cls.diff(x, y)
                raise UnknownIdError(f"unknown measure family in {text!r}")
            return cls.base(s)
        except ValueError as exc:
            if isinstance(exc, (IndexOutOfRangeError, InvalidPairError)):
                raise
            raise UnknownIdError(f"cannot parse measure name {text!r}") from exc

    # accessors ----------------------------------------------------------
    @property
    def name(self) -> str:
        if self.family == "base":
            return self.tag
        if self.family == "k_t":
            return f"k_t:{self.index}"
        if self.family == "diff":
            return f"d:{self.tag}"
        return f"{self.family}:{self.index}"

    def pair(self) -> Tuple[WeightedId, WeightedId]:
        if self.family != "diff":
            raise InvalidPairError(f"{self.name} is not a difference measure")
        x, y = self.tag.split("-")
        return WeightedId.of(x), WeightedId.of(y)

    def __str__(self) -> str:
        return self.name


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    """Normalised convex generating function of a catalog measure.

    ``f2_closed`` is the exact second derivative when known.  ``exact_f`` is
    the symbolic form of ``f`` (rational in ``sqrt(x)``, possibly with
    logarithms) and ``exact_f2`` that of ``f''``; ``f`` always evaluates the
    generating function itself.
    """

    id: MeasureId
    f: Callable
    f2_closed: Optional[Callable] = None
    description: str = ""
    exact_f: Optional[Union[SqrtRational, LogForm]] = field(default=None, repr=False)
    exact_f2: Optional[SqrtRational] = field(default=None, repr=False)
    term_fn: Optional[Callable] = field(default=None, repr=False)

    @property
    def name(self) -> str:
        return self.id.name

    def __call__(self, x):
        return self.f(x)

    def term(self, p, q):
        """``q * f(p/q)`` elementwise, carrying ``sqrt(p/q) - 1`` to full precision."""
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        if self.term_fn is not None:
            return self.term_fn(p, q)
        x = p / q
        if self.exact_f is None:
            with np.errstate(over="ignore", invalid="ignore"):
                return q * self.f(x)
        s = np.sqrt(x)
        v = (p - q) / (q * (1.0 + s))
        return q * self.exact_f.eval_sv(s, v)


def _sr(factors, s_pow=0, x1_pow=0, coeff=1) -> SqrtRational:
    """Build ``coeff * prod(poly**k) / (s**s_pow (1+s^2)**x1_pow)``."""
    num = (F(coeff),)
    for poly, k in factors:
        num = poly_mul(num, poly_pow(tuple(F(c) for c in poly), k))
    return SqrtRational.from_poly(num, s_pow=s_pow, x1_pow=x1_pow)


_S1 = S_MINUS_1          # s - 1
_S21 = S2_MINUS_1        # s^2 - 1
_S41 = (-1, 0, 0, 0, 1)  # s^4 - 1
_SP1 = (1, 1)            # s + 1

_RATIONAL_BASE_F: Dict[str, SqrtRational] = {
    "delta": _sr([(_S21, 2)], x1_pow=1),
    "hellinger": _sr([(_S1, 2)], coeff=F(1, 2)),
    "psi": _sr([(_S21, 2), (ONE_PLUS_S2, 1)], s_pow=2),
    "k0": _sr([(_S21, 2)], s_pow=1),
    "f": _sr([(_S41, 2)], s_pow=3, coeff=F(1, 2)),
    "b1": _sr([(_S21, 4)], s_pow=3),
    "b2": _sr([(_S1, 4)], x1_pow=1),
    "b3": _sr([(_S1, 4)], s_pow=1),
    "b4": _sr([(_S21, 2), (_S1, 2)], s_pow=1, x1_pow=1),
    "b5": _sr([(_S21, 2), (_S1, 2)], s_pow=2),
    "b6": _sr([(_S21, 4)], s_pow=2, x1_pow=1),
}

# second derivatives of the logarithmic generators (rational in s)
_LOG_BASE_F2: Dict[str, SqrtRational] = {
    "j": _sr([(ONE_PLUS_S2, 1)], s_pow=4),
    "i": _sr([], s_pow=2, x1_pow=1, coeff=F(1, 2)),
    "t": _sr([((1, 0, 0, 0, 1), 1)], s_pow=4, x1_pow=1, coeff=F(1, 4)),
}


_HALF = F(1, 2)

# f = R(s) + A(s) ln s + B(s) ln((1 + s^2)/(2 s))
_LOG_BASE_F: Dict[str, LogForm] = {
    # (x - 1) ln x = 2 (s^2 - 1) ln s
    "j": LogForm(SqrtRational(()), (F(-2), F(0), F(2))),
    # (x/2) ln x - ((x+1)/2) ln((x+1)/2) = ((x-1)/2) ln s - ((x+1)/2) ln(m/g)
    "i": LogForm(SqrtRational(()), (-_HALF, F(0), _HALF), (-_HALF, F(0), -_HALF)),
    # ((x+1)/2) ln(m/g)
    "t": LogForm(SqrtRational(()), (), (_HALF, F(0), _HALF)),
}

_DESCRIPTIONS = {
    "delta": "triangular discrimination, f(x) = (x-1)^2/(x+1)",
    "hellinger": "Hellinger discrimination, f(x) = (sqrt(x)-1)^2/2",
    "psi": "symmetric chi-square divergence, f(x) = (x-1)^2(x+1)/x",
    "k0": "f(x) = (x-1)^2/sqrt(x)",
    "f": "f(x) = (x^2-1)^2/(2 x^(3/2))",
    "j": "J-divergence, f(x) = (x-1) ln x",
    "i": "Jensen-Shannon divergence, f(x) = (x/2) ln x - ((x+1)/2) ln((x+1)/2)",
    "t": "arithmetic-geometric mean divergence, f(x) = ((x+1)/2) ln((x+1)/(2 sqrt x))",
    "b1": "f(x) = (x-1)^4/x^(3/2)  (equals K_1)",
    "b2": "f(x) = (sqrt(x)-1)^4/(x+1)",
    "b3": "f(x) = (sqrt(x)-1)^4/sqrt(x)",
    "b4": "f(x) = (x-1)^2 (sqrt(x)-1)^2/((x+1) sqrt(x))",
    "b5": "f(x) = (x-1)^2 (sqrt(x)-1)^2/x",
    "b6": "f(x) = (x-1)^4/(x (x+1))",
    "exp_k": "exponential divergence, f(x) = ((x-1)^2/sqrt(x)) exp((x-1)^2/x)",
}

# K_0 generator and its derivatives, used by the exponential divergence
_K0 = _RATIONAL_BASE_F["k0"]
_K0_1 = _K0.d_dx()
_K0_2 = _K0_1.d_dx()


def _f_exp(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        return _K0(x) * np.exp((x - 1.0) ** 2 / x)


def _f2_exp(x):
    x = np.asarray(x, dtype=float)
    u = (x - 1.0) ** 2 / x
    du = 1.0 - 1.0 / x**2
    d2u = 2.0 / x**3
    with np.errstate(over="ignore", invalid="ignore"):
        return np.exp(u) * (_K0_2(x) + 2.0 * _K0_1(x) * du + _K0(x) * (d2u + du**2))


def _term_exp(p, q):
    x = p / q
    s = np.sqrt(x)
    v = (p - q) / (q * (1.0 + s))
    dx = (p - q) / q
    with np.errstate(over="ignore"):
        return q * _K0.eval_sv(s, v) * np.exp(dx * dx / x)


def _rational_generator(mid: MeasureId, exact_f: SqrtRational, description: str) -> Generator:
    exact_f2 = exact_f.d_dx().d_dx()
    return Generator(mid, exact_f, exact_f2, description, exact_f, exact_f2)


def _base_generator(tag: str) -> Generator:
    mid = MeasureId.base(tag)
    desc = _DESCRIPTIONS[tag]
    if tag in _RATIONAL_BASE_F:
        return _rational_generator(mid, _RATIONAL_BASE_F[tag], desc)
    if tag in _LOG_BASE_F:
        f2 = _LOG_BASE_F2[tag]
        return Generator(mid, _LOG_BASE_F[tag], f2, desc, _LOG_BASE_F[tag], f2)
    return Generator(mid, _f_exp, _f2_exp, desc, term_fn=_term_exp)


def _kt_generator(t: int) -> Generator:
    exact = _sr([(_S21, 2 * t + 2)], s_pow=2 * t + 1)
    desc = f"K_{t}: f(x) = (x-1)^{2 * t + 2}/x^({2 * t + 1}/2)"
    return _rational_generator(MeasureId.kt(t), exact, desc)


def combine(mid: MeasureId, terms, description: str = "") -> Generator:
    """Linear combination ``sum c_k g_k`` of generators, composed exactly."""
    terms = [(F(c), g) for c, g in terms]
    exact_f2 = None
    if all(g.exact_f2 is not None for _, g in terms):
        exact_f2 = SqrtRational(())
        for c, g in terms:
            exact_f2 = exact_f2 + g.exact_f2.scale(c)
    if all(g.exact_f is not None for _, g in terms):
        if any(isinstance(g.exact_f, LogForm) for _, g in terms):
            exact_f = LogForm(SqrtRational(()))
        else:
            exact_f = SqrtRational(())
        for c, g in terms:
            exact_f = exact_f + g.exact_f.scale(c)
        f = exact_f
    else:
        exact_f = None
        funcs = [(float(c), g.f) for c, g in terms]

        def f(x, _funcs=funcs):
            x = np.asarray(x, dtype=float)
            out = np.zeros_like(x)
            for c, fn in _funcs:
                out = out + c * fn(x)
            return out

    return Generator(mid, f, exact_f2, description, exact_f, exact_f2)


def _diff_generator(mid: MeasureId) -> Generator:
    x, y = mid.pair()
    gx = generator_for(x.measure)
    gy = generator_for(y.measure)
    desc = f"D_{x.token},{y.token} = {x.coeff} {x.token} - {y.coeff} {y.token}"
    return combine(mid, [(x.coeff, gx), (-y.coeff, gy)], desc)


def _chain_member(j: int) -> Tuple[Fraction, Generator]:
    c, name = L_CHAIN[j - 1]
    return c, generator_for(MeasureId.parse(name))


def _l_generator(k: int) -> Generator:
    j, i = L_PAIRS[k - 1]
    cj, gj = _chain_member(j)
    ci, gi = _chain_member(i)
    desc = f"L_{k} = m_{j} - m_{i} = {cj} {gj.name} - {ci} {gi.name}"
    return combine(MeasureId.l(k), [(cj, gj), (-ci, gi)], desc)


# Closed forms of the second-level differences as printed in the source text,
# with q = 1, p = x = s^2.  Several are inconsistent with the chain
# differences they are stated to equal (see divkit.divergences.PRINTED_L_VERDICT).
def _printed_l_exact(k: int) -> SqrtRational:
    a = _S1                       # sqrt(p) - sqrt(q)
    S = ONE_PLUS_S2               # p + q
    sq = (0, 1)                   # sqrt(p q)
    if k in (1, 2):
        return _sr([(a, 6)], s_pow=1, x1_pow=1, coeff=F(1, 16))
    if k == 3:
        return _sr([(a, 6)], s_pow=1, x1_pow=1, coeff=F(1, 8))
    if k == 4:
        return _sr([(a, 8)], s_pow=2, x1_pow=1, coeff=F(1, 64))
    if k == 5:
        return _sr([(_S21, 2), (a, 4)], s_pow=2, x1_pow=1, coeff=F(1, 64))
    if k == 6:
        return _sr([((1, 6, 1), 1), (a, 2)], s_pow=2, x1_pow=1, coeff=F(1, 64))
    if k == 7:
        return _sr([((3, -2, 3), 1), (_S21, 2), (a, 2)], s_pow=2, x1_pow=1, coeff=F(1, 64))
    if k == 8:
        return _sr([(S, 1), (a, 4)], s_pow=2, coeff=F(1, 16))
    if k == 9:
        return _sr([(_S21, 2), ((1, -1, 1), 1), (a, 2)], s_pow=2, x1_pow=1, coeff=F(1, 16))
    if k == 10:
        # [sqrt(pq)(p+q) + (sqrt p - sqrt q)^2] (sqrt p - sqrt q)^4
        return _sr([((1, -1, 1, 1), 1), (a, 4)], s_pow=2, x1_pow=1, coeff=F(1, 16))
    if k == 11:
        return _sr([(S, 1), (_S21, 2), (a, 2)], s_pow=3, coeff=F(1, 32))
    if k == 12:
        # p + q + sqrt(pq) + (sqrt p - sqrt q)^2 = 2p + 2q - sqrt(pq)
        return _sr([((2, -1, 2), 1), (_S21, 4)], s_pow=3, x1_pow=1, coeff=F(1, 64))
    if k == 13:
        return _sr([(S, 1), ((1, 4, 1), 1), (a, 4)], s_pow=3, x1_pow=1, coeff=F(1, 64))
    if k == 14:
        return _sr([((1, 2, 0, 2, 1), 1), (_SP1, 2), (a, 4)], s_pow=3, x1_pow=1, coeff=F(1, 32))
    # k == 15: p^3 + q^3 + 4 sqrt(pq)(p^2 + q^2) + 7 pq (p + q)
    return _sr([((1, 4, 7, 0, 7, 4, 1), 1), (_SP1, 2), (a, 4)], s_pow=3, x1_pow=1, coeff=F(1, 32))


@lru_cache(maxsize=None)
def generator_for(mid) -> Generator:
    """Catalog entry for a measure id (or its stable string name)."""
    mid = MeasureId.parse(mid)
    if mid.family == "base":
        return _base_generator(mid.tag)
    if mid.family == "k_t":
        return _kt_generator(mid.index)
    if mid.family == "diff":
        return _diff_generator(mid)
    if mid.family == "l":
        return _l_generator(mid.index)
    if mid.family == "lp":
        return _rational_generator(
            mid, _printed_l_exact(mid.index), f"printed closed form of L_{mid.index}"
        )
    raise UnknownIdError(f"unknown measure family {mid.family!r}")


def l_generator(k: int) -> Generator:
    """Generator of L_k built as the chain difference m_j - m_i."""
    return generator_for(MeasureId.l(k))


def chain_difference_ids() -> List[MeasureId]:
    """The 28 ordered differences of the first chain."""
    out = []
    for j in range(1, len(CHAIN_ORDER)):
        for i in range(j):
            out.append(MeasureId.diff(CHAIN_ORDER[j], CHAIN_ORDER[i]))
    return out


def catalog_ids(max_t: int = 5) -> List[MeasureId]:
    """Every catalog measure in registry order."""
    ids = [MeasureId.base(t) for t in BASE_TAGS]
    ids += [MeasureId.kt(t) for t in range(max_t + 1)]
    ids += chain_difference_ids()
    ids += [MeasureId.l(k) for k in range(1, 16)]
    return ids


# ---------------------------------------------------------------------------
# second derivatives
# ---------------------------------------------------------------------------

#: Relative step of the fallback central difference.
FD_REL_STEP = 1e-3


def finite_difference_f2(f: Callable, x) -> np.ndarray:
    """Five-point central second difference with step ``FD_REL_STEP * x``."""
    x = np.asarray(x, dtype=float)
    h = FD_REL_STEP * x
    f0 = f(x)
    f1p, f1m = f(x + h), f(x - h)
    f2p, f2m = f(x + 2 * h), f(x - 2 * h)
    return (-f2p + 16 * f1p - 30 * f0 + 16 * f1m - f2m) / (12 * h * h)


def f2(gen: Generator, x):
    """Second derivative of ``gen.f`` at ``x > 0`` (closed form when available)."""
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise NonPositiveXError(f"x must be > 0, got {x!r}")
    fn = gen.f2_closed if gen.f2_closed is not None else (lambda t: finite_difference_f2(gen.f, t))
    out = fn(arr)
    return float(out) if np.ndim(x) == 0 else out


# Second derivatives printed for the thirteen differences studied for
# convexity, transcribed with q = 1, p = x = s^2.  Used as regression data.
_P5 = (3, 6, 20, 34, 66, 34, 20, 6, 3)           # coefficients of x^4 ... 1 in half powers
_PFD = (15, 30, 90, 150, 257, 364, 492, 364, 257, 150, 90, 30, 15)


def _desc(coeffs):
    # coefficients listed from the highest half-power down to the constant
    return tuple(reversed(coeffs))


PRINTED_SECOND_DERIVATIVES: Dict[str, SqrtRational] = {
    "d:k0-t": _sr([((3, 4, 3), 1), (_S1, 4)], s_pow=5, x1_pow=1, coeff=F(1, 32)),
    "d:k0-j": _sr([((3, 2, 3), 1), (_S1, 2)], s_pow=5, coeff=F(1, 32)),
    "d:k0-h": _sr([(_S21, 2)], s_pow=5, coeff=F(3, 32)),
    "d:k0-i": _sr([((3, 6, 14, 6, 3), 1), (_S1, 2)], s_pow=5, x1_pow=1, coeff=F(1, 32)),
    "d:k0-delta": _sr([(_desc(_P5), 1), (_S1, 2)], s_pow=5, x1_pow=3, coeff=F(1, 32)),
    "d:psi-k0": _sr([((4, 5, 6, 5, 4), 1), (_S1, 2)], s_pow=6, coeff=F(1, 32)),
    "d:f-psi": _sr([((15, 14, 13, 12, 13, 14, 15), 1), (_S1, 2)], s_pow=7, coeff=F(1, 128)),
    "d:f-k0": _sr([((5, 0, 6, 0, 5), 1), (_S21, 2)], s_pow=7, coeff=F(3, 128)),
    "d:f-t": _sr([((15, 30, 60, 58, 58, 58, 60, 30, 15), 1), (_S1, 2)], s_pow=7, x1_pow=1,
                 coeff=F(1, 128)),
    "d:f-j": _sr([((15, 30, 45, 44, 45, 30, 15), 1), (_S1, 2)], s_pow=7, coeff=F(1, 128)),
    "d:f-h": _sr([(_S41, 2)], s_pow=7, coeff=F(15, 128)),
    "d:f-i": _sr([((15, 30, 60, 90, 122, 90, 60, 30, 15), 1), (_S1, 2)], s_pow=7, x1_pow=1,
                 coeff=F(1, 128)),
    "d:f-delta": _sr([(_desc(_PFD), 1), (_S1, 2)], s_pow=7, x1_pow=3, coeff=F(1, 128)),
}


def convexity_margin(gen: Generator, xs) -> float:
    """Smallest sampled value of ``f''`` (``>= 0`` for a convex generator)."""
    vals = np.asarray(f2(gen, np.asarray(xs, dtype=float)), dtype=float)
    vals = vals[~np.isnan(vals)]
    return float(np.min(vals)) if vals.size else math.nan
