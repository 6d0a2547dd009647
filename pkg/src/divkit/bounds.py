"""Numerical ratio bounds between f-divergences.

If ``alpha <= f1''(x)/f2''(x) <= beta`` on ``(0, inf)`` then
``alpha C_f2 <= C_f1 <= beta C_f2`` for all pairs of distributions.  This
module estimates ``alpha`` and ``beta`` by sampling ``g = f1''/f2''`` on a
compactified grid, handles the removable singularity at ``x = 1`` (both second
derivatives of a difference generator vanish there) by two-sided Richardson
extrapolation, checks unimodality, and certifies the resulting inequality on
random pairs.
"""

from __future__ import annotations

import math
import unicodedata
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .divergences import csiszar_batch
from .errors import OneSidedMismatchError, UnknownIdError, ZeroDenominatorError
from .generators import Generator, MeasureId, f2 as second_derivative, generator_for
from .inequalities import DIFF_SHARP_PAIRS, L_SHARP_PAIRS, KT_SHARP_PAIRS, trial_batches

F = Fraction

#: Half-width of the window around x = 1 where ``ratio`` returns the limit.
SINGULAR_WINDOW = 1e-3
#: Base step and number of halvings for the Richardson tableau.
RICHARDSON_H0 = 1e-2
RICHARDSON_LEVELS = 9
ONE_SIDED_TOL = 1e-6
MONOTONE_SLACK = 1e-9

GenLike = Union[Generator, MeasureId, str]


def _gen(g: GenLike) -> Generator:
    return g if isinstance(g, Generator) else generator_for(g)


def _vanishes_at_one(g: Generator) -> bool:
    if g.exact_f2 is not None:
        return g.exact_f2.value_at_one() == 0
    return abs(float(second_derivative(g, 1.0))) < 1e-12


def _raw_ratio(g1: Generator, g2: Generator, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return np.asarray(second_derivative(g1, x), dtype=float) / np.asarray(
            second_derivative(g2, x), dtype=float
        )


def _richardson(values: Sequence[float]) -> float:
    """Extrapolate ``g(h_k)`` with ``h_k = h0 / 2**k`` to ``h = 0`` (error ~ c1 h + c2 h^2 + ...)."""
    table = list(values)
    best = table[-1]
    for order in range(1, len(table)):
        factor = 2.0**order
        table = [(factor * table[i + 1] - table[i]) / (factor - 1.0) for i in range(len(table) - 1)]
        best = table[-1]
    return float(best)


def limit_at_one(f1: GenLike, f2: GenLike) -> float:
    """Two-sided limit of ``f1''/f2''`` at ``x = 1`` by Richardson extrapolation."""
    g1, g2 = _gen(f1), _gen(f2)
    hs = RICHARDSON_H0 / 2.0 ** np.arange(RICHARDSON_LEVELS)
    right = _richardson(_raw_ratio(g1, g2, 1.0 + hs))
    left = _richardson(_raw_ratio(g1, g2, 1.0 - hs))
    if not (math.isfinite(left) and math.isfinite(right)):
        raise OneSidedMismatchError(
            f"ratio {g1.name}/{g2.name} has no finite limit at x = 1 (left {left}, right {right})"
        )
    if abs(left - right) > ONE_SIDED_TOL * max(1.0, abs(left), abs(right)):
        raise OneSidedMismatchError(
            f"one-sided limits of {g1.name}/{g2.name} at x = 1 disagree: {left!r} vs {right!r}"
        )
    return 0.5 * (left + right)


def exact_limit_at_one(f1: GenLike, f2: GenLike) -> Optional[Fraction]:
    """Exact limit from the symbolic second derivatives, when both are known exactly."""
    g1, g2 = _gen(f1), _gen(f2)
    if g1.exact_f2 is None or g2.exact_f2 is None:
        return None
    r1, c1 = g1.exact_f2.leading_at_one()
    r2, c2 = g2.exact_f2.leading_at_one()
    if c2 == 0 or r1 < r2:
        return None
    return F(0) if r1 > r2 else c1 / c2


def ratio(f1: GenLike, f2: GenLike, x: float) -> float:
    """``f1''(x)/f2''(x)``; near ``x = 1`` with both vanishing, the limit."""
    g1, g2 = _gen(f1), _gen(f2)
    x = float(x)
    if abs(x - 1.0) <= SINGULAR_WINDOW and _vanishes_at_one(g1) and _vanishes_at_one(g2):
        return limit_at_one(g1, g2)
    den = float(second_derivative(g2, x))
    if den == 0.0:
        raise ZeroDenominatorError(f"{g2.name}'' vanishes at x = {x!r}")
    return float(second_derivative(g1, x)) / den


# ---------------------------------------------------------------------------
# supremum estimation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """``n_u`` points ``x = u/(1-u)`` at ``u = (k + 1/2)/n_u`` plus ``n_log`` log-spaced points."""

    n_u: int = 10_000
    n_log: int = 2_001
    log_min: float = 1e-8
    log_max: float = 1e8

    def points(self) -> np.ndarray:
        u = (np.arange(self.n_u) + 0.5) / self.n_u
        xs = np.concatenate([u / (1.0 - u), np.geomspace(self.log_min, self.log_max, self.n_log)])
        return np.unique(xs)

    def to_dict(self) -> dict:
        return {"n_u": self.n_u, "n_log": self.n_log, "log_min": self.log_min, "log_max": self.log_max}


@dataclass
class BoundEstimate:
    pair: Tuple[str, str]
    beta_hat: float
    alpha_hat: float
    argmax: float
    argmin: float
    limit_at_one: float
    monotone_ok: bool
    grid: GridSpec = field(default_factory=GridSpec)
    n_points: int = 0
    n_dropped: int = 0
    sample_max: float = float("nan")
    sample_min: float = float("nan")

    @property
    def name(self) -> str:
        return f"{self.pair[0]}/{self.pair[1]}"

    def to_dict(self) -> dict:
        return {
            "ratio": self.name,
            "beta_hat": self.beta_hat,
            "alpha_hat": self.alpha_hat,
            "argmax": self.argmax,
            "argmin": self.argmin,
            "limit_at_one": self.limit_at_one,
            "monotone_ok": self.monotone_ok,
            "grid": {**self.grid.to_dict(), "n_points": self.n_points, "n_dropped": self.n_dropped},
            "sample_max": self.sample_max,
            "sample_min": self.sample_min,
        }


def _is_monotone(xs: np.ndarray, g: np.ndarray) -> bool:
    def ok(vals: np.ndarray, sign: float) -> bool:
        if vals.size < 2:
            return True
        steps = sign * np.diff(vals)
        scale = np.maximum(1.0, np.abs(vals[1:]))
        return bool(np.all(steps >= -MONOTONE_SLACK * scale))

    return ok(g[xs < 1.0], 1.0) and ok(g[xs > 1.0], -1.0)


def estimate_sup(f1: GenLike, f2: GenLike, grid: Optional[GridSpec] = None) -> BoundEstimate:
    """Sampled ``inf`` and ``sup`` of ``f1''/f2''`` over ``(0, inf)``."""
    g1, g2 = _gen(f1), _gen(f2)
    grid = grid or GridSpec()
    xs = grid.points()
    singular = _vanishes_at_one(g1) and _vanishes_at_one(g2)
    if singular:
        xs = xs[np.abs(xs - 1.0) > SINGULAR_WINDOW]
    g = _raw_ratio(g1, g2, xs)
    keep = np.isfinite(g)
    dropped = int((~keep).sum())
    xs, g = xs[keep], g[keep]
    lim = limit_at_one(g1, g2)
    imax = int(np.argmax(g)) if g.size else -1
    imin = int(np.argmin(g)) if g.size else -1
    smax = float(g[imax]) if g.size else -math.inf
    smin = float(g[imin]) if g.size else math.inf
    beta = max(smax, lim)
    alpha = min(smin, lim)
    argmax = float(xs[imax]) if smax > lim else 1.0
    argmin = float(xs[imin]) if smin < lim else 1.0
    return BoundEstimate((g1.name, g2.name), float(beta), float(alpha), argmax, argmin,
                         float(lim), _is_monotone(xs, g), grid, int(xs.size), dropped, smax, smin)


def scaled(gen: GenLike, c) -> Generator:
    """``c * f`` as a generator (used to check linearity of the bound)."""
    from .generators import combine

    g = _gen(gen)
    return combine(MeasureId(g.id.family, g.id.tag, g.id.index), [(F(c), g)],
                   f"{c} * {g.name}")


# ---------------------------------------------------------------------------
# certification on random pairs
# ---------------------------------------------------------------------------


@dataclass
class CertifyReport:
    pair: Tuple[str, str]
    beta: float
    trials: int
    violations: int
    worst_ratio: float
    worst_trial: int
    worst_deficit: float
    witness: Optional[Tuple[List[float], List[float]]] = None
    alpha_checked: Optional[float] = None
    alpha_violations: int = 0

    @property
    def certified(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "ratio": f"{self.pair[0]}/{self.pair[1]}",
            "beta": self.beta,
            "trials": self.trials,
            "violations": self.violations,
            "worst_ratio": self.worst_ratio,
            "worst_trial": self.worst_trial,
            "worst_deficit": self.worst_deficit,
            "witness": None if self.witness is None else {"p": self.witness[0], "q": self.witness[1]},
            "alpha": self.alpha_checked,
            "alpha_violations": self.alpha_violations,
        }


def certify(f1: GenLike, f2: GenLike, beta: float, trials: int = 10_000,
            dims: Sequence[int] = range(2, 17), seed: int = 0, tol: float = 1e-10,
            alpha: Optional[float] = None) -> CertifyReport:
    """Check ``C_f1 <= beta C_f2`` (and optionally ``alpha C_f2 <= C_f1``) on random pairs."""
    g1, g2 = _gen(f1), _gen(f2)
    beta = float(beta)
    violations = alpha_viol = 0
    worst_ratio, worst_trial, worst_def = -math.inf, -1, -math.inf
    witness = None
    for batch in trial_batches(trials, list(dims), seed):
        with np.errstate(all="ignore"):
            c1 = csiszar_batch(g1, batch.P, batch.Q)
            c2 = csiszar_batch(g2, batch.P, batch.Q)
        rhs = beta * c2
        scale = np.maximum(1.0, np.maximum(np.abs(c1), np.abs(rhs)))
        gap = c1 - rhs
        bad = ~(gap <= tol * scale)
        violations += int(bad.sum())
        with np.errstate(all="ignore"):
            r = np.where(c2 > 0, c1 / c2, -np.inf)
        k = int(np.argmax(r))
        if r[k] > worst_ratio:
            worst_ratio, worst_trial = float(r[k]), int(batch.index[k])
        kd = int(np.argmax(gap / scale))
        d = float(gap[kd] / scale[kd])
        if d > worst_def:
            worst_def = d
            if bad[kd]:
                witness = (batch.P[kd].tolist(), batch.Q[kd].tolist())
        if alpha is not None:
            low = float(alpha) * c2
            alpha_viol += int((~(low - c1 <= tol * np.maximum(1.0, np.abs(low)))).sum())
    return CertifyReport((g1.name, g2.name), beta, int(trials), violations, worst_ratio,
                         worst_trial, worst_def, witness,
                         None if alpha is None else float(alpha), alpha_viol)


# ---------------------------------------------------------------------------
# regression table of published constants
# ---------------------------------------------------------------------------

_SUB = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")
_LABEL_TOKEN = {
    "delta": "Δ", "i": "I", "h": "h", "j": "J", "t": "T", "k0": "K₀", "psi": "Ψ", "f": "F",
}
_DIGITS = "₀₁₂₃₄₅₆₇₈₉"


def _sub(n: int) -> str:
    return "".join(_DIGITS[int(c)] for c in str(n))


def _short(name: str) -> str:
    mid = MeasureId.parse(name)
    if mid.family == "diff":
        x, y = mid.tag.split("-")
        return _LABEL_TOKEN[x] + _LABEL_TOKEN[y]
    if mid.family == "l":
        return f"L{_sub(mid.index)}"
    if mid.family == "k_t":
        return f"K{_sub(mid.index)}"
    return name


def _label(a: str, b: str, group: str) -> str:
    sa, sb = _short(a), _short(b)
    if group == "l" and MeasureId.parse(a).family == "diff":
        sa = "D" + sa
    if group == "l" and MeasureId.parse(b).family == "diff":
        sb = "D" + sb
    return f"{sa}_{sb}"


@dataclass(frozen=True)
class RegressionEntry:
    label: str
    numerator: str
    denominator: str
    expected: Fraction
    group: str
    part: str

    @property
    def ratio_name(self) -> str:
        return f"{self.numerator}/{self.denominator}"

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "ratio": self.ratio_name,
            "expected": str(self.expected),
            "group": self.group,
            "part": self.part,
        }


def beta_regression_table() -> List[RegressionEntry]:
    """The 34 published sharp constants, grouped as difference, second-level and K_t bounds."""
    out = []
    for group, pairs in (("diff", DIFF_SHARP_PAIRS), ("l", L_SHARP_PAIRS), ("kt", KT_SHARP_PAIRS)):
        for a, b, beta, part in pairs:
            out.append(RegressionEntry(_label(a, b, group), a, b, F(beta), group, part))
    return out


def _ascii(label: str) -> str:
    s = label.translate(_SUB).replace("Δ", "delta").replace("Ψ", "psi")
    s = unicodedata.normalize("NFKD", s)
    return "".join(ch for ch in s if ch.isalnum() or ch in "_/:-").lower()


def _index() -> Dict[str, RegressionEntry]:
    idx: Dict[str, RegressionEntry] = {}
    for e in beta_regression_table():
        idx.setdefault(e.label, e)
        idx.setdefault(_ascii(e.label), e)
        idx.setdefault(e.ratio_name, e)
    return idx


def lookup_entry(key: str) -> RegressionEntry:
    idx = _index()
    for cand in (key, key.strip(), _ascii(key)):
        if cand in idx:
            return idx[cand]
    raise UnknownIdError(f"no tabled constant for {key!r}")


def lookup(key: str) -> Fraction:
    """Published constant by label (``"K₀J_ΨI"``, ``"K0J_PsiI"``) or ratio name."""
    return lookup_entry(key).expected


def parse_ratio(text: str) -> Tuple[Generator, Generator]:
    """``"d:t-delta/d:k0-delta"`` -> the two generators."""
    a, sep, b = text.partition("/")
    if not sep or not a.strip() or not b.strip():
        raise UnknownIdError(f"ratio must look like 'num/den', got {text!r}")
    return generator_for(a.strip()), generator_for(b.strip())


@dataclass
class RegressionResult:
    entry: RegressionEntry
    estimate: BoundEstimate
    matches: bool
    exact_limit: Optional[Fraction]

    def to_dict(self) -> dict:
        d = self.entry.to_dict()
        d.update({
            "beta_hat": self.estimate.beta_hat,
            "limit_at_one": self.estimate.limit_at_one,
            "exact_limit": None if self.exact_limit is None else str(self.exact_limit),
            "monotone_ok": self.estimate.monotone_ok,
            "argmax": self.estimate.argmax,
            "matches": self.matches,
        })
        return d


def beta_tolerance(expected: Fraction) -> float:
    """Acceptance tolerance: 1e-6 * max(1, beta), tightened to 1e-9 for tiny constants."""
    e = float(expected)
    return 1e-9 if e < 1e-3 else 1e-6 * max(1.0, e)


def _with_l_source(name: str, l_source: str) -> str:
    if l_source == "printed" and name.startswith("l:"):
        return "lp:" + name[2:]
    return name


def run_regression(grid: Optional[GridSpec] = None, l_source: str = "chain") -> List[RegressionResult]:
    """Estimate every tabled constant.

    ``l_source="printed"`` swaps each L measure for its printed closed form,
    which is how the second-level constants appear to have been derived.
    """
    if l_source not in ("chain", "printed"):
        raise ValueError(f"l_source must be 'chain' or 'printed', got {l_source!r}")
    out = []
    for entry in beta_regression_table():
        num = _with_l_source(entry.numerator, l_source)
        den = _with_l_source(entry.denominator, l_source)
        try:
            est = estimate_sup(num, den, grid)
        except OneSidedMismatchError:
            if l_source == "chain":
                raise
            est = BoundEstimate((num, den), math.nan, math.nan, math.nan, math.nan, math.nan,
                                False, grid or GridSpec())
        ok = abs(est.beta_hat - float(entry.expected)) <= beta_tolerance(entry.expected)
        out.append(RegressionResult(entry, est, bool(ok and est.monotone_ok),
                                    exact_limit_at_one(num, den)))
    return out
