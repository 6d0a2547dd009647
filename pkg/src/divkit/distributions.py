"""Finite discrete probability distributions with strictly positive mass.

A :class:`Distribution` is a point of the open simplex: ``n >= 2`` strictly
positive entries summing to one.  Empirical counts, which may contain zeros,
enter only through :func:`from_counts_smoothed`.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    AllZeroCountsError,
    DistributionError,
    NonPositiveAlphaError,
    NonPositiveWeightError,
    TooShortError,
)

#: Absolute tolerance on the total mass of a distribution.
SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Distribution:
    """Immutable probability vector with every entry strictly positive."""

    probs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.probs, dtype=float)
        if arr.ndim != 1:
            raise DistributionError("distribution must be one-dimensional")
        if arr.size < 2:
            raise TooShortError(f"need at least 2 outcomes, got {arr.size}")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise NonPositiveWeightError("every probability must be finite and > 0")
        if abs(math.fsum(arr) - 1.0) > SUM_TOL:
            raise DistributionError(f"probabilities sum to {math.fsum(arr)!r}, not 1")
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    @property
    def dim(self) -> int:
        return int(self.probs.size)

    def __len__(self) -> int:
        return self.dim

    def __iter__(self):
        return iter(self.probs.tolist())

    def __getitem__(self, i):
        return self.probs[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        return self.dim == other.dim and bool(np.array_equal(self.probs, other.probs))

    def __hash__(self) -> int:
        return hash(self.probs.tobytes())

    def __repr__(self) -> str:
        return f"Distribution({self.probs.tolist()!r})"

    def tolist(self) -> list:
        return self.probs.tolist()

    def digest(self) -> str:
        """Short stable hash of the exact float values (used in reports)."""
        return hashlib.sha256(self.probs.astype("<f8").tobytes()).hexdigest()[:16]


def _normalize(w: np.ndarray) -> np.ndarray:
    out = w / math.fsum(w)
    # one corrective pass; after it the fsum is within a few ulps of 1
    out = out / math.fsum(out)
    return out


def from_weights(weights: Sequence[float], tol: float = SUM_TOL) -> Distribution:
    """Normalise strictly positive weights into a distribution.

    >>> from_weights([3, 1]).tolist()
    [0.75, 0.25]
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise TooShortError(f"need at least 2 weights, got {w.size}")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise NonPositiveWeightError("every weight must be finite and > 0")
    out = _normalize(w)
    if abs(math.fsum(out) - 1.0) > tol:  # pragma: no cover - guarded by _normalize
        raise DistributionError("normalisation drifted beyond tolerance")
    return Distribution(out)


def from_counts_smoothed(counts: Sequence[float], alpha: float = 0.5) -> Distribution:
    """Additive (Laplace/Jeffreys) smoothing: ``(c_i + alpha) / (sum c + n alpha)``."""
    if not (alpha > 0) or not math.isfinite(alpha):
        raise NonPositiveAlphaError(f"alpha must be > 0, got {alpha!r}")
    c = np.asarray(counts, dtype=float)
    if c.ndim != 1 or c.size < 2:
        raise TooShortError(f"need at least 2 counts, got {c.size}")
    if not np.all(np.isfinite(c)) or np.any(c < 0):
        raise NonPositiveWeightError("counts must be finite and >= 0")
    if not np.any(c > 0):
        raise AllZeroCountsError("at least one count must be positive")
    return from_weights(c + alpha)


def random(dim: int, seed: int) -> Distribution:
    """Uniform draw from the open simplex (normalised exponential spacings)."""
    return Distribution(random_batch(1, dim, seed)[0])


def random_batch(size: int, dim: int, seed) -> np.ndarray:
    """``size`` independent uniform simplex draws as a ``(size, dim)`` array."""
    if dim < 2:
        raise TooShortError(f"dim must be >= 2, got {dim}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    e = rng.standard_exponential((size, dim))
    # an exact zero has probability ~2**-53 per entry; redraw rather than clip
    while np.any(e <= 0):
        bad = e <= 0
        e[bad] = rng.standard_exponential(int(bad.sum()))
    return e / e.sum(axis=1, keepdims=True)
