"""Compensated summation along the last axis of an array.

Chain checks subtract nearly equal sums, so every ``sum_i`` in the package goes
through Neumaier's variant of Kahan summation.  The loop runs over the summed
axis (the distribution dimension, typically <= 16) and is vectorised over all
leading axes, which keeps batched trial evaluation fast.
"""

from __future__ import annotations

import numpy as np


def compensated_sum(values, axis: int = -1) -> np.ndarray:
    """Neumaier-compensated sum of ``values`` along ``axis``."""
    a = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    if a.shape[-1] == 0:
        return np.zeros(a.shape[:-1])
    total = a[..., 0].copy()
    comp = np.zeros_like(total)
    with np.errstate(invalid="ignore"):
        for k in range(1, a.shape[-1]):
            v = a[..., k]
            t = total + v
            big = np.abs(total) >= np.abs(v)
            comp += np.where(big, (total - t) + v, (v - t) + total)
            total = t
        out = total + comp
    # inf/nan propagate through the plain sum
    bad = ~np.isfinite(total)
    if np.any(bad):
        out = np.where(bad, total, out)
    return out
