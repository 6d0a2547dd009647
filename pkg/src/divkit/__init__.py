"""divkit: f-divergence measures on finite distributions.

Closed forms and generating functions for a catalog of symmetric divergences,
randomized verification of inequality chains among them, and numerical
estimation of the sharp ratio constants between their generators.
"""

__version__ = "0.1.0"

from .distributions import Distribution, from_counts_smoothed, from_weights, random
from .divergences import (
    DivergenceValue,
    closed_form,
    csiszar,
    difference,
    evaluate,
    exp_divergence,
    k_t,
    l_measure,
    partial_sum,
)
from .errors import *  # noqa: F401,F403
from .generators import Generator, MeasureId, WeightedId, f2, generator_for
from .inequalities import ChainSpec, builtin_chains, check_identities, get_chain, run_chain, verify
from .bounds import beta_regression_table, certify, estimate_sup, limit_at_one, lookup, ratio

__all__ = [
    "Distribution", "from_weights", "from_counts_smoothed", "random",
    "DivergenceValue", "closed_form", "csiszar", "evaluate", "difference", "exp_divergence",
    "k_t", "l_measure", "partial_sum",
    "Generator", "MeasureId", "WeightedId", "f2", "generator_for",
    "ChainSpec", "builtin_chains", "get_chain", "run_chain", "verify", "check_identities",
    "beta_regression_table", "certify", "estimate_sup", "limit_at_one", "lookup", "ratio",
]
