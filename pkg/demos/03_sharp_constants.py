"""Estimating the sharp constant beta in C_f1 <= beta * C_f2.

The sharp constant is sup_x f1''(x)/f2''(x).  The ratio has a removable 0/0
at x = 1 for difference measures; the estimator resolves it by two-sided
Richardson extrapolation and then scans a compactified grid of (0, inf).
"""

from fractions import Fraction

import divkit as dk
from divkit.bounds import exact_limit_at_one, run_regression

for f1, f2 in [("d:t-delta", "d:k0-delta"), ("d:h-i", "d:k0-delta"),
               ("d:k0-t", "l:5"), ("l:5", "k_t:2"), ("l:6", "d:k0-t")]:
    est = dk.estimate_sup(f1, f2)
    exact = exact_limit_at_one(f1, f2)
    shape = "max at x=1" if est.monotone_ok else "not unimodal"
    print(f"{f1:>10s} / {f2:<10s} beta_hat={est.beta_hat:<12.6g} limit at 1 = {exact}  ({shape})")

# A claimed constant can be stress-tested on random pairs; halving it must break.
for beta in (Fraction(1, 6), Fraction(1, 12)):
    rep = dk.certify("d:h-i", "d:k0-delta", float(beta), trials=5_000)
    print(f"D_hI <= {beta} D_K0Delta: {rep.violations} violations in {rep.trials} trials")

# The full regression table of published constants.
res = run_regression()
hits = sum(r.matches for r in res)
print(f"\nregression: {hits}/{len(res)} published constants reproduced")
for r in res:
    if not r.matches:
        print(f"  {r.entry.label:10s} published {str(r.entry.expected):>5s}  estimated {r.estimate.beta_hat:.6g}")
