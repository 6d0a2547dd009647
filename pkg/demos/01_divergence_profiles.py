"""Divergence profiles along a path of two-point distributions.

Slides Q away from P = (1/2, 1/2) and prints how each classical symmetric
measure grows.  The weighted column order is the one the chain verifier uses,
so each row should read left-to-right nondecreasing.
"""

import numpy as np

import divkit as dk

ORDER = [("delta", 0.25), ("i", 1), ("hellinger", 1), ("j", 0.125),
         ("t", 1), ("k0", 0.125), ("psi", 0.0625), ("f", 0.0625)]

P = dk.from_weights([0.5, 0.5])
print(f"{'q1':>6} " + " ".join(f"{f'{c:g}*{m}':>12}" for m, c in ORDER))
for q1 in np.linspace(0.5, 0.02, 9):
    Q = dk.from_weights([q1, 1 - q1])
    row = [c * dk.closed_form(m, P, Q).value for m, c in ORDER]
    ordered = all(a <= b + 1e-15 for a, b in zip(row, row[1:]))
    print(f"{q1:6.3f} " + " ".join(f"{v:12.5g}" for v in row) + ("" if ordered else "  <- out of order"))

# Two evaluation paths for the same number: direct sum versus sum_i q_i f(p_i/q_i).
P, Q = dk.random(6, seed=1), dk.random(6, seed=2)
print("\nclosed form vs generator functional on a random 6-point pair")
for mid in ["k0", "psi", "d:k0-h", "l:5", "k_t:3", "exp_k"]:
    a = dk.closed_form(mid, P, Q).value
    b = dk.csiszar(dk.generator_for(mid), P, Q).value
    print(f"  {mid:8s} {a:.16g}  {b:.16g}  rel diff {abs(a - b) / abs(a):.1e}")

# The exponential measure as the limit of its series.
# For nearby P and Q the terms fall off quickly; far apart pairs need many more.
P, Q = dk.from_weights([0.3, 0.3, 0.4]), dk.from_weights([0.36, 0.24, 0.4])
print("\nexponential series partial sums")
E = dk.exp_divergence(P, Q).value
for T in (0, 1, 2, 4, 8, 12, 20):
    S = dk.partial_sum(T, P, Q).value
    print(f"  T={T:2d}  S_T={S:.15f}  E-S_T={E - S:.3e}")
