"""High-precision reference sums written straight from the defining formulas.

Nothing here imports the package; every value is recomputed with mpmath at
120 significant digits so that near-diagonal differences (which cancel many
leading digits) are still resolved far below double precision.
"""

from fractions import Fraction

import mpmath as mp

mp.mp.dps = 120

# per-coordinate terms t(p, q); a measure is the sum over coordinates
_BASE = {
    "delta": lambda p, q: (p - q) ** 2 / (p + q),
    "hellinger": lambda p, q: (mp.sqrt(p) - mp.sqrt(q)) ** 2 / 2,
    "psi": lambda p, q: (p - q) ** 2 * (p + q) / (p * q),
    "k0": lambda p, q: (p - q) ** 2 / mp.sqrt(p * q),
    "f": lambda p, q: (p * p - q * q) ** 2 / (2 * mp.sqrt((p * q) ** 3)),
    "j": lambda p, q: (p - q) * mp.log(p / q),
    "i": lambda p, q: (p * mp.log(2 * p / (p + q)) + q * mp.log(2 * q / (p + q))) / 2,
    "t": lambda p, q: (p + q) / 2 * mp.log((p + q) / (2 * mp.sqrt(p * q))),
    "b1": lambda p, q: (p - q) ** 4 / mp.sqrt((p * q) ** 3),
    "b2": lambda p, q: (mp.sqrt(p) - mp.sqrt(q)) ** 4 / (p + q),
    "b3": lambda p, q: (mp.sqrt(p) - mp.sqrt(q)) ** 4 / mp.sqrt(p * q),
    "b4": lambda p, q: (p - q) ** 2 * (mp.sqrt(p) - mp.sqrt(q)) ** 2 / ((p + q) * mp.sqrt(p * q)),
    "b5": lambda p, q: (p - q) ** 2 * (mp.sqrt(p) - mp.sqrt(q)) ** 2 / (p * q),
    "b6": lambda p, q: (p - q) ** 4 / (p * q * (p + q)),
    "exp_k": lambda p, q: (p - q) ** 2 / mp.sqrt(p * q) * mp.exp((p - q) ** 2 / (p * q)),
}

CHAIN = {
    "delta": ("delta", Fraction(1, 4)), "i": ("i", Fraction(1)), "h": ("hellinger", Fraction(1)),
    "j": ("j", Fraction(1, 8)), "t": ("t", Fraction(1)), "k0": ("k0", Fraction(1, 8)),
    "psi": ("psi", Fraction(1, 16)), "f": ("f", Fraction(1, 16)),
}
ORDER = ("delta", "i", "h", "j", "t", "k0", "psi", "f")

M_CHAIN = (
    (Fraction(1), "d:h-delta"), (Fraction(1, 2), "d:k0-delta"), (Fraction(1), "d:k0-h"),
    (Fraction(1, 4), "d:psi-delta"), (Fraction(1, 2), "d:psi-k0"), (Fraction(1, 4), "d:f-k0"),
)
L_PAIRS = ((2, 1), (3, 2), (3, 1), (4, 3), (4, 2), (4, 1), (5, 4), (5, 3),
           (5, 2), (5, 1), (6, 5), (6, 4), (6, 3), (6, 2), (6, 1))


def _mpq(c: Fraction):
    return mp.mpf(c.numerator) / c.denominator


def term(name: str, p, q):
    """Reference per-coordinate term of the named measure."""
    p, q = mp.mpf(p), mp.mpf(q)
    if name in _BASE:
        return _BASE[name](p, q)
    if name.startswith("k_t:"):
        t = int(name[4:])
        return (p - q) ** (2 * (t + 1)) / (p * q) ** (mp.mpf(2 * t + 1) / 2)
    if name.startswith("d:"):
        x, y = name[2:].split("-")
        (bx, cx), (by, cy) = CHAIN[x], CHAIN[y]
        return _mpq(cx) * _BASE[bx](p, q) - _mpq(cy) * _BASE[by](p, q)
    if name.startswith("l:"):
        j, i = L_PAIRS[int(name[2:]) - 1]
        (cj, mj), (ci, mi) = M_CHAIN[j - 1], M_CHAIN[i - 1]
        return _mpq(cj) * term(mj, p, q) - _mpq(ci) * term(mi, p, q)
    raise KeyError(name)


def measure(name: str, P, Q):
    return mp.fsum(term(name, p, q) for p, q in zip(P, Q))


def generator(name: str, x):
    """Reference generating function ``f(x) = term(x, 1)``."""
    return term(name, x, 1)


def second_derivative(name: str, x):
    return mp.diff(lambda u: generator(name, u), mp.mpf(x), 2)


def partial_exp(P, Q, T: int):
    return mp.fsum(measure(f"k_t:{t}", P, Q) / mp.factorial(t) for t in range(T + 1))
