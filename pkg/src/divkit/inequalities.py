"""Inequality chains as DAGs and their randomized verification.

A :class:`ChainSpec` is a set of nodes, each a positive linear combination of
catalog measures, and directed edges ``a -> b`` meaning ``node_a <= node_b``
for every pair of distributions.  Bracketed alternatives in a printed chain
become parallel branches: every branch tail of one group connects to every
branch head of the next group.

Verification draws seeded trial pairs (uniform on the simplex, pairs with one
near-zero mass, and near-diagonal pairs), evaluates every node in batch and
reports each edge whose deficit exceeds ``tol * max(1, |lhs|, |rhs|)``.
"""

from __future__ import annotations

import graphlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .distributions import Distribution, random_batch
from .divergences import closed_form_batch
from .errors import UnknownIdError
from .generators import MeasureId

F = Fraction

# ---------------------------------------------------------------------------
# chain data model
# ---------------------------------------------------------------------------


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class ChainNode:
    """``sum_k c_k M_k`` with positive rational ``c_k``."""

    terms: Tuple[Tuple[Fraction, MeasureId], ...]

    def __post_init__(self):
        terms = tuple((F(c), MeasureId.parse(m)) for c, m in self.terms)
        if not terms:
            raise ValueError("a chain node needs at least one term")
        for c, _ in terms:
            if c <= 0:
                raise ValueError(f"chain coefficients must be positive, got {c}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, coeff, measure) -> "ChainNode":
        return cls(((F(coeff), measure),))

    @property
    def label(self) -> str:
        parts = []
        for c, m in self.terms:
            parts.append(m.name if c == 1 else f"{_fmt_coeff(c)}*{m.name}")
        return " + ".join(parts)

    @property
    def measures(self) -> List[MeasureId]:
        return [m for _, m in self.terms]

    def evaluate(self, values: Dict[MeasureId, np.ndarray]) -> np.ndarray:
        out = 0.0
        for c, m in self.terms:
            out = out + float(c) * values[m]
        return out

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class ChainSpec:
    """Named DAG of inequality (or identity) edges between chain nodes."""

    name: str
    nodes: Tuple[ChainNode, ...]
    edges: Tuple[Tuple[int, int], ...]
    description: str = ""
    mode: str = "inequality"  # or "identity": every edge asserts equality
    edge_notes: Tuple[str, ...] = ()

    def __post_init__(self):
        nodes = tuple(n if isinstance(n, ChainNode) else ChainNode(n) for n in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.mode not in ("inequality", "identity"):
            raise ValueError(f"unknown chain mode {self.mode!r}")
        n = len(nodes)
        used = set()
        graph: Dict[int, set] = {i: set() for i in range(n)}
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n) or a == b:
                raise ValueError(f"bad edge ({a}, {b}) in chain {self.name}")
            used.update((a, b))
            graph[b].add(a)
        if used != set(range(n)):
            raise ValueError(f"chain {self.name} has nodes without edges")
        # raises graphlib.CycleError on a cycle
        tuple(graphlib.TopologicalSorter(graph).static_order())
        if self.edge_notes and len(self.edge_notes) != len(edges):
            raise ValueError("edge_notes must match edges")

    @property
    def measures(self) -> List[MeasureId]:
        seen: Dict[MeasureId, None] = {}
        for node in self.nodes:
            for m in node.measures:
                seen.setdefault(m, None)
        return list(seen)

    def edge_label(self, i: int) -> Tuple[str, str]:
        a, b = self.edges[i]
        return self.nodes[a].label, self.nodes[b].label

    def reversed_edge(self, i: int, name: Optional[str] = None) -> "ChainSpec":
        """Two-node chain asserting the opposite of edge ``i`` (a falsification probe)."""
        a, b = self.edges[i]
        return ChainSpec(name or f"{self.name}-reversed-{i}", (self.nodes[b], self.nodes[a]), ((0, 1),))


def _node(coeff, name) -> ChainNode:
    return ChainNode.of(coeff, name)


def linear_chain(name: str, nodes: Sequence[ChainNode], description: str = "") -> ChainSpec:
    return ChainSpec(name, tuple(nodes), tuple((i, i + 1) for i in range(len(nodes) - 1)), description)


def grouped_chain(name: str, groups, description: str = "") -> ChainSpec:
    """Chain of groups; each group is a list of branches, each branch a list of nodes."""
    nodes: List[ChainNode] = []
    edges: List[Tuple[int, int]] = []
    prev_tails: List[int] = []
    for group in groups:
        heads, tails = [], []
        for branch in group:
            idx = []
            for nd in branch:
                nodes.append(nd)
                idx.append(len(nodes) - 1)
            edges.extend(zip(idx, idx[1:]))
            heads.append(idx[0])
            tails.append(idx[-1])
        edges.extend((t, h) for t in prev_tails for h in heads)
        prev_tails = tails
    return ChainSpec(name, tuple(nodes), tuple(edges), description)


def pair_edges(name: str, pairs, description: str = "", mode: str = "inequality") -> ChainSpec:
    """Independent two-node edges ``lhs <= rhs``; ``pairs`` holds (lhs, rhs, note)."""
    nodes, edges, notes = [], [], []
    for lhs, rhs, note in pairs:
        nodes.extend((lhs, rhs))
        edges.append((len(nodes) - 2, len(nodes) - 1))
        notes.append(note)
    return ChainSpec(name, tuple(nodes), tuple(edges), description, mode, tuple(notes))


# ---------------------------------------------------------------------------
# built-in chains
# ---------------------------------------------------------------------------

# (lhs generator, rhs generator, beta, part) for the sharp two-node bounds
DIFF_SHARP_PAIRS = (
    ("d:t-delta", "d:k0-delta", F(1), "i"),
    ("d:h-i", "d:k0-delta", F(1, 6), "ii"),
    ("d:k0-delta", "d:k0-i", F(3, 2), "iii"),
    ("d:j-h", "d:k0-i", F(1, 4), "iv"),
    ("d:k0-i", "d:k0-h", F(4, 3), "v"),
    ("d:k0-h", "d:k0-j", F(3, 2), "vi"),
    ("d:k0-h", "d:psi-delta", F(1, 4), "vii"),
    ("d:k0-j", "d:psi-i", F(1, 5), "viii"),
    ("d:psi-j", "d:psi-k0", F(4, 3), "ix"),
    ("d:psi-k0", "d:f-delta", F(1, 3), "x"),
    ("d:psi-t", "d:f-i", F(3, 8), "xi"),
    ("d:f-delta", "d:f-i", F(9, 8), "xii"),
    ("d:f-i", "d:f-h", F(16, 15), "xiii"),
    ("d:f-h", "d:f-j", F(15, 14), "xiv"),
    ("d:f-j", "d:f-t", F(7, 6), "xv"),
    ("d:f-j", "d:f-k0", F(7, 6), "xvi"),
    ("d:f-t", "d:f-psi", F(2), "xvii"),
    ("d:f-k0", "d:f-psi", F(2), "xviii"),
)

L_SHARP_PAIRS = (
    ("l:1", "l:6", F(1, 2), "i"),
    ("l:1", "d:k0-t", F(3, 2), "ii"),
    ("d:k0-t", "l:5", F(2, 3), "iii"),
    ("l:7", "l:8", F(1), "iv"),
    ("l:7", "l:9", F(1), "v"),
    ("l:8", "l:12", F(1, 3), "vi"),
    ("l:8", "l:13", F(1, 3), "vii"),
    ("l:12", "l:11", F(3, 2), "viii"),
    ("l:13", "l:11", F(3, 2), "ix"),
    ("l:8", "l:14", F(1, 3), "x"),
    ("l:8", "l:15", F(1, 3), "xi"),
    ("l:9", "l:14", F(1, 3), "xii"),
    ("l:9", "l:15", F(1, 3), "xiii"),
    ("l:14", "l:11", F(3, 2), "xiv"),
)

KT_SHARP_PAIRS = (
    ("l:5", "k_t:2", F(1, 2048), "i"),
    ("l:4", "k_t:3", F(1, 32768), "ii"),
)


def _b(*branches):
    return [list(b) for b in branches]


def _n(c, name):
    return _node(c, name)


def _build_chains() -> Dict[str, ChainSpec]:
    c: Dict[str, ChainSpec] = {}
    c["eq15"] = linear_chain("eq15", [
        _n(F(1, 4), "delta"), _n(1, "i"), _n(1, "hellinger"), _n(F(1, 8), "j"),
        _n(1, "t"), _n(F(1, 8), "k0"), _n(F(1, 16), "psi"), _n(F(1, 16), "f"),
    ], "ordering of the eight classical symmetric measures")

    tail21 = [
        _b([_n(F(1, 2), "d:k0-i")]),
        _b([_n(F(2, 3), "d:k0-h")]),
        _b([_n(1, "d:k0-j")], [_n(F(1, 6), "d:psi-delta")]),
        _b([_n(F(1, 5), "d:psi-i")]),
    ]
    tail21b = [
        _b([_n(F(1, 4), "d:psi-j")]),
        _b([_n(F(1, 3), "d:psi-t")], [_n(F(1, 3), "d:psi-k0"), _n(F(1, 9), "d:f-delta")]),
        _b([_n(F(1, 8), "d:f-i")]),
        _b([_n(F(2, 15), "d:f-h")]),
        _b([_n(F(1, 7), "d:f-j")]),
        _b([_n(F(1, 6), "d:f-t")], [_n(F(1, 6), "d:f-k0")]),
        _b([_n(F(1, 3), "d:f-psi")]),
    ]
    c["eq21"] = grouped_chain("eq21", [
        _b([_n(F(1, 3), "d:t-delta")], [_n(2, "d:h-i")]),
        _b([_n(F(1, 3), "d:k0-delta")], [_n(2, "d:j-h")]),
        *tail21, *tail21b,
    ], "differences involving K0, Psi and F")

    c["eq25"] = linear_chain("eq25", [
        _n(1, "d:i-delta"), _n(F(2, 3), "d:h-delta"), _n(F(1, 2), "d:j-delta"),
        _n(F(1, 3), "d:t-delta"), _n(1, "d:t-j"), _n(F(2, 3), "d:t-h"), _n(2, "d:j-h"),
        _n(F(1, 6), "d:psi-delta"), _n(F(1, 5), "d:psi-i"), _n(F(2, 9), "d:psi-h"),
        _n(F(1, 4), "d:psi-j"), _n(F(1, 3), "d:psi-t"),
    ], "differences of the first part of the classical ordering")

    c["eq26"] = linear_chain("eq26", [
        _n(F(2, 3), "d:h-delta"), _n(2, "d:h-i"), _n(1, "d:t-j"),
    ])

    c["eq27"] = grouped_chain("eq27", [
        _b([_n(1, "d:i-delta")]),
        _b([_n(F(2, 3), "d:h-delta")]),
        _b([_n(F(1, 2), "d:j-delta")]),
        _b([_n(F(1, 3), "d:t-delta")], [_n(2, "d:h-i")]),
        _b([_n(F(1, 3), "d:k0-delta")],
           [_n(1, "d:t-j"), _n(F(2, 3), "d:t-h"), _n(2, "d:j-h")]),
        *tail21[:3],
        _b([_n(F(1, 5), "d:psi-i")]),
        _b([_n(F(2, 9), "d:psi-h")]),
        *tail21b,
    ], "unified ordering of the difference measures")

    c["eq28"] = linear_chain("eq28", [
        _n(1, "d:h-delta"), _n(F(1, 2), "d:k0-delta"), _n(1, "d:k0-h"),
        _n(F(1, 4), "d:psi-delta"), _n(F(1, 2), "d:psi-k0"), _n(F(1, 4), "d:f-k0"),
    ], "ordering m1 <= ... <= m6 of the second chain")

    c["eq29"] = linear_chain("eq29", [
        _n(1, "l:1"), _n(F(1, 2), "l:6"), _n(1, "d:k0-t"), _n(1, "l:5"),
    ], "first second-level chain, as printed")

    l7, l8, l9 = _n(1, "l:7"), _n(1, "l:8"), _n(1, "l:9")
    l12, l13 = _n(F(1, 3), "l:12"), _n(F(1, 3), "l:13")
    l11 = _n(F(1, 2), "l:11")
    l14, l15 = _n(F(1, 3), "l:14"), _n(F(1, 3), "l:15")
    nodes30 = (l7, l8, l9, l12, l13, l11, l14, l15)
    edges30 = ((0, 1), (0, 2), (1, 3), (1, 4), (3, 5), (4, 5),
               (1, 6), (1, 7), (2, 6), (2, 7), (6, 5))
    notes30 = ("iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii", "xiii", "xiv")
    c["eq30"] = ChainSpec("eq30", nodes30, edges30, "second second-level chain", edge_notes=notes30)

    c["eq31"] = linear_chain("eq31", [_n(1, "l:5"), _n(F(1, 2048), "k_t:2")])
    c["eq32"] = linear_chain("eq32", [_n(1, "l:4"), _n(F(1, 32768), "k_t:3")])

    c["eq33"] = ChainSpec("eq33", (
        ChainNode(((F(1, 2), "f"),)),
        ChainNode(((F(1), "k0"), (F(1, 4), "k_t:1"))),
    ), ((0, 1),), "F/2 = K0 + K1/4", mode="identity")

    c["eq34"] = linear_chain("eq34", [
        ChainNode(((F(1, 4), "psi"), (F(1), "delta"))),
        ChainNode(((F(1), "k0"), (F(1, 128), "k_t:2"))),
        ChainNode(((F(8), "t"), (F(3, 256), "k_t:2"))),
    ], "bounds involving K0 and K2")
    c["eq35"] = linear_chain("eq35", [
        ChainNode(((F(1, 2), "psi"), (F(32), "hellinger"))),
        ChainNode(((F(2), "delta"), (F(4), "k0"), (F(1, 1024), "k_t:3"))),
        ChainNode(((F(5), "k0"), (F(1, 1024), "k_t:3"))),
    ], "bounds involving K0 and K3")

    c["diff-sharp"] = pair_edges("diff-sharp", [
        (_n(1, a), _n(beta, b), part) for a, b, beta, part in DIFF_SHARP_PAIRS
    ], "sharp two-node bounds")
    c["l-sharp"] = pair_edges("l-sharp", [
        (_n(1, a), _n(beta, b), part) for a, b, beta, part in L_SHARP_PAIRS
    ], "sharp two-node bounds between second-level measures")
    return c


_CHAINS = _build_chains()

#: Chains verified by the chain suite (identity-mode eq33 is separate).
INEQUALITY_CHAINS = ("eq15", "eq21", "eq25", "eq26", "eq27", "eq28", "eq29", "eq30",
                     "eq31", "eq32", "eq34", "eq35")


def builtin_chains() -> List[ChainSpec]:
    return list(_CHAINS.values())


def chain_names() -> List[str]:
    return list(_CHAINS)


def get_chain(name: str) -> ChainSpec:
    try:
        return _CHAINS[name.strip().lower()]
    except KeyError:
        raise UnknownIdError(
            f"unknown chain {name!r}; known: {', '.join(_CHAINS)}"
        ) from None


# ---------------------------------------------------------------------------
# trial generation
# ---------------------------------------------------------------------------

TRIAL_KINDS = ("uniform", "boundary", "diagonal")
#: Smallest mass injected into near-boundary trials.
BOUNDARY_MIN_MASS = 1e-6


@dataclass
class TrialBatch:
    dim: int
    kind: str
    index: np.ndarray  # global trial numbers
    P: np.ndarray
    Q: np.ndarray


def _inject_small_mass(X: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    m, n = X.shape
    j = rng.integers(0, n, size=m)
    mass = 10.0 ** rng.uniform(np.log10(BOUNDARY_MIN_MASS), -2.0, size=m)
    rows = np.arange(m)
    rest = X.copy()
    rest[rows, j] = 0.0
    rest *= ((1.0 - mass) / rest.sum(axis=1))[:, None]
    rest[rows, j] = mass
    return rest / rest.sum(axis=1, keepdims=True)


def _draw(kind: str, m: int, dim: int, rng: np.random.Generator):
    P = random_batch(m, dim, rng)
    if kind == "uniform":
        return P, random_batch(m, dim, rng)
    if kind == "boundary":
        Q = random_batch(m, dim, rng)
        return _inject_small_mass(P, rng), _inject_small_mass(Q, rng)
    eps = 10.0 ** rng.uniform(-3.0, -0.3, size=(m, 1))
    Q = P * np.exp(eps * rng.standard_normal((m, dim)))
    return P, Q / Q.sum(axis=1, keepdims=True)


def trial_batches(trials: int, dims: Sequence[int], seed: int) -> List[TrialBatch]:
    """Deterministic trial pairs; trial ``i`` has dimension ``dims[i % len(dims)]``.

    Kinds rotate every full pass over ``dims``.  Each (dim, kind) group draws
    from its own stream seeded by ``(seed, dim, kind)``, so results do not
    depend on evaluation order.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    dims = [int(d) for d in dims]
    if not dims or min(dims) < 2:
        raise ValueError("dims must be nonempty and >= 2")
    idx = np.arange(trials)
    dim_of = np.asarray(dims)[idx % len(dims)]
    kind_of = (idx // len(dims)) % len(TRIAL_KINDS)
    out = []
    base = int(seed) % 2**64
    for dim in sorted(set(dims)):
        for k, kind in enumerate(TRIAL_KINDS):
            sel = idx[(dim_of == dim) & (kind_of == k)]
            if sel.size == 0:
                continue
            rng = np.random.default_rng(np.random.SeedSequence([base, dim, k]))
            P, Q = _draw(kind, sel.size, dim, rng)
            out.append(TrialBatch(dim, kind, sel, P, Q))
    return out


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ViolationReport:
    chain: str
    edge: Tuple[str, str]
    p: Distribution
    q: Distribution
    lhs: float
    rhs: float
    deficit: float
    trial: int = -1

    def to_dict(self) -> dict:
        return {
            "chain": self.chain,
            "edge": list(self.edge),
            "trial": self.trial,
            "p": self.p.tolist(),
            "q": self.q.tolist(),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "deficit": self.deficit,
        }


@dataclass
class EdgeStat:
    edge: Tuple[str, str]
    note: str = ""
    checked: int = 0
    passed: int = 0
    worst_slack: float = float("inf")  # min of (rhs - lhs)/scale
    worst_trial: int = -1

    def to_dict(self) -> dict:
        return {
            "from": self.edge[0],
            "to": self.edge[1],
            "note": self.note,
            "checked": self.checked,
            "passed": self.passed,
            "violations": self.checked - self.passed,
            "worst_slack": self.worst_slack,
            "worst_trial": self.worst_trial,
        }


@dataclass
class ChainReport:
    chain: str
    mode: str
    trials: int
    dims: List[int]
    seed: int
    tol: float
    edges: List[EdgeStat]
    violations: List[ViolationReport] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return not self.violations

    @property
    def violation_count(self) -> int:
        return len(self.violations)

    def to_dict(self, max_violations: Optional[int] = None) -> dict:
        vs = self.violations if max_violations is None else self.violations[:max_violations]
        return {
            "chain": self.chain,
            "mode": self.mode,
            "trials": self.trials,
            "dims": list(self.dims),
            "seed": self.seed,
            "tol": self.tol,
            "verified": self.verified,
            "violation_count": self.violation_count,
            "edges": [e.to_dict() for e in self.edges],
            "violations": [v.to_dict() for v in vs],
        }


def evaluate_measures(measures: Iterable[MeasureId], P, Q) -> Dict[MeasureId, np.ndarray]:
    return {m: closed_form_batch(m, P, Q) for m in measures}


def run_chain(chain: ChainSpec, trials: int, dims: Sequence[int], seed: int,
              tol: float = 1e-10, batches: Optional[List[TrialBatch]] = None) -> ChainReport:
    """Check every edge of ``chain`` on the seeded trial set."""
    if tol <= 0:
        raise ValueError("tol must be > 0")
    batches = batches if batches is not None else trial_batches(trials, dims, seed)
    notes = chain.edge_notes or ("",) * len(chain.edges)
    stats = [EdgeStat(chain.edge_label(i), notes[i]) for i in range(len(chain.edges))]
    found: List[Tuple[int, int, ViolationReport]] = []
    for batch in batches:
        with np.errstate(all="ignore"):
            values = evaluate_measures(chain.measures, batch.P, batch.Q)
            node_vals = [node.evaluate(values) for node in chain.nodes]
        for ei, (a, b) in enumerate(chain.edges):
            lhs, rhs = node_vals[a], node_vals[b]
            scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
            if chain.mode == "identity":
                gap = np.abs(lhs - rhs)
            else:
                gap = lhs - rhs
            slack = -gap / scale
            bad = ~(gap <= tol * scale)  # NaN counts as a violation
            st = stats[ei]
            st.checked += lhs.size
            st.passed += int(lhs.size - bad.sum())
            finite = np.where(np.isnan(slack), -np.inf, slack)
            k = int(np.argmin(finite))
            if finite[k] < st.worst_slack or (
                finite[k] == st.worst_slack and batch.index[k] < st.worst_trial
            ):
                st.worst_slack = float(finite[k])
                st.worst_trial = int(batch.index[k])
            for r in np.flatnonzero(bad):
                t = int(batch.index[r])
                found.append((t, ei, ViolationReport(
                    chain.name, st.edge,
                    Distribution(batch.P[r]), Distribution(batch.Q[r]),
                    float(lhs[r]), float(rhs[r]), float(gap[r]), t,
                )))
    found.sort(key=lambda item: (item[0], item[1]))
    return ChainReport(chain.name, chain.mode, int(trials), [int(d) for d in dims], int(seed),
                       float(tol), stats, [v for _, _, v in found])


def verify(chain: ChainSpec, trials: int, dims: Sequence[int], seed: int,
           tol: float = 1e-10) -> List[ViolationReport]:
    """All violations of ``chain`` on the seeded trial set (empty: verified)."""
    return run_chain(chain, trials, dims, seed, tol).violations


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdentitySpec:
    """``lhs == rhs`` for every pair.  ``rhs_path`` selects how the right side is evaluated:
    ``closed`` (explicit sums) or ``csiszar`` (generator functional, i.e. the
    chain-difference construction for second-level measures)."""

    name: str
    lhs: ChainNode
    rhs: ChainNode
    verdict_only: bool = False  # report the outcome without counting it as a failure
    rhs_path: str = "closed"


@dataclass
class IdentityResult:
    name: str
    lhs: str
    rhs: str
    max_rel_err: float
    holds: bool
    verdict_only: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "max_rel_err": self.max_rel_err,
            "holds": self.holds,
            "verdict_only": self.verdict_only,
        }


@dataclass
class IdentityReport:
    trials: int
    dims: List[int]
    seed: int
    tol: float
    results: List[IdentityResult]

    @property
    def ok(self) -> bool:
        return all(r.holds for r in self.results if not r.verdict_only)

    def failures(self) -> List[IdentityResult]:
        return [r for r in self.results if not r.holds and not r.verdict_only]

    def result(self, name: str) -> IdentityResult:
        for r in self.results:
            if r.name == name:
                return r
        raise UnknownIdError(f"no identity named {name!r}")

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "dims": list(self.dims),
            "seed": self.seed,
            "tol": self.tol,
            "ok": self.ok,
            "results": [r.to_dict() for r in self.results],
        }


def _one(c, m) -> ChainNode:
    return ChainNode.of(c, m)


def identity_specs() -> List[IdentitySpec]:
    specs = [
        IdentitySpec("b1=32*d:f-k0", _one(1, "b1"), _one(32, "d:f-k0")),
        IdentitySpec("b2=4*d:h-delta", _one(1, "b2"), _one(4, "d:h-delta")),
        IdentitySpec("b3=8*d:k0-h", _one(1, "b3"), _one(8, "d:k0-h")),
        IdentitySpec("b4=8*d:k0-delta", _one(1, "b4"), _one(8, "d:k0-delta")),
        IdentitySpec("b5=16*d:psi-k0", _one(1, "b5"), _one(16, "d:psi-k0")),
        IdentitySpec("b6=16*d:psi-delta", _one(1, "b6"), _one(16, "d:psi-delta")),
        IdentitySpec("eq33", _one(F(1, 2), "f"),
                     ChainNode(((F(1), "k0"), (F(1, 4), "k_t:1")))),
        IdentitySpec("k_t:1=b1", _one(1, "k_t:1"), _one(1, "b1")),
        IdentitySpec("l:2=l:1", _one(1, "l:2"), _one(1, "l:1"), rhs_path="csiszar"),
        IdentitySpec("l:3=2*l:1", _one(1, "l:3"), _one(2, "l:1"), rhs_path="csiszar"),
    ]
    for k in range(1, 16):
        specs.append(IdentitySpec(f"l:{k} simplified=chain", _one(1, f"l:{k}"),
                                  _one(1, f"l:{k}"), rhs_path="csiszar"))
    for k in range(1, 16):
        specs.append(IdentitySpec(f"l:{k} printed=chain", _one(1, f"lp:{k}"),
                                  _one(1, f"l:{k}"), verdict_only=(k == 6), rhs_path="csiszar"))
    return specs


def _evaluate_node(node: ChainNode, P, Q, path: str) -> np.ndarray:
    from .divergences import csiszar_batch
    from .generators import generator_for

    out = 0.0
    for c, m in node.terms:
        v = closed_form_batch(m, P, Q) if path == "closed" else csiszar_batch(generator_for(m), P, Q)
        out = out + float(c) * v
    return out


def _describe(node: ChainNode, path: str) -> str:
    if path == "closed":
        return node.label
    return " + ".join(f"{'' if c == 1 else _fmt_coeff(c) + '*'}C[{m.name}]" for c, m in node.terms)


def check_identities(trials: int = 10_000, dims: Sequence[int] = range(2, 17),
                     seed: int = 0, tol: float = 1e-12,
                     specs: Optional[Sequence[IdentitySpec]] = None) -> IdentityReport:
    """Worst relative disagreement of each identity over seeded trial pairs.

    ``C[m]`` in a right-hand label denotes the generator functional of ``m``;
    for ``l:k`` that is the chain difference ``m_j - m_i`` composed exactly.
    """
    dims = list(dims)
    batches = trial_batches(trials, dims, seed)
    results = []
    for spec in (identity_specs() if specs is None else specs):
        worst = 0.0
        for batch in batches:
            with np.errstate(all="ignore"):
                lhs = _evaluate_node(spec.lhs, batch.P, batch.Q, "closed")
                rhs = _evaluate_node(spec.rhs, batch.P, batch.Q, spec.rhs_path)
                scale = np.maximum(np.abs(lhs), np.abs(rhs))
                err = np.abs(lhs - rhs) / np.where(scale > 0, scale, 1.0)
                err = np.where(np.isnan(err), np.inf, err)
            worst = max(worst, float(np.max(err)))
        results.append(IdentityResult(spec.name, _describe(spec.lhs, "closed"),
                                      _describe(spec.rhs, spec.rhs_path), worst,
                                      worst <= tol, spec.verdict_only))
    return IdentityReport(int(trials), dims, int(seed), float(tol), results)
