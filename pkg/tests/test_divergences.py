import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from divkit import divergences as dv
from divkit.distributions import from_weights, random_batch
from divkit.errors import DimensionMismatchError, DivergenceOverflowError, InvalidPairError
from divkit.generators import MeasureId, WeightedId, catalog_ids, generator_for

P0, Q0 = [0.75, 0.25], [0.25, 0.75]
ALL = [m.name for m in catalog_ids(5)]
FINITE = [n for n in ALL if n != "exp_k"]


def _pairs(rng, n=12):
    out = []
    for k in range(n):
        dim = 2 + k % 7
        P, Q = random_batch(2, dim, rng)
        out.append((P, Q))
    # near diagonal and near boundary pairs
    P = random_batch(1, 5, rng)[0]
    Q = P * np.exp(1e-4 * rng.standard_normal(5))
    out.append((P, Q / Q.sum()))
    out.append((np.array([1e-6, 1 - 1e-6]), np.array([0.3, 0.7])))
    return out


def test_hand_values():
    assert dv.closed_form("delta", P0, Q0).value == pytest.approx(0.5, rel=1e-15)
    assert dv.closed_form("hellinger", P0, Q0).value == pytest.approx(0.1339746, abs=1e-7)
    assert dv.closed_form("k0", P0, Q0).value == pytest.approx(1.1547005, abs=1e-7)
    d = dv.difference(WeightedId.of("k0"), WeightedId.of("h"), P0, Q0).value
    assert d == pytest.approx(0.0103630, abs=1e-7)
    assert dv.csiszar(generator_for("delta"), P0, Q0).value == pytest.approx(0.5, rel=1e-15)


def test_exponential_divergence_hand_value():
    # 2 * (1/4) / sqrt(3/16) * exp(4/3) = (2/sqrt 3) e^{4/3}
    expected = 2 / math.sqrt(3) * math.exp(4 / 3)
    got = dv.exp_divergence(P0, Q0).value
    assert got == pytest.approx(expected, rel=1e-15)
    assert got == pytest.approx(4.380550, abs=1e-6)


@pytest.mark.parametrize("name", ALL)
def test_closed_form_against_oracle(name, rng):
    for P, Q in _pairs(rng):
        if name == "exp_k" and np.max((P - Q) ** 2 / (P * Q)) > 700:
            continue
        ref = oracles.measure(name, P, Q)
        got = dv.closed_form(name, P, Q).value
        assert abs(got - ref) <= 1e-12 * abs(ref) + 1e-300, (name, P, Q)


@pytest.mark.parametrize("name", ALL)
def test_functional_against_oracle(name, rng):
    g = generator_for(name)
    for P, Q in _pairs(rng):
        if name == "exp_k" and np.max((P - Q) ** 2 / (P * Q)) > 700:
            continue
        ref = oracles.measure(name, P, Q)
        assert abs(dv.csiszar(g, P, Q).value - ref) <= 1e-12 * abs(ref) + 1e-300, name


@pytest.mark.parametrize("name", FINITE)
def test_symmetry(name, rng):
    for P, Q in _pairs(rng):
        a, b = dv.closed_form(name, P, Q).value, dv.closed_form(name, Q, P).value
        assert abs(a - b) <= 1e-12 * max(abs(a), abs(b))


@pytest.mark.parametrize("name", ALL)
def test_zero_on_diagonal(name, rng):
    P = random_batch(1, 6, rng)[0]
    assert dv.closed_form(name, P, P).value == 0
    assert dv.csiszar(generator_for(name), P, P).value == 0


@pytest.mark.parametrize("name", FINITE)
def test_positive_off_diagonal(name, rng):
    # the converse of indiscernibility, as a sign test: high-order measures
    # scale like |P-Q|^12 and fall below any fixed absolute threshold
    P = random_batch(1, 4, rng)[0]
    for eps in (1e-2, 1e-5, 1e-8):
        Q = P.copy()
        Q[0] += eps * P[0]
        Q[1] -= eps * P[0]
        assert dv.closed_form(name, P, Q).value > 0


def test_k_t_family(rng):
    for P, Q in _pairs(rng, 6):
        assert dv.k_t(0, P, Q).value == pytest.approx(dv.closed_form("k0", P, Q).value, rel=1e-14)
        assert dv.k_t(1, P, Q).value == pytest.approx(dv.closed_form("b1", P, Q).value, rel=1e-14)
        assert dv.k_t(2, P, P).value == 0


def test_partial_sums(rng):
    for P, Q in _pairs(rng, 6):
        if np.max((P - Q) ** 2 / (P * Q)) > 700:
            continue
        assert dv.partial_sum(0, P, Q).value == pytest.approx(dv.closed_form("k0", P, Q).value, rel=1e-15)
        s = [dv.partial_sum(t, P, Q).value for t in range(12)]
        assert all(b >= a for a, b in zip(s, s[1:]))
        assert dv.exp_divergence(P, Q).value >= s[-1]
    P, Q = [0.6, 0.4], [0.5, 0.5]
    assert dv.partial_sum(20, P, Q).value == pytest.approx(float(oracles.partial_exp(P, Q, 20)), rel=1e-14)
    with pytest.raises(ValueError):
        dv.partial_sum(-1, P, Q)


def test_exponential_overflow_is_reported():
    with pytest.raises(DivergenceOverflowError):
        dv.exp_divergence([1e-6, 1 - 1e-6], [0.5, 0.5])
    with pytest.raises(OverflowError):
        dv.csiszar(generator_for("exp_k"), [1e-6, 1 - 1e-6], [0.5, 0.5])


def test_difference_rules(rng):
    with pytest.raises(InvalidPairError):
        dv.difference("delta", "t", P0, Q0)
    for P, Q in _pairs(rng, 6):
        a = dv.difference("f", "k0", P, Q).value
        assert a == pytest.approx(dv.closed_form("b1", P, Q).value / 32, rel=1e-13)
        assert dv.difference("t", "delta", P, Q).value >= 0


def test_l_measures(rng):
    for P, Q in _pairs(rng, 6):
        p, q = np.sqrt(P), np.sqrt(Q)
        printed = math.fsum((p - q) ** 6 / (p * q * (P + Q))) / 16
        assert dv.l_measure(1, P, Q).value == pytest.approx(printed, rel=1e-12)
        assert dv.l_measure(3, P, Q).value == pytest.approx(2 * dv.l_measure(1, P, Q).value, rel=1e-13)
        for k in range(1, 16):
            assert dv.l_measure(k, P, Q).value >= 0
    P = random_batch(1, 3, rng)[0]
    assert all(dv.l_measure(k, P, P).value == 0 for k in range(1, 16))
    assert dv.printed_l_form(1, P0, Q0).value == pytest.approx(dv.l_measure(1, P0, Q0).value, rel=1e-14)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        dv.closed_form("delta", [0.5, 0.5], [0.2, 0.3, 0.5])
    with pytest.raises(DimensionMismatchError):
        dv.csiszar(generator_for("delta"), [0.5, 0.5], [0.2, 0.3, 0.5])


def test_record_shape():
    v = dv.evaluate("j", from_weights([1, 2]), from_weights([2, 1]))
    rec = v.to_record()
    assert set(rec) == {"measure", "value", "dims", "inputs_hash"}
    assert rec["measure"] == "j" and rec["dims"] == 2 and float(v) == rec["value"]
    assert dv.evaluate("j", [1 / 3, 2 / 3], [2 / 3, 1 / 3]).inputs_hash == v.inputs_hash


@pytest.mark.parametrize("name", FINITE)
def test_joint_convexity(name, rng):
    for _ in range(20):
        dim = int(rng.integers(2, 8))
        P1, Q1, P2, Q2 = random_batch(4, dim, rng)
        for lam in np.arange(1, 10) / 10:
            lhs = dv.closed_form(name, lam * P1 + (1 - lam) * P2, lam * Q1 + (1 - lam) * Q2).value
            a, b = dv.closed_form(name, P1, Q1).value, dv.closed_form(name, P2, Q2).value
            rhs = lam * a + (1 - lam) * b
            assert lhs <= rhs + 1e-12 * max(1.0, abs(lhs), abs(rhs))


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(0.01, 0.99), st.sampled_from(FINITE))
def test_dual_path_property(p, q, name):
    P, Q = [p, 1 - p], [q, 1 - q]
    a = dv.closed_form(name, P, Q).value
    b = dv.csiszar(generator_for(name), P, Q).value
    assert abs(a - b) <= 1e-12 * max(abs(a), abs(b)) + 1e-300
