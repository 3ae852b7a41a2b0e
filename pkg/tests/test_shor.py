import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles.constants import ORDERS_MOD_15
from qcrt.algorithms import (
    ShorParams,
    continued_fraction_convergents,
    divisors_from_order,
    estimate_order,
    multiplicative_order,
    shor_attempt,
    shor_factor,
    shor_kernel,
)
from qcrt.sim import GateKind, statevector


def brute_order(a, n):
    return next(r for r in range(1, n + 1) if pow(a, r, n) == 1)


def qpe_distribution(r, Q):
    """Exact counting-register distribution for an order-r phase estimation."""
    probs = np.zeros(Q)
    for m in range(Q):
        for s in range(r):
            amp = sum(cmath.exp(2j * math.pi * k * (s / r - m / Q)) for k in range(Q)) / Q
            probs[m] += abs(amp) ** 2 / r
    return probs


def counting_marginal(a, N=15):
    p = ShorParams(N, a)
    kernel = shor_kernel(p)
    kernel.instructions = [i for i in kernel.instructions if i.kind is not GateKind.Measure]
    probs = statevector(kernel).probabilities()
    t = p.counting_width
    return probs.reshape(-1, 1 << t).sum(axis=0)


def test_orders_table_matches_brute_force():
    for a, r in ORDERS_MOD_15.items():
        assert multiplicative_order(a, 15) == r == brute_order(a, 15)


def test_kernel_layout_for_15():
    p = ShorParams(15, 7)
    assert (p.counting_width, p.work_width, p.n_qubits) == (8, 4, 12)
    kernel = shor_kernel(p)
    assert kernel.n_qubits == 12
    assert kernel.measured_qubits == list(range(7, -1, -1))


def test_kernel_rejects_shared_factor():
    with pytest.raises(ValueError):
        shor_kernel(ShorParams(15, 5))


@pytest.mark.parametrize("a,peaks", [(7, {0, 64, 128, 192}), (4, {0, 128}), (11, {0, 128}), (2, {0, 64, 128, 192})])
def test_counting_distribution_matches_exact_oracle(a, peaks):
    sim = counting_marginal(a)
    exact = qpe_distribution(ORDERS_MOD_15[a], 256)
    np.testing.assert_allclose(sim, exact, atol=1e-10)
    assert set(np.flatnonzero(sim > 1e-9)) == peaks
    for m in peaks:
        assert sim[m] == pytest.approx(1 / len(peaks), abs=1e-10)


def brute_convergents(num, den):
    """Convergents from the plain continued-fraction expansion."""
    terms, x = [], Fraction(num, den)
    while True:
        a = math.floor(x)
        terms.append(a)
        if x == a:
            break
        x = 1 / (x - a)
    out = []
    for k in range(1, len(terms) + 1):
        v = Fraction(terms[k - 1])
        for t in reversed(terms[: k - 1]):
            v = t + 1 / v
        out.append(v)
    return out


@given(st.integers(0, 4095), st.integers(1, 4096))
def test_convergents_match_plain_expansion(num, den):
    assert list(continued_fraction_convergents(num, den)) == brute_convergents(num, den)


def test_estimate_order_examples():
    assert estimate_order([192], 256, 15, 7).r == 4
    assert estimate_order([128], 256, 15, 7).r is None  # only yields 2, and 7^2 != 1
    assert not estimate_order([0], 256, 15, 7).valid
    assert estimate_order([64, 192], 256, 15, 7).r == 4
    assert estimate_order([128], 256, 15, 4).r == 2
    assert estimate_order([64, 128], 256, 15, 2).r == 4  # lcm(4, 2)


def test_estimate_order_returns_minimal_order():
    # 4 is a convergent denominator for m=64, but 4^2 == 1 already
    assert estimate_order([64], 256, 15, 4).r == 2


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(sorted(ORDERS_MOD_15)), st.lists(st.integers(0, 255), min_size=1, max_size=10))
def test_estimated_order_always_verifies(a, samples):
    est = estimate_order(samples, 256, 15, a)
    if est.valid:
        assert pow(a, est.r, 15) == 1
        assert est.r == ORDERS_MOD_15[a]


@pytest.mark.parametrize("a", sorted(ORDERS_MOD_15))
def test_quantum_order_recovery_for_every_base(a):
    found = [shor_attempt(15, a, seed).r for seed in range(5)]
    assert all(r in (None, ORDERS_MOD_15[a]) for r in found)
    assert ORDERS_MOD_15[a] in found


def test_divisors_from_order_rules():
    assert divisors_from_order(7, 4, 15) == (frozenset({3, 5}), "")
    assert divisors_from_order(14, 2, 15) == (frozenset(), "a^(r/2) == -1 mod N")
    assert divisors_from_order(2, 3, 7)[1] == "odd order"


def test_factor_with_fixed_base_seven():
    res = shor_factor(15, seed=1, a=7)
    assert res.divisors == {3, 5}
    assert res.attempts[-1].kind == "quantum" and res.attempts[-1].r == 4


def test_factor_gcd_shortcut_skips_quantum_step():
    res = shor_factor(15, a=5)
    assert res.divisors == {3, 5}
    assert [t.kind for t in res.attempts] == ["gcd"]


def test_factor_with_rejected_base_reports_nothing():
    res = shor_factor(15, seed=3, a=14)
    assert not res.found
    assert all(t.reason for t in res.attempts)


def test_even_input():
    assert shor_factor(22).divisors == {2, 11}


def test_bad_arguments():
    with pytest.raises(ValueError):
        shor_factor(15, mode="turbo")
    with pytest.raises(ValueError):
        shor_factor(3)


@pytest.mark.parametrize("seed", range(6))
def test_parallel_mode_matches_serial(seed):
    serial = shor_factor(15, seed=seed)
    parallel = shor_factor(15, seed=seed, mode="parallel", tasks=3, shot_workers=1)
    assert parallel.divisors == serial.divisors
    for d in parallel.divisors:
        assert 15 % d == 0 and d not in (1, 15)


@pytest.mark.parametrize("N", [21, 35])
def test_other_semiprimes(N):
    res = shor_factor(N, seed=0, max_attempts=20)
    assert res.found
    assert all(N % d == 0 and 1 < d < N for d in res.divisors)


def test_result_serialises():
    d = shor_factor(15, seed=2).to_dict()
    assert d["N"] == 15 and d["found"] and d["divisors"] == [3, 5]
