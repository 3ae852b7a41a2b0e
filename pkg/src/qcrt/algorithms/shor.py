"""Shor's factoring: order-finding kernel, classical post-processing and drivers.

The driver follows the usual loop. Draw a base ``a``. A shared factor with
``N`` ends the search immediately. Otherwise run the order-finding kernel
for a batch of shots, estimate the order ``r`` and, when ``r`` is even and
``a**(r/2) != -1 (mod N)``, read divisors off ``gcd(a**(r/2) +- 1, N)``.

Parallel mode spawns the quantum attempts as tasks, each on its own
accelerator, and spreads every attempt's shots over several workers.
Attempts are resolved in draw order, so for a fixed seed both modes return
the same divisors.
"""
from __future__ import annotations

import contextlib
import math
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator, Mapping

import numpy as np

from ..runtime import QpuManager, execute, initialize_worker, qalloc, spawn
from ..sim import Circuit, cmodmul
from .qft import inverse_qft_instructions


def multiplicative_order(a: int, modulus: int) -> int:
    """Smallest r >= 1 with a**r == 1 (mod modulus), by direct search."""
    if math.gcd(a, modulus) != 1:
        raise ValueError(f"{a} is not invertible mod {modulus}")
    x, r = a % modulus, 1
    while x != 1 % modulus:
        x = (x * a) % modulus
        r += 1
    return r


@dataclass(frozen=True)
class ShorParams:
    N: int
    a: int
    n_shots: int = 10
    t: int | None = None

    def __post_init__(self) -> None:
        if self.N < 3:
            raise ValueError("N must be >= 3")
        if not 1 < self.a < self.N:
            raise ValueError(f"need 1 < a < N, got a={self.a}, N={self.N}")
        if self.n_shots < 1:
            raise ValueError("n_shots must be >= 1")

    @property
    def work_width(self) -> int:
        return (self.N - 1).bit_length()

    @property
    def counting_width(self) -> int:
        return self.t if self.t is not None else 2 * self.work_width

    @property
    def n_qubits(self) -> int:
        return self.counting_width + self.work_width


def shor_kernel(p: ShorParams) -> Circuit:
    """Phase-estimation order finding for ``a`` mod ``N``.

    Qubits ``0..t-1`` form the counting register (qubit 0 least
    significant); the work register follows and starts in |1>. Counting
    qubits are measured most significant first, so a count key reads
    directly as the binary counting value.
    """
    if math.gcd(p.a, p.N) != 1:
        raise ValueError(f"gcd({p.a}, {p.N}) != 1; no quantum step needed")
    t, m = p.counting_width, p.work_width
    counting = list(range(t))
    work = list(range(t, t + m))
    c = Circuit(t + m, name=f"shor_N{p.N}_a{p.a}")
    c.x(work[0])
    for q in counting:
        c.h(q)
    for j in counting:
        c.extend([cmodmul(j, work, pow(p.a, 1 << j, p.N), p.N)])
    c.extend(inverse_qft_instructions(counting))
    for q in reversed(counting):
        c.measure(q)
    return c


def continued_fraction_convergents(num: int, den: int) -> Iterator[Fraction]:
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    while den:
        term, rem = divmod(num, den)
        num, den = den, rem
        p_prev, p = p, term * p + p_prev
        q_prev, q = q, term * q + q_prev
        yield Fraction(p, q)


@dataclass
class OrderEstimate:
    r: int | None
    raw_samples: list[int]
    candidates: list[int] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.r is not None


def _reduce_order(r: int, a: int, modulus: int) -> int:
    # a^r == 1 implies ord(a) | r; strip prime factors while it still holds
    primes, rest, p = [], r, 2
    while p * p <= rest:
        if rest % p == 0:
            primes.append(p)
            while rest % p == 0:
                rest //= p
        p += 1
    if rest > 1:
        primes.append(rest)
    for p in primes:
        while r % p == 0 and pow(a, r // p, modulus) == 1:
            r //= p
    return r


def estimate_order(samples: list[int], Q: int, N: int, a: int) -> OrderEstimate:
    """Recover the order of ``a`` mod ``N`` from counting-register samples.

    Convergent denominators up to ``N`` of every ``m/Q`` are candidates,
    together with the lcm of each candidate pair. The smallest candidate
    with ``a**r == 1 (mod N)`` is reduced to the true order and returned.
    """
    if not samples:
        raise ValueError("no samples")
    cands: set[int] = set()
    for m in samples:
        if m % Q == 0:
            continue
        for conv in continued_fraction_convergents(m % Q, Q):
            if conv.denominator > N:
                break
            if conv.denominator > 1:
                cands.add(conv.denominator)
    base = sorted(cands)
    for i, d1 in enumerate(base):
        for d2 in base[i + 1:]:
            cands.add(math.lcm(d1, d2))
    ordered = sorted(cands)
    for d in ordered:
        if pow(a, d, N) == 1:
            return OrderEstimate(_reduce_order(d, a, N), list(samples), ordered)
    return OrderEstimate(None, list(samples), ordered)


@dataclass
class Attempt:
    a: int
    kind: str  # "gcd" or "quantum"
    divisors: frozenset[int] = frozenset()
    r: int | None = None
    samples: list[int] = field(default_factory=list)
    reason: str = ""

    @property
    def success(self) -> bool:
        return bool(self.divisors)


@dataclass
class FactorResult:
    N: int
    divisors: frozenset[int]
    attempts: list[Attempt]
    mode: str

    @property
    def found(self) -> bool:
        return bool(self.divisors)

    def to_dict(self) -> dict[str, Any]:
        return {
            "N": self.N,
            "divisors": sorted(self.divisors),
            "found": self.found,
            "mode": self.mode,
            "attempts": [
                {"a": t.a, "kind": t.kind, "r": t.r, "divisors": sorted(t.divisors), "reason": t.reason}
                for t in self.attempts
            ],
        }


def divisors_from_order(a: int, r: int, N: int) -> tuple[frozenset[int], str]:
    if r % 2 == 1:
        return frozenset(), "odd order"
    half = pow(a, r // 2, N)
    if half == N - 1:
        return frozenset(), "a^(r/2) == -1 mod N"
    divs = {math.gcd(half - 1, N), math.gcd(half + 1, N)} - {0, 1, N}
    if not divs:
        return frozenset(), "trivial gcd"
    full = set(divs)
    for d in divs:
        full.add(N // d)
    return frozenset(full), ""


@contextlib.contextmanager
def _private_accelerator(backend: str, config: Mapping[str, Any]):
    mgr = QpuManager.instance()
    previous = mgr.get_qpu() if mgr.has_qpu() else None
    initialize_worker(backend, config)
    try:
        yield
    finally:
        if previous is None:
            mgr.remove()
        else:
            mgr.set_qpu(previous)


def shor_attempt(
    N: int,
    a: int,
    seed: int,
    n_shots: int = 10,
    t: int | None = None,
    shot_workers: int = 1,
    backend: str = "statevector",
    config: Mapping[str, Any] | None = None,
) -> Attempt:
    """One call of the quantum procedure for a coprime base ``a``.

    Runs on the calling worker with a freshly seeded accelerator; the
    caller's own accelerator, if any, is restored afterwards.
    """
    params = ShorParams(N, a, n_shots, t)
    kernel = shor_kernel(params)
    cfg = {**(config or {}), "seed": seed, "shot_workers": shot_workers}
    with _private_accelerator(backend, cfg):
        q = qalloc(kernel.n_qubits)
        execute(kernel, q, n_shots)
    samples = [int(key, 2) for key, n in sorted(q.measurements.items()) for _ in range(n)]
    est = estimate_order(samples, 1 << params.counting_width, N, a)
    if not est.valid:
        return Attempt(a, "quantum", samples=samples, reason="order not recovered")
    divs, reason = divisors_from_order(a, est.r, N)
    return Attempt(a, "quantum", divs, est.r, samples, reason)


def _attempt_seed(seed: int, index: int) -> int:
    ss = np.random.SeedSequence(seed % (1 << 64), spawn_key=(index,))
    return int(ss.generate_state(2, np.uint32).view(np.uint64)[0] >> 1)


def shor_factor(
    N: int,
    seed: int = 0,
    mode: str = "serial",
    max_attempts: int = 10,
    *,
    n_shots: int = 10,
    t: int | None = None,
    a: int | None = None,
    tasks: int = 2,
    shot_workers: int | None = None,
    backend: str = "statevector",
    config: Mapping[str, Any] | None = None,
) -> FactorResult:
    """Find non-trivial divisors of ``N``.

    ``a`` pins the base instead of drawing it. ``tasks`` bounds how many
    quantum attempts are in flight in parallel mode. An empty
    ``divisors`` set means nothing was found within ``max_attempts``.
    """
    if mode not in ("serial", "parallel"):
        raise ValueError(f"mode must be 'serial' or 'parallel', got {mode!r}")
    if N < 4:
        raise ValueError("N must be a composite >= 4")
    if max_attempts < 1 or tasks < 1:
        raise ValueError("max_attempts and tasks must be >= 1")
    if shot_workers is None:
        shot_workers = 1 if mode == "serial" else max(1, min(n_shots, os.cpu_count() or 1))

    attempts: list[Attempt] = []
    if N % 2 == 0:
        attempts.append(Attempt(2, "gcd", frozenset({2, N // 2}) - {1, N}, reason="even N"))
        return FactorResult(N, attempts[-1].divisors, attempts, mode)

    if a is not None:
        bases = [a]
    else:
        rng = random.Random(seed)
        bases = list(range(2, N))
        rng.shuffle(bases)
    bases = bases[:max_attempts]

    def run(index: int, base: int) -> Attempt:
        return shor_attempt(N, base, _attempt_seed(seed, index), n_shots, t, shot_workers, backend, config)

    def finish(found: frozenset[int]) -> FactorResult:
        return FactorResult(N, found, attempts, mode)

    pending: list = []

    def drain() -> frozenset[int]:
        hit: frozenset[int] = frozenset()
        for handle in pending:
            att = handle.join()
            attempts.append(att)
            if att.success and not hit:
                hit = att.divisors
        pending.clear()
        return hit

    for index, base in enumerate(bases):
        g = math.gcd(base, N)
        if g > 1:
            hit = drain()
            if hit:
                return finish(hit)
            attempts.append(Attempt(base, "gcd", frozenset({g, N // g}), reason="shared factor"))
            return finish(attempts[-1].divisors)
        if mode == "serial":
            att = run(index, base)
            attempts.append(att)
            if att.success:
                return finish(att.divisors)
        else:
            pending.append(spawn(run, index, base))
            if len(pending) == tasks:
                hit = drain()
                if hit:
                    return finish(hit)
    return finish(drain())
