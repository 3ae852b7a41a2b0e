"""Multi-shot sampling with worker-count independent results."""
from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .circuit import Circuit, CircuitError, GateKind
from .statevector import ChunkPool, StateVector, evolve

Counts = dict[str, int]

SAMPLING_MODES = ("auto", "reexecute")


def shot_stream(seed: int, shot: int) -> np.random.Generator:
    """Independent random substream for one shot, keyed by (seed, shot index)."""
    return np.random.default_rng(np.random.SeedSequence(seed % (1 << 64), spawn_key=(shot,)))


def bitstring(bits: dict[int, int], order: list[int]) -> str:
    return "".join(str(bits[q]) for q in order)


class _TerminalSampler:
    """Samples trailing measurements from one final state.

    Each Measure consumes one uniform from the shot stream and compares it
    with the conditional probability of reading 1, exactly as the
    collapse-per-measurement path does, so both paths share a distribution
    and, up to rounding at the comparison boundary, the same draws.
    """

    def __init__(self, state: StateVector, measured: list[int]) -> None:
        n = state.n_qubits
        probs = state.probabilities().reshape((2,) * n)
        axes = [n - 1 - q for q in measured]
        other = tuple(ax for ax in range(n) if ax not in axes)
        summed = probs.sum(axis=other) if other else probs
        kept = sorted(axes)
        table = np.transpose(summed, [kept.index(ax) for ax in axes])
        table = table / table.sum()
        # prefix[j] is the marginal over the first j measured qubits
        self.prefix = [np.asarray(table.sum())]
        for j in range(1, len(measured) + 1):
            self.prefix.append(table.sum(axis=tuple(range(j, len(measured)))) if j < len(measured) else table)
        self.position = {q: j for j, q in enumerate(measured)}

    def sample(self, measures: list[int], rng) -> dict[int, int]:
        bits: dict[int, int] = {}
        prefix: tuple[int, ...] = ()
        for q in measures:
            u = rng.random()
            if q in bits:
                continue
            j = self.position[q]
            denom = float(self.prefix[j][prefix])
            p1 = float(self.prefix[j + 1][prefix + (1,)]) / denom if denom > 0 else 0.0
            bit = 1 if u < p1 else 0
            bits[q] = bit
            prefix = prefix + (bit,)
        return bits


def run_shots(
    circuit: Circuit,
    shots: int,
    seed: int = 0,
    workers: int = 1,
    *,
    inner_workers: int = 1,
    sampling: str = "auto",
) -> Counts:
    """Execute ``shots`` independent runs of ``circuit`` and tally outcomes.

    Shot ``i`` always draws from ``shot_stream(seed, i)``, so the tallies
    depend only on ``(circuit, shots, seed)`` and never on ``workers``.
    Count keys list the measured qubits in order of first measurement.

    ``sampling="auto"`` simulates the unitary prefix once when every Measure
    is trailing; ``"reexecute"`` always replays the full circuit per shot.
    """
    if shots < 1:
        raise ValueError("shots must be a positive integer")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if sampling not in SAMPLING_MODES:
        raise ValueError(f"sampling must be one of {SAMPLING_MODES}")
    if not circuit.has_measurements():
        raise CircuitError(f"circuit {circuit.name!r} has no Measure instruction")

    order = circuit.measured_qubits
    pool = ChunkPool(inner_workers)
    try:
        if sampling == "auto" and circuit.measurements_trailing():
            unitary = Circuit(
                circuit.n_qubits,
                [i for i in circuit.instructions if i.kind is not GateKind.Measure],
                circuit.name,
            )
            final, _ = evolve(unitary, pool=pool)
            sampler = _TerminalSampler(final, order)
            measures = [i.targets[0] for i in circuit.instructions if i.kind is GateKind.Measure]

            def one_shot(i: int) -> str:
                return bitstring(sampler.sample(measures, shot_stream(seed, i)), order)
        else:
            def one_shot(i: int) -> str:
                _, bits = evolve(circuit, rng=shot_stream(seed, i), pool=pool)
                return bitstring(bits, order)

        def block(lo: int, hi: int) -> Counter:
            return Counter(one_shot(i) for i in range(lo, hi))

        nblocks = min(workers, shots)
        bounds = [shots * b // nblocks for b in range(nblocks + 1)]
        if nblocks == 1:
            total = block(0, shots)
        else:
            total = Counter()
            with ThreadPoolExecutor(nblocks, thread_name_prefix="qcrt-shot") as ex:
                futs = [ex.submit(block, bounds[b], bounds[b + 1]) for b in range(nblocks)]
                for f in futs:
                    total.update(f.result())
    finally:
        pool.close()
    return dict(sorted(total.items()))
