"""Dense state-vector simulation.

Qubit 0 is the least significant bit of the amplitude index. Internally the
amplitude array is viewed as an ``n``-dimensional ``(2, 2, ..., 2)`` tensor
where qubit ``q`` lives on axis ``n - 1 - q``.

Gate application can fan out over disjoint amplitude blocks (inner-simulator
parallelism). Blocks are formed by fixing the highest qubits that the gate
does not touch, so every amplitude is computed by exactly the same sequence
of floating point operations whatever the block count; results are
bit-identical to serial application.
"""
from __future__ import annotations

import functools
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Protocol, Sequence

import numpy as np

from .circuit import Circuit, CircuitError, GateKind, Instruction
from .pauli import PauliString

# below this size, chunking costs more than it saves
PARALLEL_MIN_QUBITS = 14

_SQ2 = 1.0 / math.sqrt(2.0)


class RandomStream(Protocol):
    def random(self) -> float: ...


class StateVector:
    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes: np.ndarray | None = None) -> None:
        if n_qubits < 1:
            raise ValueError("state vector needs at least one qubit")
        self.n_qubits = n_qubits
        if amplitudes is None:
            amplitudes = np.zeros(1 << n_qubits, dtype=np.complex128)
            amplitudes[0] = 1.0
        else:
            amplitudes = np.array(amplitudes, dtype=np.complex128)
            if amplitudes.shape != (1 << n_qubits,):
                raise ValueError(
                    f"expected {1 << n_qubits} amplitudes for {n_qubits} qubits, got {amplitudes.shape}"
                )
        self.amplitudes = amplitudes

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex], normalize: bool = False) -> "StateVector":
        arr = np.asarray(amplitudes, dtype=np.complex128)
        n = int(arr.size).bit_length() - 1
        if arr.ndim != 1 or arr.size != 1 << n:
            raise ValueError("amplitude count must be a power of two")
        if normalize:
            arr = arr / np.linalg.norm(arr)
        return cls(n, arr)

    @classmethod
    def basis(cls, n_qubits: int, index: int) -> "StateVector":
        sv = cls(n_qubits)
        sv.amplitudes[0] = 0.0
        sv.amplitudes[index] = 1.0
        return sv

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n_qubits)

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits})"


class ChunkPool:
    """Worker threads for block-parallel gate application.

    ``workers == 1`` runs everything inline. numpy releases the GIL inside
    its array loops, so blocks of large states genuinely overlap.
    """

    def __init__(self, workers: int = 1) -> None:
        if workers < 1:
            raise ValueError("workers must be >= 1")
        self.workers = workers
        self._pool = ThreadPoolExecutor(workers, thread_name_prefix="qcrt-inner") if workers > 1 else None

    def run(self, jobs: list[Callable[[], None]]) -> None:
        if self._pool is None or len(jobs) == 1:
            for job in jobs:
                job()
            return
        for fut in [self._pool.submit(job) for job in jobs]:
            fut.result()

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def __enter__(self) -> "ChunkPool":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


# --- gate matrices -------------------------------------------------------
# Multi-qubit matrices index their basis with targets[0] as the most
# significant bit, i.e. |control, target> for controlled gates.

def _rx(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _ry(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def _rz(t):
    return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])


_FIXED = {
    GateKind.H: np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=np.complex128),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    GateKind.Z: np.diag([1, -1]).astype(np.complex128),
    GateKind.S: np.diag([1, 1j]).astype(np.complex128),
    GateKind.T: np.diag([1, np.exp(0.25j * math.pi)]).astype(np.complex128),
    GateKind.CX: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
    ),
    GateKind.CZ: np.diag([1, 1, 1, -1]).astype(np.complex128),
    GateKind.SWAP: np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
    ),
}


def gate_matrix(inst: Instruction) -> np.ndarray:
    kind = inst.kind
    if kind in _FIXED:
        return _FIXED[kind]
    if kind is GateKind.Rx:
        return _rx(inst.params[0])
    if kind is GateKind.Ry:
        return _ry(inst.params[0])
    if kind is GateKind.Rz:
        return _rz(inst.params[0])
    if kind is GateKind.CPhase:
        return np.diag([1, 1, 1, np.exp(1j * inst.params[0])])
    raise CircuitError(f"{kind.value} has no dense matrix")


# --- application kernels -------------------------------------------------

def _apply_dense(t: np.ndarray, axes: Sequence[int], u: np.ndarray) -> None:
    k = len(axes)
    dim = 1 << k
    slices = []
    for b in range(dim):
        idx: list = [slice(None)] * t.ndim
        for j, ax in enumerate(axes):
            idx[ax] = (b >> (k - 1 - j)) & 1
        slices.append(tuple(idx))

    if not np.count_nonzero(u - np.diag(np.diag(u))):
        for b, sl in enumerate(slices):
            if u[b, b] != 1:
                t[sl] *= u[b, b]
        return

    olds = [t[sl] for sl in slices]
    news = []
    for i in range(dim):
        acc = None
        for j in range(dim):
            coef = u[i, j]
            if coef == 0:
                continue
            term = olds[j].copy() if coef == 1 else coef * olds[j]
            acc = term if acc is None else acc + term
        news.append(acc)
    for sl, val in zip(slices, news):
        if val is None:
            t[sl] = 0
        else:
            t[sl] = val


def _blocks(n: int, gate_axes: Sequence[int], workers: int):
    """Yield (index, remapped axes) pairs covering the tensor disjointly."""
    free = [ax for ax in range(n) if ax not in gate_axes]
    nfix = min(max(workers - 1, 0).bit_length(), len(free))
    fixed = free[:nfix]
    for combo in range(1 << nfix):
        idx: list = [slice(None)] * n
        for j, ax in enumerate(fixed):
            idx[ax] = (combo >> (nfix - 1 - j)) & 1
        remapped = [ax - sum(1 for f in fixed if f < ax) for ax in gate_axes]
        yield tuple(idx), remapped


@functools.lru_cache(maxsize=64)
def _cmodmul_gather(n: int, control: int, w0: int, width: int, a: int, modulus: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    mask = (1 << width) - 1
    y = (idx >> w0) & mask
    active = ((idx >> control) & 1).astype(bool) & (y < modulus)
    new_y = np.where(active, (a * y) % modulus, y)
    dest = (idx & ~(mask << w0)) | (new_y << w0)
    src = np.empty_like(idx)
    src[dest] = idx
    src.setflags(write=False)
    return src


def _apply_cmodmul(state: StateVector, inst: Instruction, pool: ChunkPool | None) -> None:
    control, work = inst.targets[0], inst.targets[1:]
    a, modulus = (int(p) for p in inst.params)
    src = _cmodmul_gather(state.n_qubits, control, work[0], len(work), a % modulus, modulus)
    old = state.amplitudes
    new = np.empty_like(old)
    size = old.size
    nchunks = pool.workers if pool is not None and state.n_qubits >= PARALLEL_MIN_QUBITS else 1
    bounds = [size * i // nchunks for i in range(nchunks + 1)]

    def job(lo: int, hi: int) -> Callable[[], None]:
        def run() -> None:
            new[lo:hi] = old[src[lo:hi]]
        return run

    jobs = [job(bounds[i], bounds[i + 1]) for i in range(nchunks)]
    if pool is None:
        jobs[0]()
    else:
        pool.run(jobs)
    state.amplitudes = new


def _check_targets(state: StateVector, targets: Sequence[int]) -> None:
    for q in targets:
        if not 0 <= q < state.n_qubits:
            raise IndexError(f"qubit {q} out of range for {state.n_qubits}-qubit state")


def apply_gate(state: StateVector, inst: Instruction, pool: ChunkPool | None = None) -> StateVector:
    """Apply a unitary instruction in place and return ``state``."""
    if inst.kind is GateKind.Measure:
        raise CircuitError("Measure is not a unitary gate; use measure_qubit")
    _check_targets(state, inst.targets)
    if inst.kind is GateKind.CModMul:
        _apply_cmodmul(state, inst, pool)
        return state
    n = state.n_qubits
    axes = [n - 1 - q for q in inst.targets]
    u = gate_matrix(inst)
    t = state.tensor()
    if pool is None or pool.workers == 1 or n < PARALLEL_MIN_QUBITS:
        _apply_dense(t, axes, u)
        return state

    def job(idx, remapped) -> Callable[[], None]:
        return lambda: _apply_dense(t[idx], remapped, u)

    pool.run([job(idx, rem) for idx, rem in _blocks(n, axes, pool.workers)])
    return state


def prob_one(state: StateVector, q: int) -> float:
    _check_targets(state, (q,))
    t = state.tensor()
    ax = state.n_qubits - 1 - q
    ones = t[(slice(None),) * ax + (1,)]
    p = float(np.sum(ones.real ** 2 + ones.imag ** 2))
    return min(max(p, 0.0), 1.0)


def measure_qubit(state: StateVector, q: int, rng: RandomStream) -> tuple[int, StateVector]:
    """Projectively measure qubit ``q``; collapses and renormalises in place."""
    p1 = prob_one(state, q)
    bit = 1 if rng.random() < p1 else 0
    p = p1 if bit else 1.0 - p1
    if p <= 0.0:
        # rng.random() is in [0, 1), so this needs p1 outside [0, 1]
        raise RuntimeError(f"zero-probability outcome selected on qubit {q}")
    t = state.tensor()
    ax = state.n_qubits - 1 - q
    keep = (slice(None),) * ax + (bit,)
    drop = (slice(None),) * ax + (1 - bit,)
    t[drop] = 0.0
    t[keep] *= 1.0 / math.sqrt(p)
    return bit, state


def evolve(
    circuit: Circuit,
    state: StateVector | None = None,
    rng: RandomStream | None = None,
    pool: ChunkPool | None = None,
) -> tuple[StateVector, dict[int, int]]:
    """Run every instruction of ``circuit``.

    Returns the final state and the last measured bit per qubit. A circuit
    containing Measure needs ``rng``.
    """
    if state is None:
        state = StateVector(circuit.n_qubits)
    elif state.n_qubits < circuit.n_qubits:
        raise ValueError("state is smaller than the circuit")
    bits: dict[int, int] = {}
    for inst in circuit.instructions:
        if inst.kind is GateKind.Measure:
            if rng is None:
                raise CircuitError("circuit measures but no random stream was given")
            q = inst.targets[0]
            bits[q], _ = measure_qubit(state, q, rng)
        else:
            apply_gate(state, inst, pool)
    return state, bits


def statevector(circuit: Circuit, pool: ChunkPool | None = None) -> StateVector:
    """Final state of a measurement-free circuit (Measure is rejected)."""
    return evolve(circuit, pool=pool)[0]


_PAULI_INST = {
    "X": Instruction(GateKind.X, (0,)),
    "Y": Instruction(GateKind.Y, (0,)),
    "Z": Instruction(GateKind.Z, (0,)),
}


def expectation(state: StateVector, pauli: PauliString) -> float:
    """<psi|P|psi> for a Pauli string."""
    if pauli.max_qubit >= state.n_qubits:
        raise IndexError(f"Pauli string {pauli} exceeds {state.n_qubits} qubits")
    if pauli.is_identity:
        return state.norm()
    phi = state.copy()
    t = phi.tensor()
    n = state.n_qubits
    for q, p in pauli.ops:
        _apply_dense(t, [n - 1 - q], gate_matrix(_PAULI_INST[p]))
    return float(np.vdot(state.amplitudes, phi.amplitudes).real)
