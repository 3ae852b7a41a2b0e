"""Benchmark workloads: task bodies plus validity checks on their digests."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Callable

import numpy as np

from ..algorithms import VqeConfig, bell_kernel, deuteron_hamiltonian, shor_attempt, vqe_minimize
from ..dsl import load_kernel, lower
from ..runtime import current_qpu, execute, qalloc
from ..sim import Circuit, GateKind

if TYPE_CHECKING:
    from .harness import BenchSpec

Digest = dict[str, Any]


def task_seed(seed: int, index: int) -> int:
    ss = np.random.SeedSequence(seed % (1 << 64), spawn_key=(index,))
    return int(ss.generate_state(1, np.uint32)[0])


def shot_envelope(shots: int) -> tuple[int, int]:
    """4-sigma band for a fair two-outcome split; (448, 576) at 1024 shots."""
    half, width = shots / 2, 4 * math.sqrt(shots * 0.25)
    return math.ceil(half - width), math.floor(half + width)


def random_circuit(n_qubits: int, depth: int, seed: int, measured: int = 8) -> Circuit:
    """Layers of single-qubit rotations and a CX ladder, terminal measures."""
    rng = np.random.default_rng(seed)
    c = Circuit(n_qubits, name=f"random_{n_qubits}x{depth}")
    for q in range(n_qubits):
        c.h(q)
    for layer in range(depth):
        for q in range(n_qubits):
            kind = (GateKind.Rx, GateKind.Ry, GateKind.Rz)[rng.integers(3)]
            c.append(kind, (q,), (float(rng.uniform(-math.pi, math.pi)),))
        for q in range(layer % 2, n_qubits - 1, 2):
            c.cx(q, q + 1)
    for q in range(min(measured, n_qubits)):
        c.measure(q)
    return c


@dataclass
class Workload:
    name: str
    default_shots: int
    make_task: Callable[["BenchSpec", int], Callable[[], Digest]]
    validate: Callable[["BenchSpec", list[Digest]], list[str]]


def _counts_task(circuit: Circuit, shots: int, size: int | None = None) -> Callable[[], Digest]:
    def run() -> Digest:
        q = qalloc(size or circuit.n_qubits)
        execute(circuit, q, shots)
        return {"buffer": q.name, "counts": q.measurements}
    return run


def _check_totals(spec: "BenchSpec", digests: list[Digest]) -> list[str]:
    shots = spec.effective_shots
    return [
        f"task {i}: {sum(d['counts'].values())} shots recorded, expected {shots}"
        for i, d in enumerate(digests)
        if sum(d["counts"].values()) != shots
    ]


# -- bell --

def _bell_task(spec: "BenchSpec", index: int) -> Callable[[], Digest]:
    return _counts_task(bell_kernel(), spec.effective_shots)


def _bell_validate(spec: "BenchSpec", digests: list[Digest]) -> list[str]:
    problems = _check_totals(spec, digests)
    lo, hi = shot_envelope(spec.effective_shots)
    for i, d in enumerate(digests):
        counts = d["counts"]
        if not set(counts) <= {"00", "11"}:
            problems.append(f"task {i}: unexpected outcomes {sorted(set(counts) - {'00', '11'})}")
        for key in ("00", "11"):
            if not lo <= counts.get(key, 0) <= hi:
                problems.append(f"task {i}: tally {key}={counts.get(key, 0)} outside [{lo}, {hi}]")
    return problems


# -- shor --

def _shor_task(spec: "BenchSpec", index: int) -> Callable[[], Digest]:
    a = spec.shor_bases[index % len(spec.shor_bases)]
    cfg = {"workers": spec.effective_workers}

    def run() -> Digest:
        att = shor_attempt(
            spec.shor_n, a, task_seed(spec.seed, index), spec.effective_shots,
            shot_workers=spec.shot_workers, config=cfg,
        )
        return {"N": spec.shor_n, "a": a, "r": att.r, "divisors": sorted(att.divisors), "found": att.success}
    return run


def _shor_validate(spec: "BenchSpec", digests: list[Digest]) -> list[str]:
    problems = []
    for i, d in enumerate(digests):
        for div in d["divisors"]:
            if div in (1, d["N"]) or d["N"] % div:
                problems.append(f"task {i}: {div} is not a non-trivial divisor of {d['N']}")
        r = d["r"]
        if r is not None and pow(d["a"], r, d["N"]) != 1:
            problems.append(f"task {i}: r={r} is not an order of {d['a']} mod {d['N']}")
    return problems


# -- vqe --

def _vqe_task(spec: "BenchSpec", index: int) -> Callable[[], Digest]:
    theta0 = float(np.random.default_rng(task_seed(spec.seed, index)).uniform(-math.pi, math.pi))

    def run() -> Digest:
        res = vqe_minimize(VqeConfig(theta=(theta0,)), accelerator=current_qpu())
        return {
            "theta0": theta0,
            "opt_val": res.opt_val,
            "opt_params": [float(x) for x in res.opt_params],
            "iterations": res.iterations,
            "converged": res.converged,
        }
    return run


def _vqe_validate(spec: "BenchSpec", digests: list[Digest]) -> list[str]:
    ground = deuteron_hamiltonian().ground_energy()
    problems = []
    for i, d in enumerate(digests):
        if not d["converged"]:
            problems.append(f"task {i}: optimizer did not converge")
        if abs(d["opt_val"] - ground) > 1e-2:
            problems.append(f"task {i}: opt_val {d['opt_val']:.6f} not within 1e-2 of {ground:.6f}")
    return problems


# -- random --

def _random_task(spec: "BenchSpec", index: int) -> Callable[[], Digest]:
    circuit = random_circuit(spec.qubits, spec.depth, task_seed(spec.seed, index))
    return _counts_task(circuit, spec.effective_shots)


# -- file --

def _file_task(spec: "BenchSpec", index: int) -> Callable[[], Digest]:
    src = load_kernel(spec.kernel_path)
    circuit = lower(src, spec.size, spec.params)
    return _counts_task(circuit, spec.effective_shots, spec.size)


WORKLOADS: dict[str, Workload] = {
    "bell": Workload("bell", 1024, _bell_task, _bell_validate),
    "shor": Workload("shor", 10, _shor_task, _shor_validate),
    "vqe": Workload("vqe", 1, _vqe_task, _vqe_validate),
    "random": Workload("random", 64, _random_task, _check_totals),
    "file": Workload("file", 1024, _file_task, _check_totals),
}


def resolve(name: str) -> tuple[Workload, str | None]:
    """Map ``bell`` / ``file:<path>`` style names to a workload and argument."""
    key, _, arg = name.partition(":")
    if key not in WORKLOADS:
        raise ValueError(f"unknown workload {name!r}; choose from {sorted(WORKLOADS)} (file:<path.xqk>)")
    if key == "file" and not arg:
        raise ValueError("file workload needs a path: file:<path.xqk>")
    return WORKLOADS[key], arg or None
