"""Acceptance criteria 1-9, one verdict line each.

Run on its own with ``pytest tests/test_acceptance.py -v``; the verdict
lines are repeated in the terminal summary.
"""
import json
import math
import os
import shutil
import subprocess
import sys
import threading
import time
from pathlib import Path

import pytest

from acceptance_log import verdict
from golden_util import golden_text, mask
from oracles.constants import GROUND_ENERGY
from qcrt.algorithms import ShorParams, ansatz, bell_kernel, shor_attempt, shor_factor, shor_kernel, vqe_minimize
from qcrt.bench import BenchSpec, run_bench
from qcrt.dsl import DslSyntaxError, UnboundIdentifierError, UnknownGateError, load_kernel, lower, parse_kernel
from qcrt.runtime import (
    BufferRegistry,
    QpuManager,
    StatevectorAccelerator,
    execute,
    get_accelerator,
    initialize_worker,
    qalloc,
    spawn,
)
from qcrt.sim import run_shots

BELL_LO, BELL_HI = 448, 576
SHOR_SEEDS, SHOR_MIN_OK = 20, 18
PERF_CORES = 8
PERF_RATIO = 1.05


def _run_cli(*args):
    exe = shutil.which("qcrt")
    cmd = [exe, *args] if exe else [sys.executable, "-m", "qcrt", *args]
    start = time.perf_counter()
    proc = subprocess.run(cmd, capture_output=True, text=True, timeout=120)
    return proc, time.perf_counter() - start


def physical_cores() -> int:
    try:
        text = Path("/proc/cpuinfo").read_text()
    except OSError:
        return os.cpu_count() or 1
    cores, phys = set(), "0"
    for line in text.splitlines():
        key, _, val = line.partition(":")
        key = key.strip()
        if key == "physical id":
            phys = val.strip()
        elif key == "core id":
            cores.add((phys, val.strip()))
    return len(cores) or (os.cpu_count() or 1)


def test_criterion_1_bell_envelope():
    proc, elapsed = _run_cli("run", "--kernel", "bell", "--shots", "1024")
    assert proc.returncode == 0, proc.stderr
    meas = json.loads(proc.stdout)["AcceleratorBuffer"]["Measurements"]
    ok = (
        set(meas) <= {"00", "11"}
        and sum(meas.values()) == 1024
        and all(BELL_LO <= meas.get(k, 0) <= BELL_HI for k in ("00", "11"))
        and elapsed < 1.0
    )
    assert verdict(1, ok, f"counts={meas} total={sum(meas.values())} wall={elapsed:.3f}s (limit 1 s)")


def test_criterion_2_buffer_json_golden():
    proc, _ = _run_cli("run", "--kernel", "bell", "--shots", "1024", "--seed", "2")
    masked = mask(proc.stdout.rstrip("\n")) + "\n"
    ok = proc.returncode == 0 and masked == golden_text()
    assert verdict(2, ok, "masked buffer JSON equals tests/golden/bell_buffer.json byte-for-byte")


def test_criterion_3_shor_factors_15():
    start = time.perf_counter()
    results = [shor_factor(15, seed=s, n_shots=10, t=8).divisors for s in range(SHOR_SEEDS)]
    elapsed = time.perf_counter() - start
    hits = sum(r == {3, 5} for r in results)
    divides = all(15 % d == 0 and d not in (1, 15) for r in results for d in r)
    ok = hits >= SHOR_MIN_OK and divides and elapsed < 30
    assert verdict(3, ok, f"{hits}/{SHOR_SEEDS} seeds gave {{3, 5}}, all divide 15: {divides}, wall={elapsed:.2f}s")


def test_criterion_4_order_oracle():
    start = time.perf_counter()
    bases = [a for a in range(2, 15) if math.gcd(a, 15) == 1]
    wrong = []
    for a in bases:
        order = next(r for r in range(1, 16) if pow(a, r, 15) == 1)
        for seed in range(5):
            r = shor_attempt(15, a, seed, n_shots=10, t=8).r
            if r != order:
                wrong.append((a, seed, r, order))
    elapsed = time.perf_counter() - start
    ok = not wrong and elapsed < 60
    assert verdict(4, ok, f"{len(bases) * 5 - len(wrong)}/{len(bases) * 5} (a, seed) estimates equal brute force, wall={elapsed:.2f}s")


def test_criterion_5_vqe_ground_energy():
    start = time.perf_counter()
    res = vqe_minimize()
    elapsed = time.perf_counter() - start
    err = abs(res.opt_val - GROUND_ENERGY)
    ok = res.converged and err < 1e-2 and elapsed < 5
    assert verdict(5, ok, f"opt_val={res.opt_val:.10f} oracle={GROUND_ENERGY:.10f} |err|={err:.2e} wall={elapsed:.3f}s")


def _barrier_run(n, fn):
    barrier = threading.Barrier(n)

    def body(i):
        barrier.wait()
        return fn(i)

    return [h.join() for h in [spawn(body, i) for i in range(n)]]


@pytest.mark.usefixtures("tight_switching")
def test_criterion_6_concurrency_stress():
    findings = []
    for workers in (8, 16, 24):
        reg = BufferRegistry()
        names = _barrier_run(workers, lambda i: [reg.allocate(2).name for _ in range(100)])
        flat = [n for batch in names for n in batch]
        if len(reg) != workers * 100 or len(set(flat)) != len(flat):
            findings.append(f"registry {workers} workers: size {len(reg)}, {len(set(flat))} distinct names")

    def bell_worker(i):
        initialize_worker("statevector", {"seed": i})
        q = qalloc(2)
        for _ in range(8):
            execute(bell_kernel(), q, 128)
        return sum(q.measurements.values())

    totals = _barrier_run(16, bell_worker)
    if totals != [1024] * 16:
        findings.append(f"per-buffer totals {totals}")

    mgr = QpuManager.instance()

    def churn(i):
        bad = 0
        for _ in range(1000):
            acc = StatevectorAccelerator(shots=1)
            mgr.set_qpu(acc)
            bad += mgr.get_qpu() is not acc
        mgr.remove()
        return bad

    crossed = sum(_barrier_run(16, churn))
    if crossed:
        findings.append(f"{crossed} QpuManager lookups returned another worker's accelerator")

    ok = not findings
    detail = "; ".join(findings) or "registry sizes, buffer totals and QpuManager lookups exact under 1 us GIL switching"
    assert verdict(6, ok, detail + " (stress substitute: no thread sanitizer exists for pure-Python threads)")


def test_criterion_7_determinism():
    kernels = {"bell": (bell_kernel(), 1024), "shor12": (shor_kernel(ShorParams(15, 7)), 64)}
    mismatched = []
    for name, (circuit, shots) in kernels.items():
        seen = {}
        for workers in (1, 2, 8):
            for sampling in ("auto", "reexecute"):
                seen[(workers, sampling)] = run_shots(circuit, shots, seed=1234, workers=workers, sampling=sampling)
        by_sampling = {}
        for (workers, sampling), counts in seen.items():
            by_sampling.setdefault(sampling, []).append(counts)
        for sampling, runs in by_sampling.items():
            if any(r != runs[0] for r in runs):
                mismatched.append(f"{name}/{sampling}")
    ok = not mismatched
    assert verdict(7, ok, "bell and 12-qubit shor counts identical across workers 1, 2, 8 in both sampling paths"
                   if ok else f"mismatch in {mismatched}")


def test_criterion_8_performance_direction():
    cores = physical_cores()
    full = cores >= PERF_CORES
    total = max(2, os.cpu_count() or 1)
    common = dict(workload="random", tasks=2, qubits=20, depth=4, shot_workers=1, worker_cap=10 ** 6, seed=42)
    if full:
        common.update(repetitions=5, warmup=1)
    else:
        common.update(repetitions=1, warmup=0)  # reduced run: only a report on small hosts
    base = run_bench(BenchSpec(mode="one-by-one", workers_per_kernel=total, **common))
    par = run_bench(BenchSpec(mode="parallel", workers_per_kernel=max(1, total // 2), **common), baseline=base)
    ratio = par.median / base.median
    ok = base.valid and par.valid and ratio <= PERF_RATIO
    detail = (
        f"parallel/one-by-one median = {ratio:.3f} (limit {PERF_RATIO}), one-by-one {base.median:.2f}s, "
        f"parallel {par.median:.2f}s, total workers {total}, physical cores {cores}"
    )
    if not full:
        detail += f"; below {PERF_CORES} cores, reported only"
    verdict(8, ok, detail, soft=not full)
    assert base.valid and par.valid
    if full:
        assert ok


def test_criterion_9_parser():
    problems = []
    if lower(load_kernel("bell"), 2).instructions != bell_kernel().instructions:
        problems.append("bell lowering differs")
    for theta in (0.0, 0.7, -1.2):
        if lower(load_kernel("ansatz"), 2, [theta]).instructions != ansatz(theta).instructions:
            problems.append(f"ansatz lowering differs at {theta}")
    cases = [
        ("kernel x(q) {\n  H(q[0])\n}", DslSyntaxError, (3, 1)),
        ("kernel x(q) { Foo(q[0]); }", UnknownGateError, (1, 15)),
        ("kernel x(q) {\n  Rx(q[0], phi);\n}", UnboundIdentifierError, (2, 12)),
    ]
    for text, cls, pos in cases:
        try:
            parse_kernel(text)
            problems.append(f"{cls.__name__} not raised")
        except cls as exc:
            if (exc.line, exc.col) != pos:
                problems.append(f"{cls.__name__} at {(exc.line, exc.col)}, expected {pos}")
    ok = not problems
    assert verdict(9, ok, "; ".join(problems) or "goldens lower to the constructors; syntax, unknown-gate and unbound diagnostics positioned")


def test_bell_envelope_holds_across_seeds():
    # not a numbered criterion: the 4-sigma band should essentially never trip
    acc = get_accelerator("statevector", {"seed": 0})
    misses = 0
    for s in range(50):
        acc.reseed(s)
        counts = acc.execute(bell_kernel(), 1024)
        misses += not all(BELL_LO <= counts.get(k, 0) <= BELL_HI for k in ("00", "11"))
    assert misses == 0
