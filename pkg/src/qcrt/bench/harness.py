"""One-by-one vs parallel kernel execution timing."""
from __future__ import annotations

import logging
import os
import statistics
import time
import warnings
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

from ..runtime import default_workers, spawn_initialized
from .workloads import Digest, resolve, task_seed

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "qcrt.bench/1"
MODES = ("one-by-one", "parallel")


class BenchWarning(UserWarning):
    pass


@dataclass
class BenchSpec:
    workload: str = "bell"
    tasks: int = 2
    workers_per_kernel: int | None = None
    shots: int | None = None
    seed: int = 42
    repetitions: int = 5
    warmup: int = 1
    mode: str = "parallel"
    shot_workers: int = 1
    worker_cap: int | None = None
    # random workload
    qubits: int = 20
    depth: int = 4
    # shor workload
    shor_n: int = 15
    shor_bases: tuple[int, ...] = (2, 7)
    # file workload
    size: int | None = None
    params: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.tasks < 1:
            raise ValueError("tasks must be >= 1")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.warmup < 0:
            raise ValueError("warmup must be >= 0")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.shot_workers < 1 or (self.workers_per_kernel is not None and self.workers_per_kernel < 1):
            raise ValueError("worker counts must be >= 1")
        self.shor_bases = tuple(self.shor_bases)
        self.params = tuple(self.params)
        self._workload, self._arg = resolve(self.workload)

    @property
    def kernel_path(self) -> str | None:
        return self._arg

    @property
    def effective_shots(self) -> int:
        return self.shots if self.shots is not None else self._workload.default_shots

    @property
    def effective_workers(self) -> int:
        return self.workers_per_kernel if self.workers_per_kernel is not None else default_workers()

    @property
    def total_workers(self) -> int:
        concurrent = self.tasks if self.mode == "parallel" else 1
        return concurrent * self.effective_workers * self.shot_workers

    def to_dict(self) -> dict[str, Any]:
        d = {k: v for k, v in asdict(self).items() if not k.startswith("_")}
        d["workers_per_kernel"] = self.effective_workers
        d["shots"] = self.effective_shots
        d["shor_bases"] = list(self.shor_bases)
        d["params"] = list(self.params)
        return d


@dataclass
class BenchReport:
    spec: dict[str, Any]
    times: list[float]
    median: float
    valid: bool
    digests: list[Digest]
    problems: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    speedup: float | None = None
    baseline: dict[str, Any] | None = None
    host: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "spec": self.spec,
            "times": self.times,
            "median": self.median,
            "valid": self.valid,
            "speedup": self.speedup,
            "baseline": self.baseline,
            "digests": self.digests,
            "problems": self.problems,
            "warnings": self.warnings,
            "host": self.host,
        }


def host_info() -> dict[str, Any]:
    return {"cpu_count": os.cpu_count() or 1, "pid": os.getpid()}


def _one_repetition(spec: BenchSpec) -> tuple[float, list[Digest]]:
    wl = spec._workload
    bodies = [wl.make_task(spec, i) for i in range(spec.tasks)]
    configs = [
        {"workers": spec.effective_workers, "shot_workers": spec.shot_workers, "seed": task_seed(spec.seed, 10_000 + i)}
        for i in range(spec.tasks)
    ]
    start = time.perf_counter()
    if spec.mode == "parallel":
        handles = [spawn_initialized(body, config=cfg) for body, cfg in zip(bodies, configs)]
        digests = [h.join() for h in handles]
    else:
        digests = [spawn_initialized(body, config=cfg).join() for body, cfg in zip(bodies, configs)]
    return time.perf_counter() - start, digests


def speedup_of(report: BenchReport, baseline: BenchReport) -> float | None:
    if not (report.valid and baseline.valid) or report.median <= 0:
        return None
    return baseline.median / report.median


def run_bench(spec: BenchSpec, baseline: BenchReport | None = None) -> BenchReport:
    """Time ``spec.tasks`` workload tasks, one-by-one or concurrently.

    Warm-up repetitions run first and are discarded. Every timed
    repetition's digests are validated; any failure marks the report
    invalid and suppresses its speedup.
    """
    notes = []
    cap = spec.worker_cap if spec.worker_cap is not None else 4 * (os.cpu_count() or 1)
    if spec.total_workers > cap:
        msg = f"{spec.total_workers} concurrent workers exceed the cap of {cap}; timings will oversubscribe"
        warnings.warn(msg, BenchWarning, stacklevel=2)
        notes.append(msg)

    for _ in range(spec.warmup):
        _one_repetition(spec)
    times, problems, digests = [], [], []
    for rep in range(spec.repetitions):
        elapsed, digests = _one_repetition(spec)
        times.append(elapsed)
        problems += [f"rep {rep}: {p}" for p in spec._workload.validate(spec, digests)]
    report = BenchReport(
        spec=spec.to_dict(),
        times=times,
        median=statistics.median(times),
        valid=not problems,
        digests=digests,
        problems=problems,
        warnings=notes,
        host=host_info(),
    )
    if baseline is not None:
        report.baseline = {"mode": baseline.spec["mode"], "median": baseline.median, "valid": baseline.valid}
        report.speedup = speedup_of(report, baseline)
    logger.info("%s %s: median %.4fs valid=%s", spec.workload, spec.mode, report.median, report.valid)
    return report


def sweep_points(max_workers: int) -> list[int]:
    if max_workers < 1:
        raise ValueError("max_workers must be >= 1")
    pts, w = [], 1
    while w <= max_workers:
        pts.append(w)
        w *= 2
    if pts[-1] != max_workers:
        pts.append(max_workers)
    return pts


def scaling_sweep(
    workload: str,
    max_workers: int,
    modes: Sequence[str] = MODES,
    **spec_kwargs: Any,
) -> list[BenchReport]:
    """Strong scaling over total worker budgets 1, 2, 4, ..., ``max_workers``.

    One-by-one gives every kernel the whole budget; parallel splits it
    evenly over the tasks (at least one worker each). Speedups are
    relative to the single-worker one-by-one run.
    """
    reports: list[BenchReport] = []
    reference: BenchReport | None = None
    tasks = spec_kwargs.get("tasks", 2)
    for mode in modes:
        for total in sweep_points(max_workers):
            per_kernel = total if mode == "one-by-one" else max(1, total // tasks)
            spec = BenchSpec(workload=workload, mode=mode, workers_per_kernel=per_kernel, **spec_kwargs)
            rep = run_bench(spec)
            rep.spec["total_workers"] = total
            if mode == "one-by-one" and total == 1:
                reference = rep
            reports.append(rep)
    if reference is None:
        reference = run_bench(BenchSpec(workload=workload, mode="one-by-one", workers_per_kernel=1, **spec_kwargs))
    for rep in reports:
        rep.baseline = {"mode": "one-by-one", "total_workers": 1, "median": reference.median}
        rep.speedup = speedup_of(rep, reference)
    return reports


def sweep_table(reports: Sequence[BenchReport]) -> list[dict[str, Any]]:
    return [
        {
            "workload": r.spec["workload"],
            "mode": r.spec["mode"],
            "tasks": r.spec["tasks"],
            "total_workers": r.spec.get("total_workers", r.spec["workers_per_kernel"]),
            "workers_per_kernel": r.spec["workers_per_kernel"],
            "repetitions": len(r.times),
            "median_s": r.median,
            "min_s": min(r.times),
            "max_s": max(r.times),
            "speedup": r.speedup,
            "valid": r.valid,
        }
        for r in reports
    ]
