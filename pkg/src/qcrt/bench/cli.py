"""``qcrt`` command line: run kernels, benchmark, sweep."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from ..dsl import DslError, load_kernel, lower
from ..runtime import WORKERS_ENV, buffer_to_json, default_workers, execute, initialize_worker, qalloc
from .harness import BenchSpec, run_bench, scaling_sweep
from .report import to_csv, to_json, write_reports

PRESETS = {
    # 12-core / 24-thread host, two kernels, shot-level parallelism off
    "paper-eval": {"tasks": 2, "total_workers": 24, "mode": "both", "reps": 5, "shot_workers": 1},
}


def _parse_params(items: Sequence[str]) -> dict[str, float] | list[float]:
    named = [i for i in items if "=" in i]
    if named and len(named) != len(items):
        raise ValueError("mix of named and positional --param values")
    if named:
        return {k.strip(): float(v) for k, v in (i.split("=", 1) for i in items)}
    return [float(i) for i in items]


def _add_workload_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--workload", default="bell", help="bell, shor, vqe, random or file:<path.xqk>")
    p.add_argument("--tasks", type=int, default=2)
    p.add_argument("--shots", type=int, default=None)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--reps", type=int, default=5, help="timed repetitions (one extra warm-up is discarded)")
    p.add_argument("--warmup", type=int, default=1)
    p.add_argument("--shot-workers", type=int, default=1, help="shot-level parallelism per kernel")
    p.add_argument("--worker-cap", type=int, default=None)
    p.add_argument("--qubits", type=int, default=20, help="random workload width")
    p.add_argument("--depth", type=int, default=4, help="random workload depth")
    p.add_argument("--shor-n", type=int, default=15)
    p.add_argument("--shor-a", type=int, nargs="+", default=[2, 7])
    p.add_argument("--size", type=int, default=None, help="register size for file workloads")
    p.add_argument("--param", action="append", default=[], help="kernel parameter for file workloads")
    p.add_argument("--out", default=None, help="write report (.json or .csv)")


def _spec_kwargs(args: argparse.Namespace) -> dict:
    params = _parse_params(args.param)
    return dict(
        workload=args.workload,
        tasks=args.tasks,
        shots=args.shots,
        seed=args.seed,
        repetitions=args.reps,
        warmup=args.warmup,
        shot_workers=args.shot_workers,
        worker_cap=args.worker_cap,
        qubits=args.qubits,
        depth=args.depth,
        shor_n=args.shor_n,
        shor_bases=tuple(args.shor_a),
        size=args.size,
        params=tuple(params.values()) if isinstance(params, dict) else tuple(params),
    )


def _emit(reports, args, kind: str) -> None:
    if args.out:
        write_reports(reports, args.out, kind)
    text = to_json(reports, kind) if not args.out or not args.out.endswith(".csv") else to_csv(reports)
    if args.out:
        for r in reports:
            sp = f"{r.speedup:.3f}x" if r.speedup is not None else "-"
            print(
                f"{r.spec['workload']:>8} {r.spec['mode']:>10} tasks={r.spec['tasks']} "
                f"workers/kernel={r.spec['workers_per_kernel']:<3} median={r.median:.4f}s "
                f"speedup={sp} valid={r.valid}"
            )
    else:
        print(text)


def cmd_bench(args: argparse.Namespace) -> int:
    if args.preset:
        preset = PRESETS[args.preset]
        args.tasks = preset["tasks"]
        args.mode = preset["mode"]
        args.reps = preset["reps"]
        args.shot_workers = preset["shot_workers"]
        args.total_workers = args.total_workers or preset["total_workers"]
    kwargs = _spec_kwargs(args)
    per_kernel = args.workers_per_kernel or default_workers()
    if args.mode == "both":
        total = args.total_workers or per_kernel * args.tasks
        base = run_bench(BenchSpec(mode="one-by-one", workers_per_kernel=total, **kwargs))
        par = run_bench(
            BenchSpec(mode="parallel", workers_per_kernel=max(1, total // args.tasks), **kwargs), baseline=base
        )
        reports = [base, par]
    else:
        reports = [run_bench(BenchSpec(mode=args.mode, workers_per_kernel=per_kernel, **kwargs))]
    _emit(reports, args, "bench")
    return 0 if all(r.valid for r in reports) else 1


def cmd_sweep(args: argparse.Namespace) -> int:
    kwargs = _spec_kwargs(args)
    modes = ("one-by-one", "parallel") if args.mode == "both" else (args.mode,)
    reports = scaling_sweep(args.workload, args.max_workers, modes, **{k: v for k, v in kwargs.items() if k != "workload"})
    _emit(reports, args, "sweep")
    return 0 if all(r.valid for r in reports) else 1


def cmd_run(args: argparse.Namespace) -> int:
    src = load_kernel(args.kernel)
    params = _parse_params(args.param)
    circuit = lower(src, args.size, params)
    cfg = {"shots": args.shots, "seed": args.seed}
    if args.workers_per_kernel:
        cfg["workers"] = args.workers_per_kernel
    initialize_worker("statevector", cfg)
    q = qalloc(args.size or circuit.n_qubits)
    execute(circuit, q, args.shots)
    print(buffer_to_json(q))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcrt", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a kernel file and print its buffer")
    run.add_argument("--kernel", required=True, help="path to a .xqk file or a shipped kernel name (bell, ansatz)")
    run.add_argument("--size", type=int, default=None)
    run.add_argument("--shots", type=int, default=1024)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--param", action="append", default=[], help="name=value or positional value")
    run.add_argument("--workers-per-kernel", type=int, default=None)
    run.set_defaults(func=cmd_run)

    bench = sub.add_parser("bench", help="time one-by-one and/or parallel kernel execution")
    _add_workload_args(bench)
    bench.add_argument("--mode", choices=["one-by-one", "parallel", "both"], default="parallel")
    bench.add_argument(
        "--workers-per-kernel", type=int, default=None, help=f"inner workers per kernel (default ${WORKERS_ENV} or 1)"
    )
    bench.add_argument("--total-workers", type=int, default=None, help="budget split across tasks in --mode both")
    bench.add_argument("--preset", choices=sorted(PRESETS), default=None)
    bench.set_defaults(func=cmd_bench)

    sweep = sub.add_parser("sweep", help="strong-scaling sweep over worker counts")
    _add_workload_args(sweep)
    sweep.add_argument("--max-workers", type=int, required=True)
    sweep.add_argument("--mode", choices=["one-by-one", "parallel", "both"], default="both")
    sweep.set_defaults(func=cmd_sweep, reps=3)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (DslError, ValueError, KeyError, OSError) as exc:
        print(f"qcrt: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
