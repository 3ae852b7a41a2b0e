import csv
import io
import json
import warnings

import jsonschema
import pytest

from qcrt.bench import (
    CSV_FIELDS,
    REPORT_SCHEMA,
    BenchSpec,
    BenchWarning,
    random_circuit,
    reports_document,
    run_bench,
    scaling_sweep,
    shot_envelope,
    sweep_points,
    to_csv,
    to_json,
)
from qcrt.bench.harness import speedup_of
from qcrt.sim import run_shots

FAST = dict(warmup=0, repetitions=1)


def test_envelope_at_1024():
    assert shot_envelope(1024) == (448, 576)


def test_spec_validation():
    with pytest.raises(ValueError):
        BenchSpec(tasks=0)
    with pytest.raises(ValueError):
        BenchSpec(repetitions=0)
    with pytest.raises(ValueError):
        BenchSpec(mode="sideways")
    with pytest.raises(ValueError):
        BenchSpec(workload="nope")
    with pytest.raises(ValueError):
        BenchSpec(workload="file:")


@pytest.mark.parametrize("mode", ["one-by-one", "parallel"])
def test_repetition_count(mode):
    rep = run_bench(BenchSpec(workload="bell", mode=mode, repetitions=3, workers_per_kernel=1))
    assert len(rep.times) == 3
    assert rep.valid, rep.problems
    assert rep.median == sorted(rep.times)[1]


def test_bell_digests_in_envelope():
    rep = run_bench(BenchSpec(workload="bell", tasks=3, **FAST))
    assert len(rep.digests) == 3
    for d in rep.digests:
        assert sum(d["counts"].values()) == 1024
        assert all(448 <= v <= 576 for v in d["counts"].values())


@pytest.mark.parametrize("mode", ["one-by-one", "parallel"])
def test_shor_digest_divides(mode):
    rep = run_bench(BenchSpec(workload="shor", mode=mode, tasks=2, **FAST))
    assert rep.valid, rep.problems
    for d in rep.digests:
        assert d["divisors"] in ([3, 5], [])
        assert d["found"] == bool(d["divisors"])


def test_vqe_workload():
    rep = run_bench(BenchSpec(workload="vqe", tasks=2, **FAST))
    assert rep.valid, rep.problems
    assert all(abs(d["opt_val"] + 1.7488649) < 1e-2 for d in rep.digests)


def test_file_workload(tmp_path):
    k = tmp_path / "ghz.xqk"
    k.write_text("kernel ghz(q[3]) { H(q[0]); CX(q[0], q[1]); CX(q[1], q[2]); for i in 0..q.size() { Measure(q[i]); } }")
    rep = run_bench(BenchSpec(workload=f"file:{k}", shots=100, **FAST))
    assert rep.valid
    assert all(set(d["counts"]) <= {"000", "111"} for d in rep.digests)


def test_digests_are_deterministic():
    a = run_bench(BenchSpec(workload="bell", seed=9, **FAST))
    b = run_bench(BenchSpec(workload="bell", seed=9, mode="one-by-one", **FAST))
    assert [d["counts"] for d in a.digests] == [d["counts"] for d in b.digests]
    c = run_bench(BenchSpec(workload="shor", seed=9, **FAST))
    d = run_bench(BenchSpec(workload="shor", seed=9, **FAST))
    assert c.digests == d.digests


def test_invalid_report_has_no_speedup():
    good = run_bench(BenchSpec(workload="bell", **FAST))
    bad = run_bench(BenchSpec(workload="bell", **FAST))
    bad.valid = False
    assert speedup_of(good, bad) is None and speedup_of(bad, good) is None
    assert speedup_of(good, good) == pytest.approx(1.0)


def test_bell_envelope_failure_marks_invalid():
    # 8 shots cannot satisfy a 4-sigma band that excludes zero for one outcome
    rep = run_bench(BenchSpec(workload="bell", shots=8, seed=3, tasks=4, **FAST))
    lo, hi = shot_envelope(8)
    fails = any(not lo <= d["counts"].get(k, 0) <= hi for d in rep.digests for k in ("00", "11"))
    assert rep.valid is not fails
    if not rep.valid:
        assert rep.problems


def test_baseline_speedup_is_ratio():
    base = run_bench(BenchSpec(workload="bell", mode="one-by-one", **FAST))
    par = run_bench(BenchSpec(workload="bell", mode="parallel", **FAST), baseline=base)
    assert par.speedup == pytest.approx(base.median / par.median)
    assert par.baseline["mode"] == "one-by-one"


def test_worker_cap_warns_without_failing():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rep = run_bench(BenchSpec(workload="bell", tasks=2, workers_per_kernel=3, worker_cap=4, shots=64, **FAST))
    assert any(issubclass(w.category, BenchWarning) for w in caught)
    assert rep.warnings
    assert len(rep.times) == 1


def test_sweep_points():
    assert sweep_points(8) == [1, 2, 4, 8]
    assert sweep_points(24) == [1, 2, 4, 8, 16, 24]
    assert sweep_points(1) == [1]
    with pytest.raises(ValueError):
        sweep_points(0)


@pytest.mark.filterwarnings("ignore::qcrt.bench.BenchWarning")
def test_sweep_shape_and_normalisation():
    reports = scaling_sweep("bell", 8, **FAST)
    assert len(reports) == 8
    assert [r.spec["mode"] for r in reports] == ["one-by-one"] * 4 + ["parallel"] * 4
    assert [r.spec["total_workers"] for r in reports] == [1, 2, 4, 8] * 2
    assert [r.spec["workers_per_kernel"] for r in reports[4:]] == [1, 1, 2, 4]
    assert reports[0].speedup == 1.0


def test_json_report_matches_schema():
    reports = scaling_sweep("bell", 2, **FAST)
    doc = json.loads(to_json(reports, "sweep"))
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc == reports_document(reports, "sweep")
    doc["schema"] = "qcrt.bench/0"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, REPORT_SCHEMA)


def test_csv_report():
    reports = scaling_sweep("bell", 2, modes=("parallel",), **FAST)
    rows = list(csv.DictReader(io.StringIO(to_csv(reports))))
    assert list(rows[0]) == CSV_FIELDS
    assert [r["total_workers"] for r in rows] == ["1", "2"]


def test_random_workload_circuit():
    c = random_circuit(10, 3, seed=1)
    assert c.n_qubits == 10
    assert random_circuit(10, 3, seed=1).instructions == c.instructions
    assert sum(run_shots(c, 32, seed=0).values()) == 32
