"""Benchmark harness reproducing one-by-one vs parallel kernel runs."""
from .harness import (
    MODES,
    SCHEMA_VERSION,
    BenchReport,
    BenchSpec,
    BenchWarning,
    run_bench,
    scaling_sweep,
    sweep_points,
    sweep_table,
)
from .report import CSV_FIELDS, REPORT_SCHEMA, reports_document, to_csv, to_json, write_reports
from .workloads import WORKLOADS, random_circuit, shot_envelope

__all__ = [
    "CSV_FIELDS",
    "MODES",
    "REPORT_SCHEMA",
    "SCHEMA_VERSION",
    "WORKLOADS",
    "BenchReport",
    "BenchSpec",
    "BenchWarning",
    "random_circuit",
    "reports_document",
    "run_bench",
    "scaling_sweep",
    "shot_envelope",
    "sweep_points",
    "sweep_table",
    "to_csv",
    "to_json",
    "write_reports",
]
