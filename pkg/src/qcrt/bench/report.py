"""Report serialisation. JSON is canonical; CSV is a flat convenience table."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Sequence

from .harness import SCHEMA_VERSION, BenchReport, sweep_table

_NUM_OR_NULL = {"type": ["number", "null"]}

REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "kind", "reports", "table"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "kind": {"enum": ["bench", "sweep"]},
        "reports": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["schema", "spec", "times", "median", "valid", "speedup", "digests", "problems"],
                "properties": {
                    "schema": {"const": SCHEMA_VERSION},
                    "spec": {
                        "type": "object",
                        "required": ["workload", "tasks", "workers_per_kernel", "shots", "seed", "repetitions", "mode"],
                        "properties": {
                            "tasks": {"type": "integer", "minimum": 1},
                            "repetitions": {"type": "integer", "minimum": 1},
                            "mode": {"enum": ["one-by-one", "parallel"]},
                        },
                    },
                    "times": {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1},
                    "median": {"type": "number", "minimum": 0},
                    "valid": {"type": "boolean"},
                    "speedup": _NUM_OR_NULL,
                    "digests": {"type": "array"},
                    "problems": {"type": "array", "items": {"type": "string"}},
                },
            },
        },
        "table": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["workload", "mode", "total_workers", "median_s", "speedup", "valid"],
                "properties": {"median_s": {"type": "number"}, "speedup": _NUM_OR_NULL, "valid": {"type": "boolean"}},
            },
        },
    },
}

CSV_FIELDS = [
    "workload",
    "mode",
    "tasks",
    "total_workers",
    "workers_per_kernel",
    "repetitions",
    "median_s",
    "min_s",
    "max_s",
    "speedup",
    "valid",
]


def reports_document(reports: Sequence[BenchReport], kind: str = "bench") -> dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "kind": kind,
        "reports": [r.to_dict() for r in reports],
        "table": sweep_table(reports),
    }


def to_json(reports: Sequence[BenchReport], kind: str = "bench") -> str:
    return json.dumps(reports_document(reports, kind), indent=2)


def to_csv(reports: Sequence[BenchReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in sweep_table(reports):
        writer.writerow({k: ("" if row[k] is None else row[k]) for k in CSV_FIELDS})
    return buf.getvalue()


def write_reports(reports: Sequence[BenchReport], path: str | Path, kind: str = "bench") -> None:
    path = Path(path)
    text = to_csv(reports) if path.suffix.lower() == ".csv" else to_json(reports, kind)
    path.write_text(text, encoding="utf-8")
