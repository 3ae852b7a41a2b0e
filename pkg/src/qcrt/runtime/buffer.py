"""Qubit registers (accelerator buffers) and the process-wide registry."""
from __future__ import annotations

import json
import random
import string
import threading
from typing import Any, Mapping

NAME_PREFIX = "qrg_"
_NAME_ALPHABET = string.ascii_letters + string.digits
_NAME_LEN = 6


class AcceleratorBuffer:
    """A named qubit register plus the measurement counts run against it.

    Counts from repeated executions are merged by per-key addition. The
    merge is guarded by a per-buffer lock so several workers may target
    one buffer, though their tallies then interleave in one histogram.
    """

    def __init__(self, name: str, size: int, information: Mapping[str, Any] | None = None) -> None:
        if size < 1:
            raise ValueError("buffer size must be >= 1")
        self.name = name
        self.size = size
        self.information: dict[str, Any] = dict(information or {})
        self._measurements: dict[str, int] = {}
        self._lock = threading.Lock()

    @property
    def measurements(self) -> dict[str, int]:
        with self._lock:
            return dict(self._measurements)

    def merge(self, counts: Mapping[str, int]) -> None:
        with self._lock:
            for key, n in counts.items():
                if n < 0:
                    raise ValueError(f"negative tally for {key!r}")
                self._measurements[key] = self._measurements.get(key, 0) + int(n)

    def total_shots(self) -> int:
        with self._lock:
            return sum(self._measurements.values())

    def reset(self) -> None:
        with self._lock:
            self._measurements.clear()

    def to_dict(self) -> dict[str, Any]:
        with self._lock:
            meas = {k: self._measurements[k] for k in sorted(self._measurements)}
        return {
            "AcceleratorBuffer": {
                "name": self.name,
                "size": self.size,
                "Information": dict(self.information),
                "Measurements": meas,
            }
        }

    def to_json(self) -> str:
        return buffer_to_json(self)

    def print(self, file=None) -> None:
        print(self.to_json(), file=file)

    def __repr__(self) -> str:
        return f"AcceleratorBuffer(name={self.name!r}, size={self.size})"


def buffer_to_json(buffer: AcceleratorBuffer) -> str:
    """Serialise ``buffer`` as ``{"AcceleratorBuffer": {...}}``, 2-space indent.

    Key order is fixed (name, size, Information, Measurements) and the
    measurement keys are sorted.
    """
    return json.dumps(buffer.to_dict(), indent=2)


class BufferRegistry:
    """Name -> buffer map; every mutation happens under one lock."""

    def __init__(self, seed: int | None = None) -> None:
        self._buffers: dict[str, AcceleratorBuffer] = {}
        self._lock = threading.Lock()
        self._names = random.Random(seed)

    def allocate(self, n: int, information: Mapping[str, Any] | None = None) -> AcceleratorBuffer:
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"qalloc needs a positive qubit count, got {n!r}")
        with self._lock:
            while True:
                name = NAME_PREFIX + "".join(self._names.choices(_NAME_ALPHABET, k=_NAME_LEN))
                if name not in self._buffers:
                    break
            buf = AcceleratorBuffer(name, n, information)
            self._buffers[name] = buf
        return buf

    def get(self, name: str) -> AcceleratorBuffer:
        with self._lock:
            return self._buffers[name]

    def names(self) -> list[str]:
        with self._lock:
            return list(self._buffers)

    def clear(self) -> None:
        with self._lock:
            self._buffers.clear()

    def __contains__(self, name: object) -> bool:
        with self._lock:
            return name in self._buffers

    def __len__(self) -> int:
        with self._lock:
            return len(self._buffers)


_registry = BufferRegistry()


def get_registry() -> BufferRegistry:
    return _registry


def qalloc(n: int, registry: BufferRegistry | None = None) -> AcceleratorBuffer:
    """Allocate an ``n``-qubit buffer in the global (or given) registry."""
    return (_registry if registry is None else registry).allocate(n)
