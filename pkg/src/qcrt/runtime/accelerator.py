"""Accelerator back ends and the cloning factory."""
from __future__ import annotations

import os
import threading
from typing import Any, Callable, Mapping

import numpy as np

from ..sim import ChunkPool, Circuit, Counts, StateVector, run_shots, statevector

WORKERS_ENV = "QCRT_WORKERS_PER_KERNEL"


def default_workers() -> int:
    """Per-kernel worker count from ``QCRT_WORKERS_PER_KERNEL`` (default 1)."""
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return value


class UnknownBackendError(KeyError):
    pass


class Accelerator:
    """Executes circuits. Each instance is private to one worker."""

    backend_name = "abstract"

    def execute(self, circuit: Circuit, shots: int | None = None) -> Counts:
        raise NotImplementedError

    def clone(self) -> "Accelerator":
        raise NotImplementedError

    @property
    def config(self) -> dict[str, Any]:
        return {}


class StatevectorAccelerator(Accelerator):
    backend_name = "statevector"
    CONFIG_KEYS = frozenset({"shots", "workers", "shot_workers", "seed", "sampling"})

    def __init__(
        self,
        shots: int = 1024,
        workers: int | None = None,
        shot_workers: int = 1,
        seed: int | None = None,
        sampling: str = "auto",
    ) -> None:
        if shots < 1:
            raise ValueError("shots must be >= 1")
        self.shots = int(shots)
        self.workers = int(workers) if workers is not None else default_workers()
        if self.workers < 1 or shot_workers < 1:
            raise ValueError("worker counts must be >= 1")
        self.shot_workers = int(shot_workers)
        self.sampling = sampling
        self._seed = seed
        self._rng = np.random.default_rng(seed)

    @property
    def config(self) -> dict[str, Any]:
        return {
            "shots": self.shots,
            "workers": self.workers,
            "shot_workers": self.shot_workers,
            "seed": self._seed,
            "sampling": self.sampling,
        }

    def reseed(self, seed: int | None) -> None:
        self._seed = seed
        self._rng = np.random.default_rng(seed)

    def clone(self) -> "StatevectorAccelerator":
        return StatevectorAccelerator(**self.config)

    def next_seed(self) -> int:
        return int(self._rng.integers(0, 1 << 63))

    def execute(self, circuit: Circuit, shots: int | None = None) -> Counts:
        return run_shots(
            circuit,
            self.shots if shots is None else shots,
            self.next_seed(),
            self.shot_workers,
            inner_workers=self.workers,
            sampling=self.sampling,
        )

    def statevector(self, circuit: Circuit) -> StateVector:
        with ChunkPool(self.workers) as pool:
            return statevector(circuit, pool)

    def __repr__(self) -> str:
        return f"StatevectorAccelerator({self.config})"


_backends: dict[str, Callable[..., Accelerator]] = {"statevector": StatevectorAccelerator}
_backends_lock = threading.Lock()


def register_backend(name: str, factory: Callable[..., Accelerator]) -> None:
    with _backends_lock:
        _backends[name] = factory


def backend_names() -> list[str]:
    with _backends_lock:
        return sorted(_backends)


def get_accelerator(backend: str = "statevector", config: Mapping[str, Any] | None = None) -> Accelerator:
    """Return a new, independent accelerator instance on every call."""
    with _backends_lock:
        factory = _backends.get(backend)
    if factory is None:
        raise UnknownBackendError(f"unknown backend {backend!r}; known: {backend_names()}")
    config = dict(config or {})
    allowed = getattr(factory, "CONFIG_KEYS", None)
    if allowed is not None:
        unknown = set(config) - allowed
        if unknown:
            raise ValueError(f"unknown config keys for {backend!r}: {sorted(unknown)}")
    return factory(**config)
