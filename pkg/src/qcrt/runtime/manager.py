"""Per-worker accelerator bookkeeping and kernel execution."""
from __future__ import annotations

import itertools
import threading
from typing import Any, Mapping

from ..sim import Circuit
from .accelerator import Accelerator, get_accelerator
from .buffer import AcceleratorBuffer

_worker_ids = itertools.count(1)
_worker_ids_lock = threading.Lock()
_local = threading.local()


def current_worker_id() -> int:
    """Opaque id of the calling thread, never reused within the process.

    OS thread idents get recycled once a thread exits, which would let a
    fresh thread inherit a dead thread's accelerator.
    """
    wid = getattr(_local, "worker_id", None)
    if wid is None:
        with _worker_ids_lock:
            wid = next(_worker_ids)
        _local.worker_id = wid
    return wid


class WorkerNotInitializedError(RuntimeError):
    pass


class QpuManager:
    """Process-wide map from worker id to that worker's accelerator.

    Entries of finished workers are kept until the process exits; growth is
    one entry per thread that ever called ``initialize_worker``.
    """

    _instance: "QpuManager | None" = None
    _instance_lock = threading.Lock()

    def __init__(self) -> None:
        self._qpus: dict[int, Accelerator] = {}
        self._lock = threading.Lock()

    @classmethod
    def instance(cls) -> "QpuManager":
        if cls._instance is None:
            with cls._instance_lock:
                if cls._instance is None:
                    cls._instance = cls()
        return cls._instance

    def set_qpu(self, qpu: Accelerator, worker: int | None = None) -> None:
        key = current_worker_id() if worker is None else worker
        with self._lock:
            self._qpus[key] = qpu

    def get_qpu(self, worker: int | None = None) -> Accelerator:
        key = current_worker_id() if worker is None else worker
        with self._lock:
            qpu = self._qpus.get(key)
        if qpu is None:
            raise WorkerNotInitializedError(
                f"worker {key} not initialized; call initialize_worker() first in this thread"
            )
        return qpu

    def has_qpu(self, worker: int | None = None) -> bool:
        key = current_worker_id() if worker is None else worker
        with self._lock:
            return key in self._qpus

    def remove(self, worker: int | None = None) -> None:
        key = current_worker_id() if worker is None else worker
        with self._lock:
            self._qpus.pop(key, None)

    def clear(self) -> None:
        with self._lock:
            self._qpus.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._qpus)


def initialize_worker(backend: str = "statevector", config: Mapping[str, Any] | None = None) -> Accelerator:
    """Give the calling worker a fresh private accelerator, replacing any old one."""
    qpu = get_accelerator(backend, config)
    QpuManager.instance().set_qpu(qpu)
    return qpu


def current_qpu() -> Accelerator:
    return QpuManager.instance().get_qpu()


def execute(kernel: Circuit, buffer: AcceleratorBuffer, shots: int | None = None) -> None:
    """Run ``kernel`` on the caller's accelerator and merge counts into ``buffer``.

    Simulation happens outside every lock; only the final merge is guarded.
    """
    qpu = current_qpu()
    if kernel.n_qubits > buffer.size:
        raise ValueError(
            f"kernel {kernel.name!r} needs {kernel.n_qubits} qubits, buffer {buffer.name} has {buffer.size}"
        )
    counts = qpu.execute(kernel, shots)
    buffer.merge(counts)
