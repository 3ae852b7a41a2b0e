"""Thread-safe runtime: buffers, accelerators, per-worker QPUs, tasks."""
from .accelerator import (
    WORKERS_ENV,
    Accelerator,
    StatevectorAccelerator,
    UnknownBackendError,
    backend_names,
    default_workers,
    get_accelerator,
    register_backend,
)
from .buffer import AcceleratorBuffer, BufferRegistry, buffer_to_json, get_registry, qalloc
from .manager import (
    QpuManager,
    WorkerNotInitializedError,
    current_qpu,
    current_worker_id,
    execute,
    initialize_worker,
)
from .tasks import TaskError, TaskHandle, TaskJoinError, join, spawn, spawn_initialized

__all__ = [
    "WORKERS_ENV",
    "Accelerator",
    "AcceleratorBuffer",
    "BufferRegistry",
    "QpuManager",
    "StatevectorAccelerator",
    "TaskError",
    "TaskHandle",
    "TaskJoinError",
    "UnknownBackendError",
    "WorkerNotInitializedError",
    "backend_names",
    "buffer_to_json",
    "current_qpu",
    "current_worker_id",
    "default_workers",
    "execute",
    "get_accelerator",
    "get_registry",
    "initialize_worker",
    "join",
    "qalloc",
    "register_backend",
    "spawn",
    "spawn_initialized",
]
