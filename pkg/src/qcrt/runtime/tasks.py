"""Spawn/join task primitives for classical tasks that call quantum kernels."""
from __future__ import annotations

import threading
from typing import Any, Callable, Generic, Mapping, TypeVar

from .manager import QpuManager, initialize_worker

T = TypeVar("T")


class TaskError(RuntimeError):
    """A spawned task raised; the original exception is ``__cause__``."""


class TaskJoinError(RuntimeError):
    """The handle was already joined."""


class TaskHandle(Generic[T]):
    def __init__(self, target: Callable[..., T], args: tuple, kwargs: dict, name: str | None = None) -> None:
        self._target = target
        self._args = args
        self._kwargs = kwargs
        self._result: Any = None
        self._exc: BaseException | None = None
        self._joined = False
        self._join_lock = threading.Lock()
        self._thread = threading.Thread(target=self._run, name=name, daemon=True)

    def _run(self) -> None:
        try:
            self._result = self._target(*self._args, **self._kwargs)
        except BaseException as exc:  # surfaced on join
            self._exc = exc

    def _start(self) -> "TaskHandle[T]":
        self._thread.start()
        return self

    def done(self) -> bool:
        return not self._thread.is_alive()

    def join(self, timeout: float | None = None) -> T:
        """Wait for the task and return its value. Valid exactly once."""
        with self._join_lock:
            if self._joined:
                raise TaskJoinError("task handle already joined")
            self._thread.join(timeout)
            if self._thread.is_alive():
                raise TimeoutError("task still running")
            self._joined = True
        if self._exc is not None:
            raise TaskError(f"task {self._thread.name} failed: {self._exc!r}") from self._exc
        return self._result

    get = join


def spawn(task: Callable[..., T], *args: Any, **kwargs: Any) -> TaskHandle[T]:
    """Run ``task(*args, **kwargs)`` on a new thread."""
    return TaskHandle(task, args, kwargs)._start()


def join(handle: TaskHandle[T]) -> T:
    return handle.join()


def spawn_initialized(
    task: Callable[..., T],
    *args: Any,
    backend: str | None = None,
    config: Mapping[str, Any] | None = None,
    **kwargs: Any,
) -> TaskHandle[T]:
    """Like :func:`spawn`, but the new thread gets its own accelerator first.

    Backend and config default to those of the spawning worker's
    accelerator when it has one, else the statevector defaults.
    """
    if config is None:
        mgr = QpuManager.instance()
        if mgr.has_qpu():
            parent = mgr.get_qpu()
            config = parent.config
            backend = backend or parent.backend_name
    backend = backend or "statevector"

    def run() -> T:
        initialize_worker(backend, config)
        return task(*args, **kwargs)

    return spawn(run)
