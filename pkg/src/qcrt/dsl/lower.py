from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

from ..sim import Circuit, CircuitError, GateKind, Instruction
from .ast import Bound, Expr, ForStmt, GateStmt, KernelSource, Neg, Num, SizeOf, Var
from .parser import DslError, parse_kernel

KERNEL_SUFFIX = ".xqk"
_SHIPPED = Path(__file__).resolve().parent.parent / "kernels"


class LoweringError(DslError):
    pass


def _eval(e: Expr, env: Mapping[str, float]) -> float:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return float(env[e.name])
    if isinstance(e, Neg):
        return -_eval(e.operand, env)
    raise TypeError(e)


def _bound(b: Bound, size: int) -> int:
    return size if isinstance(b, SizeOf) else b


def inferred_size(src: KernelSource) -> int | None:
    """Declared register size, else one past the largest literal index.

    Literal loop bounds count too; ``q.size()`` bounds carry no information.
    """
    if src.register.size is not None:
        return src.register.size
    best = 0

    def walk(stmts, ranges: dict[str, int]) -> None:
        nonlocal best
        for s in stmts:
            if isinstance(s, ForStmt):
                hi = s.stop if isinstance(s.stop, int) else None
                inner = dict(ranges)
                if hi is not None:
                    inner[s.var] = hi
                else:
                    inner.pop(s.var, None)
                walk(s.body, inner)
            else:
                for q in s.qubits:
                    if isinstance(q.index, int):
                        best = max(best, q.index + 1)
                    elif q.index in ranges:
                        best = max(best, ranges[q.index])

    walk(src.body, {})
    return best or None


def lower(
    src: KernelSource,
    register_size: int | None = None,
    scalar_args: Sequence[float] | Mapping[str, float] = (),
) -> Circuit:
    """Unroll loops and bind parameters into a flat :class:`Circuit`.

    Without ``register_size`` the size comes from :func:`inferred_size`.
    """
    declared = src.register.size
    if register_size is None:
        register_size = inferred_size(src)
        if register_size is None:
            raise LoweringError(f"cannot infer the size of register {src.register.name!r}; pass register_size", 1, 1)
    elif declared is not None and declared != register_size:
        raise LoweringError(
            f"register {src.register.name!r} declared with {declared} qubits, lowered with {register_size}", 1, 1
        )
    if register_size < 1:
        raise LoweringError("register size must be >= 1", 1, 1)

    if isinstance(scalar_args, Mapping):
        missing = set(src.scalar_params) - set(scalar_args)
        extra = set(scalar_args) - set(src.scalar_params)
        if missing or extra:
            raise LoweringError(
                f"kernel {src.name!r} parameters {list(src.scalar_params)}; missing {sorted(missing)}, unexpected {sorted(extra)}",
                1,
                1,
            )
        env = {k: float(scalar_args[k]) for k in src.scalar_params}
    else:
        args = list(scalar_args)
        if len(args) != len(src.scalar_params):
            raise LoweringError(
                f"kernel {src.name!r} takes {len(src.scalar_params)} scalar argument(s), got {len(args)}", 1, 1
            )
        env = {k: float(v) for k, v in zip(src.scalar_params, args)}

    circuit = Circuit(register_size, name=src.name)

    def walk(stmts, scope: dict[str, float]) -> None:
        for s in stmts:
            if isinstance(s, ForStmt):
                for i in range(_bound(s.start, register_size), _bound(s.stop, register_size)):
                    walk(s.body, {**scope, s.var: i})
                continue
            assert isinstance(s, GateStmt)
            targets = []
            for q in s.qubits:
                idx = q.index if isinstance(q.index, int) else int(scope[q.index])
                if not 0 <= idx < register_size:
                    raise LoweringError(
                        f"qubit index {q.register}[{idx}] out of bounds for register of size {register_size}",
                        q.line,
                        q.col,
                    )
                targets.append(idx)
            params = [_eval(p, scope) for p in s.params]
            try:
                circuit.extend([Instruction(GateKind(s.gate), tuple(targets), tuple(params))])
            except CircuitError as exc:
                raise LoweringError(str(exc), s.line, s.col) from exc

    walk(src.body, env)
    return circuit


def shipped_kernel_path(name: str) -> Path:
    return _SHIPPED / f"{name}{KERNEL_SUFFIX}"


def shipped_kernels() -> list[str]:
    return sorted(p.stem for p in _SHIPPED.glob(f"*{KERNEL_SUFFIX}"))


def load_kernel(path_or_name: str | Path) -> KernelSource:
    """Parse a ``.xqk`` file, or a shipped kernel given by bare name."""
    path = Path(path_or_name)
    if not path.exists() and path.suffix == "" and shipped_kernel_path(str(path_or_name)).exists():
        path = shipped_kernel_path(str(path_or_name))
    return parse_kernel(path.read_text(encoding="utf-8"))
