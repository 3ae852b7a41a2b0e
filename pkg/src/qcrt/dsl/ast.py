"""Syntax tree for kernel sources. Positions never take part in equality."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


Expr = Union[Num, Var, Neg]


@dataclass(frozen=True)
class QubitRef:
    register: str
    index: Union[int, str]  # literal or loop variable
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SizeOf:
    register: str


Bound = Union[int, SizeOf]


@dataclass(frozen=True)
class GateStmt:
    gate: str
    qubits: tuple[QubitRef, ...]
    params: tuple[Expr, ...] = ()
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ForStmt:
    var: str
    start: Bound
    stop: Bound
    body: tuple["Stmt", ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


Stmt = Union[GateStmt, ForStmt]


@dataclass(frozen=True)
class RegisterParam:
    name: str
    size: int | None = None


@dataclass(frozen=True)
class KernelSource:
    name: str
    register_params: tuple[RegisterParam, ...]
    scalar_params: tuple[str, ...]
    body: tuple[Stmt, ...]

    @property
    def register(self) -> RegisterParam:
        return self.register_params[0]
