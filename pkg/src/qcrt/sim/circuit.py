"""Gate vocabulary and the circuit container kernels compile to."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GateKind(str, enum.Enum):
    H = "H"
    X = "X"
    Y = "Y"
    Z = "Z"
    S = "S"
    T = "T"
    Rx = "Rx"
    Ry = "Ry"
    Rz = "Rz"
    CX = "CX"
    CZ = "CZ"
    CPhase = "CPhase"
    SWAP = "SWAP"
    Measure = "Measure"
    CModMul = "CModMul"


# (qubit count, parameter count); None means variable.
_ARITY: dict[GateKind, tuple[int | None, int]] = {
    GateKind.H: (1, 0),
    GateKind.X: (1, 0),
    GateKind.Y: (1, 0),
    GateKind.Z: (1, 0),
    GateKind.S: (1, 0),
    GateKind.T: (1, 0),
    GateKind.Rx: (1, 1),
    GateKind.Ry: (1, 1),
    GateKind.Rz: (1, 1),
    GateKind.CX: (2, 0),
    GateKind.CZ: (2, 0),
    GateKind.CPhase: (2, 1),
    GateKind.SWAP: (2, 0),
    GateKind.Measure: (1, 0),
    GateKind.CModMul: (None, 2),
}

GATE_NAMES = frozenset(k.value for k in GateKind)


class CircuitError(ValueError):
    """Raised for malformed instructions or circuits."""


@dataclass(frozen=True)
class Instruction:
    """One gate application.

    ``targets`` lists qubit indices. Controlled two-qubit gates put the
    control first. ``CModMul`` takes ``(control, w0, w1, ...)`` where the
    work register qubits are contiguous and ascending (w0 is the least
    significant bit of the work value), with ``params == (a, N)``.
    """

    kind: GateKind
    targets: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(self, "params", tuple(self.params))
        nq, npar = _ARITY[kind]
        if nq is not None and len(self.targets) != nq:
            raise CircuitError(f"{kind.value} expects {nq} qubit(s), got {len(self.targets)}")
        if len(self.params) != npar:
            raise CircuitError(f"{kind.value} expects {npar} parameter(s), got {len(self.params)}")
        if len(set(self.targets)) != len(self.targets):
            raise CircuitError(f"{kind.value} targets must be distinct: {self.targets}")
        if any(t < 0 for t in self.targets):
            raise CircuitError(f"negative qubit index in {self.targets}")
        if kind is GateKind.CModMul:
            _check_cmodmul(self.targets, self.params)

    @property
    def max_qubit(self) -> int:
        return max(self.targets)

    def __str__(self) -> str:
        args = [f"q[{t}]" for t in self.targets] + [repr(p) for p in self.params]
        return f"{self.kind.value}({', '.join(args)})"


def _check_cmodmul(targets: tuple[int, ...], params: tuple) -> None:
    if len(targets) < 2:
        raise CircuitError("CModMul needs a control and at least one work qubit")
    work = targets[1:]
    if list(work) != list(range(work[0], work[0] + len(work))):
        raise CircuitError(f"CModMul work register must be contiguous and ascending: {work}")
    a, modulus = params
    if int(a) != a or int(modulus) != modulus:
        raise CircuitError("CModMul parameters must be integers")
    a, modulus = int(a), int(modulus)
    if modulus < 2 or modulus > (1 << len(work)):
        raise CircuitError(f"modulus {modulus} does not fit a {len(work)}-qubit work register")
    if math.gcd(a, modulus) != 1:
        raise CircuitError(f"CModMul requires gcd(a, N) == 1, got a={a}, N={modulus}")


def cmodmul(control: int, work: Sequence[int], a: int, modulus: int) -> Instruction:
    return Instruction(GateKind.CModMul, (control, *work), (int(a), int(modulus)))


@dataclass
class Circuit:
    n_qubits: int
    instructions: list[Instruction] = field(default_factory=list)
    name: str = "circuit"

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise CircuitError("a circuit needs at least one qubit")
        for inst in self.instructions:
            self._check(inst)

    def _check(self, inst: Instruction) -> None:
        if inst.max_qubit >= self.n_qubits:
            raise CircuitError(
                f"{inst} addresses qubit {inst.max_qubit} in a {self.n_qubits}-qubit circuit"
            )

    def append(self, kind: GateKind | str, targets: Iterable[int], params: Iterable[float] = ()) -> "Circuit":
        inst = Instruction(GateKind(kind), tuple(targets), tuple(params))
        self._check(inst)
        self.instructions.append(inst)
        return self

    def extend(self, insts: Iterable[Instruction]) -> "Circuit":
        for inst in insts:
            self._check(inst)
            self.instructions.append(inst)
        return self

    # short builders, used by the algorithm modules
    def h(self, q): return self.append(GateKind.H, (q,))
    def x(self, q): return self.append(GateKind.X, (q,))
    def ry(self, q, theta): return self.append(GateKind.Ry, (q,), (theta,))
    def cx(self, c, t): return self.append(GateKind.CX, (c, t))
    def swap(self, a, b): return self.append(GateKind.SWAP, (a, b))
    def cphase(self, c, t, theta): return self.append(GateKind.CPhase, (c, t), (theta,))
    def measure(self, q): return self.append(GateKind.Measure, (q,))

    @property
    def measured_qubits(self) -> list[int]:
        """Distinct measured qubits in order of first measurement."""
        seen: dict[int, None] = {}
        for inst in self.instructions:
            if inst.kind is GateKind.Measure:
                seen.setdefault(inst.targets[0], None)
        return list(seen)

    def has_measurements(self) -> bool:
        return any(i.kind is GateKind.Measure for i in self.instructions)

    def measurements_trailing(self) -> bool:
        """True when no gate follows the first Measure."""
        seen_measure = False
        for inst in self.instructions:
            if inst.kind is GateKind.Measure:
                seen_measure = True
            elif seen_measure:
                return False
        return True

    def __len__(self) -> int:
        return len(self.instructions)

    def __str__(self) -> str:
        body = "\n".join(f"  {inst};" for inst in self.instructions)
        return f"{self.name}[{self.n_qubits}] {{\n{body}\n}}"
