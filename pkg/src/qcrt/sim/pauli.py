from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping


@dataclass(frozen=True)
class PauliString:
    """Sparse tensor product of single-qubit Paulis; identity where unlisted."""

    ops: tuple[tuple[int, str], ...] = ()

    def __init__(self, ops: Mapping[int, str] | None = None) -> None:
        items = []
        for q, p in sorted((ops or {}).items()):
            p = p.upper()
            if p not in ("X", "Y", "Z"):
                raise ValueError(f"unknown Pauli {p!r} on qubit {q}")
            if q < 0:
                raise ValueError(f"negative qubit index {q}")
            items.append((int(q), p))
        object.__setattr__(self, "ops", tuple(items))

    @classmethod
    def parse(cls, text: str) -> "PauliString":
        """Parse ``"X0 X1"`` / ``"Z0"`` / ``"I"`` style labels."""
        ops: dict[int, str] = {}
        for tok in text.replace("*", " ").split():
            if tok.upper() == "I":
                continue
            p, q = tok[0], int(tok[1:].strip("()"))
            if q in ops:
                raise ValueError(f"qubit {q} appears twice in {text!r}")
            ops[q] = p
        return cls(ops)

    def as_dict(self) -> dict[int, str]:
        return dict(self.ops)

    @property
    def is_identity(self) -> bool:
        return not self.ops

    @property
    def max_qubit(self) -> int:
        return max((q for q, _ in self.ops), default=-1)

    def __str__(self) -> str:
        return " ".join(f"{p}{q}" for q, p in self.ops) or "I"
