from __future__ import annotations

from ..sim import Circuit


def bell_kernel(n: int = 2) -> Circuit:
    """H(q0); CX(q0, q1); then Measure every qubit in index order."""
    if n != 2:
        raise ValueError(f"the Bell kernel is defined on 2 qubits, got {n}")
    c = Circuit(n, name="bell").h(0).cx(0, 1)
    for q in range(n):
        c.measure(q)
    return c
