"""Quantum Fourier transform on a little-endian register."""
from __future__ import annotations

import math
from typing import Sequence

from ..sim import Circuit, GateKind, Instruction


def qft_instructions(qubits: Sequence[int]) -> list[Instruction]:
    """|x> -> Q^-1/2 sum_y exp(2 pi i x y / Q) |y>, qubits[0] the LSB of x and y."""
    t = len(qubits)
    out: list[Instruction] = []
    for j in reversed(range(t)):
        out.append(Instruction(GateKind.H, (qubits[j],)))
        for k in reversed(range(j)):
            out.append(Instruction(GateKind.CPhase, (qubits[k], qubits[j]), (math.pi / (1 << (j - k)),)))
    for i in range(t // 2):
        out.append(Instruction(GateKind.SWAP, (qubits[i], qubits[t - 1 - i])))
    return out


def inverse_qft_instructions(qubits: Sequence[int]) -> list[Instruction]:
    out = []
    for inst in reversed(qft_instructions(qubits)):
        if inst.kind is GateKind.CPhase:
            inst = Instruction(GateKind.CPhase, inst.targets, (-inst.params[0],))
        out.append(inst)
    return out


def qft(circuit: Circuit, qubits: Sequence[int]) -> Circuit:
    return circuit.extend(qft_instructions(qubits))


def inverse_qft(circuit: Circuit, qubits: Sequence[int]) -> Circuit:
    return circuit.extend(inverse_qft_instructions(qubits))
