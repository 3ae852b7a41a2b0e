"""State-vector simulator core."""
from .circuit import GATE_NAMES, Circuit, CircuitError, GateKind, Instruction, cmodmul
from .pauli import PauliString
from .shots import Counts, run_shots, shot_stream
from .statevector import (
    ChunkPool,
    StateVector,
    apply_gate,
    evolve,
    expectation,
    gate_matrix,
    measure_qubit,
    prob_one,
    statevector,
)

__all__ = [
    "GATE_NAMES",
    "ChunkPool",
    "Circuit",
    "CircuitError",
    "Counts",
    "GateKind",
    "Instruction",
    "PauliString",
    "StateVector",
    "apply_gate",
    "cmodmul",
    "evolve",
    "expectation",
    "gate_matrix",
    "measure_qubit",
    "prob_one",
    "run_shots",
    "shot_stream",
    "statevector",
]
