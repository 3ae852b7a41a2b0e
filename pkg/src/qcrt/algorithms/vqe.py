"""Variational eigensolver for the two-qubit deuteron model."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Protocol, Sequence

import numpy as np

from ..sim import Circuit, PauliString, StateVector, expectation, gate_matrix, statevector
from ..sim.circuit import GateKind, Instruction


@dataclass(frozen=True)
class Term:
    coefficient: float
    pauli: PauliString


class Hamiltonian:
    """Real-weighted sum of Pauli strings."""

    def __init__(self, terms: Iterable[tuple[float, PauliString | dict | str]] = ()) -> None:
        self.terms: list[Term] = []
        for coef, p in terms:
            if isinstance(p, str):
                p = PauliString.parse(p)
            elif isinstance(p, dict):
                p = PauliString(p)
            self.terms.append(Term(float(coef), p))

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def n_qubits(self) -> int:
        return max((t.pauli.max_qubit for t in self.terms), default=-1) + 1

    def expectation(self, state: StateVector) -> float:
        return sum(t.coefficient * expectation(state, t.pauli) for t in self.terms)

    def to_matrix(self, n_qubits: int | None = None) -> np.ndarray:
        n = n_qubits or self.n_qubits
        mats = {p: gate_matrix(Instruction(GateKind(p), (0,))) for p in "XYZ"}
        out = np.zeros((1 << n, 1 << n), dtype=np.complex128)
        for t in self.terms:
            ops = t.pauli.as_dict()
            m = np.ones((1, 1), dtype=np.complex128)
            for q in reversed(range(n)):
                m = np.kron(m, mats[ops[q]] if q in ops else np.eye(2))
            out += t.coefficient * m
        return out

    def ground_energy(self) -> float:
        return float(np.linalg.eigvalsh(self.to_matrix())[0])

    def __str__(self) -> str:
        return " + ".join(f"{t.coefficient:g} {t.pauli}" for t in self.terms)


def deuteron_hamiltonian() -> Hamiltonian:
    return Hamiltonian([
        (5.907, PauliString()),
        (-2.1433, PauliString({0: "X", 1: "X"})),
        (-2.1433, PauliString({0: "Y", 1: "Y"})),
        (0.21829, PauliString({0: "Z"})),
        (-6.125, PauliString({1: "Z"})),
    ])


def ansatz(theta: float) -> Circuit:
    """X(q0); Ry(q1, theta); CX(q1, q0)."""
    return Circuit(2, name="ansatz").x(0).ry(1, float(theta)).cx(1, 0)


class ObjectiveFunction:
    """Energy of a parameterised circuit plus a finite-difference gradient.

    Calling it returns ``(energy, gradient)``.
    """

    GRADIENTS = ("central", "forward", "backward")

    def __init__(
        self,
        ansatz: Callable[..., Circuit],
        hamiltonian: Hamiltonian,
        n_params: int = 1,
        step: float = 1e-3,
        gradient: str = "central",
        accelerator=None,
    ) -> None:
        if step <= 0:
            raise ValueError("step must be > 0")
        if gradient not in self.GRADIENTS:
            raise ValueError(f"gradient strategy must be one of {self.GRADIENTS}")
        self.ansatz = ansatz
        self.hamiltonian = hamiltonian
        self.n_params = n_params
        self.step = step
        self.gradient = gradient
        self.accelerator = accelerator
        self.evaluations = 0

    def energy(self, params: Sequence[float]) -> float:
        params = self._check(params)
        self.evaluations += 1
        circuit = self.ansatz(*params)
        state = self.accelerator.statevector(circuit) if self.accelerator is not None else statevector(circuit)
        return self.hamiltonian.expectation(state)

    def _check(self, params) -> np.ndarray:
        params = np.atleast_1d(np.asarray(params, dtype=float))
        if params.shape != (self.n_params,):
            raise ValueError(f"expected {self.n_params} parameter(s), got {params.shape[0]}")
        return params

    def gradient_at(self, params: Sequence[float], energy: float | None = None) -> np.ndarray:
        params = self._check(params)
        h = self.step
        grad = np.empty(self.n_params)
        for i in range(self.n_params):
            e = np.zeros(self.n_params)
            e[i] = h
            if self.gradient == "central":
                grad[i] = (self.energy(params + e) - self.energy(params - e)) / (2 * h)
            elif self.gradient == "forward":
                f0 = self.energy(params) if energy is None else energy
                grad[i] = (self.energy(params + e) - f0) / h
            else:
                f0 = self.energy(params) if energy is None else energy
                grad[i] = (f0 - self.energy(params - e)) / h
        return grad

    def __call__(self, params: Sequence[float]) -> tuple[float, np.ndarray]:
        energy = self.energy(params)
        return energy, self.gradient_at(params, energy)


def objective(theta: Sequence[float], step: float = 1e-3) -> tuple[float, np.ndarray]:
    """Deuteron energy and central-difference gradient at ``theta``."""
    return ObjectiveFunction(ansatz, deuteron_hamiltonian(), 1, step)(theta)


@dataclass
class OptimizerResult:
    opt_val: float
    opt_params: np.ndarray
    iterations: int
    converged: bool
    history: list[float] = field(default_factory=list)


class Optimizer(Protocol):
    def optimize(self, objective: Callable, x0: Sequence[float]) -> OptimizerResult: ...


@dataclass
class GradientDescent:
    """Steepest descent with Armijo backtracking.

    The trial step starts from twice the last accepted one, so a good step
    length carries over between iterations.
    """

    tolerance: float = 1e-5
    max_iterations: int = 200
    initial_step: float = 1.0
    shrink: float = 0.5
    armijo: float = 0.5
    min_step: float = 1e-12

    def optimize(self, objective: Callable, x0: Sequence[float]) -> OptimizerResult:
        x = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
        f, g = objective(x)
        history = [f]
        alpha = self.initial_step
        for it in range(self.max_iterations):
            gnorm = float(np.linalg.norm(g))
            if gnorm < self.tolerance:
                return OptimizerResult(f, x, it, True, history)
            alpha = min(2 * alpha, self.initial_step) if it else alpha
            while True:
                trial = x - alpha * g
                f_trial, g_trial = objective(trial)
                if f_trial <= f - self.armijo * alpha * gnorm ** 2:
                    break
                alpha *= self.shrink
                if alpha < self.min_step:
                    return OptimizerResult(f, x, it, False, history)
            x, f, g = trial, f_trial, g_trial
            history.append(f)
        converged = float(np.linalg.norm(g)) < self.tolerance
        return OptimizerResult(f, x, self.max_iterations, converged, history)


@dataclass
class VqeConfig:
    n_params: int = 1
    step: float = 1e-3
    gradient: str = "central"
    tolerance: float = 1e-5
    max_iterations: int = 200
    theta: tuple[float, ...] = (0.0,)

    def __post_init__(self) -> None:
        self.theta = tuple(float(t) for t in np.atleast_1d(self.theta))
        if self.step <= 0:
            raise ValueError("step must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if len(self.theta) != self.n_params:
            raise ValueError("theta length must equal n_params")


def vqe_minimize(
    config: VqeConfig | None = None,
    hamiltonian: Hamiltonian | None = None,
    optimizer: Optimizer | None = None,
    circuit: Callable[..., Circuit] = ansatz,
    accelerator=None,
) -> OptimizerResult:
    """Minimise <ansatz(theta)|H|ansatz(theta)>; returns best-so-far on non-convergence."""
    config = config or VqeConfig()
    hamiltonian = hamiltonian or deuteron_hamiltonian()
    optimizer = optimizer or GradientDescent(config.tolerance, config.max_iterations)
    obj = ObjectiveFunction(circuit, hamiltonian, config.n_params, config.step, config.gradient, accelerator)
    return optimizer.optimize(obj, config.theta)

