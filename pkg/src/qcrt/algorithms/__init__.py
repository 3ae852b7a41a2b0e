"""Workloads: Bell, Shor order finding, deuteron VQE."""
from .bell import bell_kernel
from .qft import inverse_qft, inverse_qft_instructions, qft, qft_instructions
from .shor import (
    Attempt,
    FactorResult,
    OrderEstimate,
    ShorParams,
    continued_fraction_convergents,
    divisors_from_order,
    estimate_order,
    multiplicative_order,
    shor_attempt,
    shor_factor,
    shor_kernel,
)
from .vqe import (
    GradientDescent,
    Hamiltonian,
    ObjectiveFunction,
    OptimizerResult,
    Term,
    VqeConfig,
    ansatz,
    deuteron_hamiltonian,
    objective,
    vqe_minimize,
)

__all__ = [
    "Attempt",
    "FactorResult",
    "GradientDescent",
    "Hamiltonian",
    "ObjectiveFunction",
    "OptimizerResult",
    "OrderEstimate",
    "ShorParams",
    "Term",
    "VqeConfig",
    "ansatz",
    "bell_kernel",
    "continued_fraction_convergents",
    "deuteron_hamiltonian",
    "divisors_from_order",
    "estimate_order",
    "inverse_qft",
    "inverse_qft_instructions",
    "multiplicative_order",
    "objective",
    "qft",
    "qft_instructions",
    "shor_attempt",
    "shor_factor",
    "shor_kernel",
    "vqe_minimize",
]
