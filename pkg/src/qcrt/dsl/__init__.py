"""Textual kernel language (``.xqk``): parser, pretty-printer, lowering."""
from .ast import ForStmt, GateStmt, KernelSource, Neg, Num, QubitRef, RegisterParam, SizeOf, Var
from .lower import KERNEL_SUFFIX, LoweringError, inferred_size, load_kernel, lower, shipped_kernel_path, shipped_kernels
from .parser import (
    DslError,
    DslSyntaxError,
    UnboundIdentifierError,
    UnknownGateError,
    parse_kernel,
    pretty_print,
    tokenize,
)

__all__ = [
    "KERNEL_SUFFIX",
    "DslError",
    "DslSyntaxError",
    "ForStmt",
    "GateStmt",
    "KernelSource",
    "LoweringError",
    "Neg",
    "Num",
    "QubitRef",
    "RegisterParam",
    "SizeOf",
    "UnboundIdentifierError",
    "UnknownGateError",
    "Var",
    "inferred_size",
    "load_kernel",
    "lower",
    "parse_kernel",
    "pretty_print",
    "shipped_kernel_path",
    "shipped_kernels",
    "tokenize",
]
