"""Recursive-descent parser for ``.xqk`` kernel sources.

Grammar::

    kernel   := 'kernel' IDENT '(' reg (',' IDENT)* ')' block
    reg      := IDENT ('[' INT ']')?
    block    := '{' stmt* '}'
    stmt     := IDENT '(' arg (',' arg)* ')' ';'
              | 'for' IDENT 'in' bound '..' bound block
    bound    := INT | IDENT '.' 'size' '(' ')'
    arg      := IDENT '[' (INT | IDENT) ']' | expr
    expr     := '-' expr | NUMBER | IDENT

``//`` starts a comment running to end of line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from ..sim.circuit import GATE_NAMES
from .ast import (
    Bound,
    Expr,
    ForStmt,
    GateStmt,
    KernelSource,
    Neg,
    Num,
    QubitRef,
    RegisterParam,
    SizeOf,
    Stmt,
    Var,
)


class DslError(Exception):
    def __init__(self, message: str, line: int, col: int) -> None:
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class DslSyntaxError(DslError):
    pass


class UnknownGateError(DslError):
    def __init__(self, gate: str, line: int, col: int) -> None:
        super().__init__(f"unknown gate {gate!r}", line, col)
        self.gate = gate


class UnboundIdentifierError(DslError):
    def __init__(self, name: str, line: int, col: int) -> None:
        super().__init__(f"unbound identifier {name!r}", line, col)
        self.name = name


# qubits (None = two or more), parameters
GATE_SIGNATURES: dict[str, tuple[int | None, int]] = {
    "H": (1, 0), "X": (1, 0), "Y": (1, 0), "Z": (1, 0), "S": (1, 0), "T": (1, 0),
    "Rx": (1, 1), "Ry": (1, 1), "Rz": (1, 1),
    "CX": (2, 0), "CZ": (2, 0), "SWAP": (2, 0), "CPhase": (2, 1),
    "Measure": (1, 0),
    "CModMul": (None, 2),
}
assert set(GATE_SIGNATURES) == GATE_NAMES

KEYWORDS = {"kernel", "for", "in"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<number>\d+\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<dotdot>\.\.)
  | (?P<punct>[()\[\]{},;.\-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, keyword, int, float, punct, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> Iterator[Token]:
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "number":
            yield Token("int" if tok.isdigit() else "float", tok, line, col)
        elif kind == "ident":
            yield Token("keyword" if tok in KEYWORDS else "ident", tok, line, col)
        elif kind in ("dotdot", "punct"):
            yield Token("punct", tok, line, col)
        pos = m.end()
    yield Token("eof", "", line, pos - line_start + 1)


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = list(tokenize(text))
        self.i = 0
        self.register: RegisterParam | None = None
        self.scalars: tuple[str, ...] = ()
        self.loop_vars: list[str] = []

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def _describe(self, tok: Token) -> str:
        return "end of input" if tok.kind == "eof" else repr(tok.text)

    def error(self, expected: str, tok: Token | None = None) -> DslSyntaxError:
        tok = tok or self.tok
        return DslSyntaxError(f"expected {expected}, found {self._describe(tok)}", tok.line, tok.col)

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        return self.tok.kind in ("punct", "keyword") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(repr(text))
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            raise self.error(what)
        return self.advance()

    # -- productions --

    def kernel(self) -> KernelSource:
        self.expect("kernel")
        name = self.expect_kind("ident", "kernel name").text
        self.expect("(")
        reg_tok = self.expect_kind("ident", "register parameter")
        size = None
        if self.at("["):
            self.advance()
            size = int(self.expect_kind("int", "register size").text)
            self.expect("]")
            if size < 1:
                raise DslSyntaxError("register size must be >= 1", reg_tok.line, reg_tok.col)
        self.register = RegisterParam(reg_tok.text, size)
        scalars: list[str] = []
        while self.at(","):
            self.advance()
            tok = self.expect_kind("ident", "parameter name")
            if tok.text in scalars or tok.text == reg_tok.text:
                raise DslSyntaxError(f"duplicate parameter {tok.text!r}", tok.line, tok.col)
            scalars.append(tok.text)
        self.scalars = tuple(scalars)
        self.expect(")")
        body = self.block()
        if self.tok.kind != "eof":
            raise self.error("end of input")
        return KernelSource(name, (self.register,), self.scalars, body)

    def block(self) -> tuple[Stmt, ...]:
        self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                raise self.error("'}'")
            stmts.append(self.stmt())
        self.expect("}")
        return tuple(stmts)

    def stmt(self) -> Stmt:
        if self.at("for"):
            return self.for_stmt()
        if self.tok.kind != "ident":
            raise self.error("gate call or 'for'")
        return self.gate_stmt()

    def for_stmt(self) -> ForStmt:
        start_tok = self.expect("for")
        var_tok = self.expect_kind("ident", "loop variable")
        if var_tok.text in self.loop_vars or var_tok.text in self.scalars or var_tok.text == self.register.name:
            raise DslSyntaxError(f"loop variable {var_tok.text!r} shadows another name", var_tok.line, var_tok.col)
        self.expect("in")
        lo = self.bound()
        self.expect("..")
        hi = self.bound()
        self.loop_vars.append(var_tok.text)
        try:
            body = self.block()
        finally:
            self.loop_vars.pop()
        return ForStmt(var_tok.text, lo, hi, body, start_tok.line, start_tok.col)

    def bound(self) -> Bound:
        if self.tok.kind == "int":
            return int(self.advance().text)
        if self.tok.kind == "ident":
            tok = self.advance()
            if tok.text != self.register.name:
                raise UnboundIdentifierError(tok.text, tok.line, tok.col)
            self.expect(".")
            size_tok = self.expect_kind("ident", "'size'")
            if size_tok.text != "size":
                raise self.error("'size'", size_tok)
            self.expect("(")
            self.expect(")")
            return SizeOf(tok.text)
        raise self.error("integer or register.size()")

    def gate_stmt(self) -> GateStmt:
        gate_tok = self.advance()
        if gate_tok.text not in GATE_SIGNATURES:
            raise UnknownGateError(gate_tok.text, gate_tok.line, gate_tok.col)
        self.expect("(")
        args: list[QubitRef | Expr] = [self.arg()]
        while self.at(","):
            self.advance()
            args.append(self.arg())
        self.expect(")")
        self.expect(";")
        qubits = [a for a in args if isinstance(a, QubitRef)]
        params = [a for a in args if not isinstance(a, QubitRef)]
        nq, npar = GATE_SIGNATURES[gate_tok.text]
        ordered = args[: len(qubits)] == qubits
        ok_q = len(qubits) >= 2 if nq is None else len(qubits) == nq
        if not (ordered and ok_q and len(params) == npar):
            want = "two or more" if nq is None else str(nq)
            raise DslSyntaxError(
                f"{gate_tok.text} takes {want} qubit argument(s) followed by {npar} parameter(s)",
                gate_tok.line,
                gate_tok.col,
            )
        return GateStmt(gate_tok.text, tuple(qubits), tuple(params), gate_tok.line, gate_tok.col)

    def arg(self) -> QubitRef | Expr:
        if self.tok.kind == "ident" and self.tokens[self.i + 1].text == "[":
            reg = self.advance()
            if reg.text != self.register.name:
                raise UnboundIdentifierError(reg.text, reg.line, reg.col)
            self.expect("[")
            if self.tok.kind == "int":
                index: int | str = int(self.advance().text)
            elif self.tok.kind == "ident":
                itok = self.advance()
                if itok.text not in self.loop_vars:
                    raise UnboundIdentifierError(itok.text, itok.line, itok.col)
                index = itok.text
            else:
                raise self.error("qubit index")
            self.expect("]")
            return QubitRef(reg.text, index, reg.line, reg.col)
        return self.expr()

    def expr(self) -> Expr:
        if self.at("-"):
            self.advance()
            return Neg(self.expr())
        if self.tok.kind in ("int", "float"):
            return Num(float(self.advance().text))
        if self.tok.kind == "ident":
            tok = self.advance()
            if tok.text not in self.scalars and tok.text not in self.loop_vars:
                raise UnboundIdentifierError(tok.text, tok.line, tok.col)
            return Var(tok.text, tok.line, tok.col)
        raise self.error("qubit reference or expression")


def parse_kernel(text: str) -> KernelSource:
    """Parse one kernel definition. Pure; safe to call from any thread."""
    return _Parser(text).kernel()


def _fmt_expr(e: Expr) -> str:
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, Var):
        return e.name
    return "-" + _fmt_expr(e.operand)


def _fmt_bound(b: Bound) -> str:
    return f"{b.register}.size()" if isinstance(b, SizeOf) else str(b)


def pretty_print(src: KernelSource) -> str:
    reg = src.register
    head = reg.name + (f"[{reg.size}]" if reg.size is not None else "")
    params = ", ".join((head, *src.scalar_params))
    lines = [f"kernel {src.name}({params}) {{"]

    def emit(stmts, depth: int) -> None:
        pad = "  " * depth
        for s in stmts:
            if isinstance(s, ForStmt):
                lines.append(f"{pad}for {s.var} in {_fmt_bound(s.start)}..{_fmt_bound(s.stop)} {{")
                emit(s.body, depth + 1)
                lines.append(pad + "}")
            else:
                args = [f"{q.register}[{q.index}]" for q in s.qubits] + [_fmt_expr(p) for p in s.params]
                lines.append(f"{pad}{s.gate}({', '.join(args)});")

    emit(src.body, 1)
    lines.append("}")
    return "\n".join(lines) + "\n"
