"""Textual circuit calculus: lexer, parser, two-level typechecker and
evaluator.

Grammar (fixed)::

    program := (let NAME = expr NEWLINE)* expr
    expr    := term (';' term)*            # diagram order: LEFT runs FIRST
    term    := factor ('(+)' factor)*
    factor  := atom ('(x)' atom)*
    atom    := builtin | 'id[' nat ']' | 'phase(' angle ')'
             | 'init[' nat ',' nat ']' | 'measure[' nats ']'
             | 'discard[' nats ']' | '(' expr ')' | name

Precedence: (x) binds tighter than (+), which binds tighter than ';'.
Builtins: H, T, S, X, Z, swap, cnot.  Angles are rational multiples of pi
(``pi``, ``pi/4``, ``3*pi/2``) kept exact until evaluation, or plain
decimals in radians.  Files use UTF-8 with '#' line comments, one
statement per line.

Expressions without measure/discard are pure and denote isometries;
anything else denotes a channel, with pure subterms promoted through the
canonical embedding at the boundary where they meet a channel context.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from . import algebra as al
from . import linalg as la
from .errors import CircuitSyntaxError, CircuitTypeError


# ---------------------------------------------------------------------------
# angles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Angle:
    """An angle in radians; pi-multiples stay exact until evaluation."""

    pi_multiple: Fraction | None = None
    raw: float = 0.0

    def radians(self) -> float:
        if self.pi_multiple is not None:
            return float(self.pi_multiple) * math.pi
        return self.raw

    def format(self) -> str:
        if self.pi_multiple is None:
            return repr(self.raw)
        f = self.pi_multiple
        sign = "-" if f < 0 else ""
        f = abs(f)
        if f == 0:
            return "0"
        num = "pi" if f.numerator == 1 else f"{f.numerator}*pi"
        return f"{sign}{num}" if f.denominator == 1 else f"{sign}{num}/{f.denominator}"


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Gate:
    name: str


@dataclass(frozen=True)
class Perm:
    kind: str  # "gamma_times"
    a: int
    b: int


@dataclass(frozen=True)
class Id:
    n: int


@dataclass(frozen=True)
class PhaseGate:
    angle: Angle


@dataclass(frozen=True)
class Init:
    m: int
    n: int


@dataclass(frozen=True)
class Measure:
    parts: tuple[int, ...]


@dataclass(frozen=True)
class Discard:
    dims: tuple[int, ...]


@dataclass(frozen=True)
class Seq:
    first: "Expr"
    then: "Expr"


@dataclass(frozen=True)
class Oplus:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Otimes:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class LetDef:
    name: str
    bound: "Expr"
    body: "Expr"


Expr = Union[Gate, Perm, Id, PhaseGate, Init, Measure, Discard, Seq, Oplus, Otimes, Name, LetDef]

# swap is handled separately: it parses to the tensor symmetry Perm node
BUILTIN_GATES = ("H", "T", "S", "X", "Z", "cnot")


# ---------------------------------------------------------------------------
# lexer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<OPLUS>\(\+\)) | (?P<OTIMES>\(x\)) |
    (?P<NUMBER>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?) |
    (?P<NAME>[A-Za-z_][A-Za-z0-9_]*) |
    (?P<SYM>[()\[\],;=*/\-]) |
    (?P<WS>\s+)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def _lex(text: str, line: int = 1) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise CircuitSyntaxError(f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = m.lastgroup
        if kind != "WS":
            tok_kind = m.group() if kind == "SYM" else kind
            out.append(Token(tok_kind, m.group(), line, pos + 1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens: list[Token], line: int):
        self.tokens = tokens
        self.pos = 0
        self.line = line

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise CircuitSyntaxError("unexpected end of input", self.line, None)
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            raise CircuitSyntaxError(f"expected {kind!r}, got {tok.text!r}", tok.line, tok.column)
        return tok

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    # expr := term (';' term)*
    def expr(self) -> Expr:
        node = self.term()
        while (tok := self.peek()) is not None and tok.kind == ";":
            self.next()
            node = Seq(node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while (tok := self.peek()) is not None and tok.kind == "OPLUS":
            self.next()
            node = Oplus(node, self.factor())
        return node

    def factor(self) -> Expr:
        node = self.atom()
        while (tok := self.peek()) is not None and tok.kind == "OTIMES":
            self.next()
            node = Otimes(node, self.atom())
        return node

    def _nat(self) -> int:
        tok = self.expect("NUMBER")
        if "." in tok.text or "e" in tok.text or "E" in tok.text:
            raise CircuitSyntaxError(f"expected a natural number, got {tok.text!r}", tok.line, tok.column)
        return int(tok.text)

    def _nat_list(self) -> tuple[int, ...]:
        out = [self._nat()]
        while (tok := self.peek()) is not None and tok.kind == ",":
            self.next()
            out.append(self._nat())
        return tuple(out)

    def _angle(self) -> Angle:
        sign = 1
        tok = self.peek()
        if tok is not None and tok.kind == "-":
            self.next()
            sign = -1
        tok = self.next()
        if tok.kind == "NAME" and tok.text == "pi":
            coef = Fraction(1)
        elif tok.kind == "NUMBER":
            coef = Fraction(tok.text)
            nxt = self.peek()
            if nxt is not None and nxt.kind == "*":
                self.next()
                pi_tok = self.expect("NAME")
                if pi_tok.text != "pi":
                    raise CircuitSyntaxError(f"expected 'pi', got {pi_tok.text!r}", pi_tok.line, pi_tok.column)
            else:
                # plain radians, possibly divided
                if nxt is not None and nxt.kind == "/":
                    self.next()
                    den = self.expect("NUMBER")
                    coef = coef / Fraction(den.text)
                return Angle(raw=sign * float(coef))
        else:
            raise CircuitSyntaxError(f"expected an angle, got {tok.text!r}", tok.line, tok.column)
        nxt = self.peek()
        if nxt is not None and nxt.kind == "/":
            self.next()
            den = self.expect("NUMBER")
            coef = coef / Fraction(den.text)
        return Angle(pi_multiple=sign * coef)

    def atom(self) -> Expr:
        tok = self.next()
        if tok.kind == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if tok.kind != "NAME":
            raise CircuitSyntaxError(f"unexpected token {tok.text!r}", tok.line, tok.column)
        word = tok.text
        if word == "id":
            self.expect("[")
            n = self._nat()
            self.expect("]")
            return Id(n)
        if word == "phase":
            self.expect("(")
            angle = self._angle()
            self.expect(")")
            return PhaseGate(angle)
        if word == "init":
            self.expect("[")
            m = self._nat()
            self.expect(",")
            n = self._nat()
            self.expect("]")
            return Init(m, n)
        if word == "measure":
            self.expect("[")
            parts = self._nat_list()
            self.expect("]")
            return Measure(parts)
        if word == "discard":
            self.expect("[")
            dims = self._nat_list()
            self.expect("]")
            return Discard(dims)
        if word == "swap":
            return Perm("gamma_times", 2, 2)
        if word in BUILTIN_GATES:
            return Gate(word)
        return Name(word)


def _strip_comment(line: str) -> str:
    idx = line.find("#")
    return line if idx < 0 else line[:idx]


def parse(text: str) -> Expr:
    """Parse a program: optional let-bindings, one statement per line,
    ending in a final expression."""
    lets: list[tuple[str, Expr]] = []
    body: Expr | None = None
    for lineno, raw in enumerate(text.splitlines() or [text], start=1):
        stripped = _strip_comment(raw).strip()
        if not stripped:
            continue
        tokens = _lex(stripped, lineno)
        parser = _Parser(tokens, lineno)
        first = parser.peek()
        if first is not None and first.kind == "NAME" and first.text == "let":
            parser.next()
            name_tok = parser.expect("NAME")
            parser.expect("=")
            bound = parser.expr()
            if not parser.at_end():
                tok = parser.peek()
                raise CircuitSyntaxError(f"trailing input {tok.text!r}", tok.line, tok.column)
            lets.append((name_tok.text, bound))
        else:
            if body is not None:
                raise CircuitSyntaxError("multiple body expressions; combine with ';'", lineno, 1)
            body = parser.expr()
            if not parser.at_end():
                tok = parser.peek()
                raise CircuitSyntaxError(f"trailing input {tok.text!r}", tok.line, tok.column)
    if body is None:
        raise CircuitSyntaxError("program has no final expression", 1, 1)
    for name, bound in reversed(lets):
        body = LetDef(name, bound, body)
    return body


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

_PREC_SEQ, _PREC_OPLUS, _PREC_OTIMES, _PREC_ATOM = 0, 1, 2, 3


def _fmt(e: Expr, ctx: int) -> str:
    if isinstance(e, Seq):
        s = f"{_fmt(e.first, _PREC_SEQ)} ; {_fmt(e.then, _PREC_OPLUS)}"
        return f"({s})" if ctx > _PREC_SEQ else s
    if isinstance(e, Oplus):
        s = f"{_fmt(e.left, _PREC_OPLUS)} (+) {_fmt(e.right, _PREC_OTIMES)}"
        return f"({s})" if ctx > _PREC_OPLUS else s
    if isinstance(e, Otimes):
        s = f"{_fmt(e.left, _PREC_OTIMES)} (x) {_fmt(e.right, _PREC_ATOM)}"
        return f"({s})" if ctx > _PREC_OTIMES else s
    if isinstance(e, Gate):
        return e.name
    if isinstance(e, Perm):
        return "swap"
    if isinstance(e, Id):
        return f"id[{e.n}]"
    if isinstance(e, PhaseGate):
        return f"phase({e.angle.format()})"
    if isinstance(e, Init):
        return f"init[{e.m},{e.n}]"
    if isinstance(e, Measure):
        return f"measure[{','.join(str(p) for p in e.parts)}]"
    if isinstance(e, Discard):
        return f"discard[{','.join(str(d) for d in e.dims)}]"
    if isinstance(e, Name):
        return e.name
    raise CircuitTypeError(f"cannot print node {e!r}")


def format_expr(e: Expr) -> str:
    """Normalized source; parse(format_expr(e)) reproduces the tree."""
    lines = []
    while isinstance(e, LetDef):
        lines.append(f"let {e.name} = {_fmt(e.bound, _PREC_SEQ)}")
        e = e.body
    lines.append(_fmt(e, _PREC_SEQ))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CircuitType:
    level: str  # "pure" | "channel"
    dom: object  # int (pure) or tuple[int, ...] (channel)
    cod: object

    def promoted(self) -> "CircuitType":
        if self.level == "channel":
            return self
        return CircuitType("channel", (self.dom,) if self.dom else (), (self.cod,))


_GATE_DIMS = {"H": (2, 2), "T": (2, 2), "S": (2, 2), "X": (2, 2), "Z": (2, 2), "cnot": (4, 4)}


def _promote_pure_obj(n: int) -> tuple[int, ...]:
    return (n,) if n > 0 else ()


def typecheck(e: Expr, env: dict[str, CircuitType] | None = None) -> CircuitType:
    env = dict(env or {})
    return _type(e, env)


def _type(e: Expr, env: dict[str, CircuitType]) -> CircuitType:
    if isinstance(e, Gate):
        d, c = _GATE_DIMS[e.name]
        return CircuitType("pure", d, c)
    if isinstance(e, Perm):
        n = e.a * e.b
        return CircuitType("pure", n, n)
    if isinstance(e, Id):
        return CircuitType("pure", e.n, e.n)
    if isinstance(e, PhaseGate):
        return CircuitType("pure", 1, 1)
    if isinstance(e, Init):
        if e.m > e.n:
            raise CircuitTypeError(f"init[{e.m},{e.n}] needs m <= n")
        return CircuitType("pure", e.m, e.n)
    if isinstance(e, Measure):
        parts = al.check_object(e.parts)
        return CircuitType("channel", (al.total_dim(parts),), parts)
    if isinstance(e, Discard):
        dims = al.check_object(e.dims)
        return CircuitType("channel", dims, (1,))
    if isinstance(e, Name):
        if e.name not in env:
            raise CircuitTypeError(f"unknown name {e.name!r}")
        return env[e.name]
    if isinstance(e, LetDef):
        bound = _type(e.bound, env)
        inner = dict(env)
        inner[e.name] = bound
        return _type(e.body, inner)
    if isinstance(e, Seq):
        t1, t2 = _type(e.first, env), _type(e.then, env)
        if t1.level == t2.level == "pure":
            if t1.cod != t2.dom:
                raise CircuitTypeError(f"sequence mismatch: {t1.cod} vs {t2.dom}")
            return CircuitType("pure", t1.dom, t2.cod)
        t1, t2 = _promote(t1), _promote(t2)
        if t1.cod != t2.dom:
            raise CircuitTypeError(f"sequence mismatch: {list(t1.cod)} vs {list(t2.dom)}")
        return CircuitType("channel", t1.dom, t2.cod)
    if isinstance(e, Oplus):
        t1, t2 = _type(e.left, env), _type(e.right, env)
        if t1.level == t2.level == "pure":
            return CircuitType("pure", t1.dom + t2.dom, t1.cod + t2.cod)
        t1, t2 = _promote(t1), _promote(t2)
        return CircuitType("channel", al.oplus_obj(t1.dom, t2.dom), al.oplus_obj(t1.cod, t2.cod))
    if isinstance(e, Otimes):
        t1, t2 = _type(e.left, env), _type(e.right, env)
        if t1.level == t2.level == "pure":
            return CircuitType("pure", t1.dom * t2.dom, t1.cod * t2.cod)
        t1, t2 = _promote(t1), _promote(t2)
        return CircuitType("channel", al.otimes_obj(t1.dom, t2.dom), al.otimes_obj(t1.cod, t2.cod))
    raise CircuitTypeError(f"cannot type node {e!r}")


def _promote(t: CircuitType) -> CircuitType:
    if t.level == "channel":
        return t
    return CircuitType("channel", _promote_pure_obj(t.dom), _promote_pure_obj(t.cod))


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _gate_matrix(name: str) -> np.ndarray:
    if name == "H":
        return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    if name == "T":
        return np.diag([1.0, np.exp(1j * math.pi / 4)]).astype(complex)
    if name == "S":
        return np.diag([1.0, 1j]).astype(complex)
    if name == "X":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if name == "Z":
        return np.diag([1.0, -1.0]).astype(complex)
    if name == "cnot":
        return la.direct_sum(la.identity(2), np.array([[0, 1], [1, 0]], dtype=complex))
    raise CircuitTypeError(f"unknown gate {name!r}")


def evaluate(e: Expr, env: dict | None = None):
    """Evaluate a typechecked expression to an isometry matrix (pure) or a
    channel (anything containing measure/discard)."""
    typecheck(e, {k: t for k, (v, t) in (env or {}).items()})
    return _eval(e, dict(env or {}))


def _to_channel(value, t: CircuitType):
    if t.level == "channel":
        return value
    return al.embed_E(value, validate=False)


def _eval(e: Expr, env: dict):
    if isinstance(e, Gate):
        return _gate_matrix(e.name)
    if isinstance(e, Perm):
        return al.gamma_times_pure(e.a, e.b)
    if isinstance(e, Id):
        return la.identity(e.n)
    if isinstance(e, PhaseGate):
        return np.array([[np.exp(1j * e.angle.radians())]], dtype=complex)
    if isinstance(e, Init):
        from .normalform import iota

        return iota(e.m, e.n)
    if isinstance(e, Measure):
        return al.measure_phi(e.parts)
    if isinstance(e, Discard):
        return al.terminal_channel(e.dims)
    if isinstance(e, Name):
        value, _ = env[e.name]
        return value
    if isinstance(e, LetDef):
        t = _type_of_cached(e.bound, env)
        value = _eval(e.bound, env)
        inner = dict(env)
        inner[e.name] = (value, t)
        return _eval(e.body, inner)
    if isinstance(e, (Seq, Oplus, Otimes)):
        left_expr = e.first if isinstance(e, Seq) else e.left
        right_expr = e.then if isinstance(e, Seq) else e.right
        t1 = _type_of_cached(left_expr, env)
        t2 = _type_of_cached(right_expr, env)
        v1 = _eval(left_expr, env)
        v2 = _eval(right_expr, env)
        if t1.level == t2.level == "pure":
            if isinstance(e, Seq):
                return la.as_matrix(v2) @ la.as_matrix(v1)
            if isinstance(e, Oplus):
                return la.direct_sum(v1, v2)
            return la.kron(v1, v2)
        c1, c2 = _to_channel(v1, t1), _to_channel(v2, t2)
        if isinstance(e, Seq):
            return al.compose(c2, c1)
        if isinstance(e, Oplus):
            return al.oplus(c1, c2)
        return al.otimes(c1, c2)
    raise CircuitTypeError(f"cannot evaluate node {e!r}")


def _type_of_cached(e: Expr, env: dict) -> CircuitType:
    return _type(e, {k: t for k, (v, t) in env.items()})


def evaluate_channel(e: Expr):
    """Evaluate and promote pure results through the canonical embedding."""
    t = typecheck(e)
    value = evaluate(e)
    return _to_channel(value, t)
