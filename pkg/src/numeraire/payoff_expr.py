"""Terminal-payoff expressions over X and Y.

Grammar (left-associative, usual precedence)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := NUMBER | 'X' | 'Y' | '(' expr ')'
            | ('min' | 'max') '(' expr ',' expr ')'
            | 'pow' '(' expr ',' ['-'] NUMBER ')'

Numbers are plain decimals (``12``, ``0.5``, ``.5``); scientific notation
is not accepted. The exponent of ``pow`` may carry a leading minus so that
negative moment payoffs such as ``Y*pow(X/Y, -1)`` can be written.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

import numpy as np

from .errors import PayoffEvaluationError, PayoffSyntaxError


@dataclass(frozen=True, slots=True)
class Literal:
    value: float


@dataclass(frozen=True, slots=True)
class Var:
    name: str  # "X" or "Y"


@dataclass(frozen=True, slots=True)
class BinOp:
    op: str  # one of + - * /
    left: "Node"
    right: "Node"


@dataclass(frozen=True, slots=True)
class Call:
    func: str  # min, max or pow
    args: tuple["Node", ...]


Node = Union[Literal, Var, BinOp, Call]

_FUNCS = ("min", "max", "pow")
_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/(),]))"
)


@dataclass(frozen=True, slots=True)
class _Tok:
    kind: str  # num, name, op, eof
    text: str
    offset: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == m.start():
            rest = len(text) - len(text[pos:].lstrip())
            if rest == len(text):
                toks.append(_Tok("eof", "", len(text)))
                return toks
            raise PayoffSyntaxError(f"unexpected character {text[rest]!r}", rest)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, expected) -> PayoffSyntaxError:
        t = self.tok
        got = "end of input" if t.kind == "eof" else repr(t.text)
        exp = frozenset(expected)
        return PayoffSyntaxError(
            f"expected one of {', '.join(sorted(exp))}; got {got}", t.offset, exp
        )

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            raise self.fail({text})

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.factor())
        return node

    def number(self, signed: bool = False) -> Literal:
        neg = signed and self.accept("-")
        if self.tok.kind != "num":
            raise self.fail({"number"} if neg or not signed else {"number", "'-'"})
        value = float(self.tok.text)
        self.i += 1
        return Literal(-value if neg else value)

    def factor(self) -> Node:
        t = self.tok
        if t.kind == "num":
            return self.number()
        if t.kind == "name":
            if t.text in ("X", "Y"):
                self.i += 1
                return Var(t.text)
            if t.text in _FUNCS:
                self.i += 1
                self.expect("(")
                first = self.expr()
                self.expect(",")
                second = self.number(signed=True) if t.text == "pow" else self.expr()
                self.expect(")")
                return Call(t.text, (first, second))
            raise PayoffSyntaxError(f"unknown name {t.text!r}", t.offset,
                                    frozenset({"X", "Y", *_FUNCS}))
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        raise self.fail({"number", "X", "Y", "min", "max", "pow", "'('"})


def parse(text: str) -> Node:
    """Parse payoff text into an immutable expression tree.

    Raises :class:`PayoffSyntaxError` carrying the character offset of the
    offending token and the set of tokens that would have been accepted.
    """
    p = _Parser(text)
    node = p.expr()
    if p.tok.kind != "eof":
        raise p.fail({"operator", "end of input"})
    return node


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt_number(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    s = np.format_float_positional(v, trim="-")
    return s


def render(node: Node) -> str:
    """Text form of ``node`` that parses back to an identical tree."""
    if isinstance(node, Literal):
        return _fmt_number(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({render(node.args[0])}, {render(node.args[1])})"
    prec = _PREC[node.op]
    left = render(node.left)
    if isinstance(node.left, BinOp) and _PREC[node.left.op] < prec:
        left = f"({left})"
    right = render(node.right)
    # right operand at equal precedence needs parentheses to keep left associativity
    if isinstance(node.right, BinOp) and _PREC[node.right.op] <= prec:
        right = f"({right})"
    return f"{left} {node.op} {right}"


def variables(node: Node) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, BinOp):
        return variables(node.left) | variables(node.right)
    if isinstance(node, Call):
        return set().union(*(variables(a) for a in node.args))
    return set()


def evaluate(node: Node, x, y=None):
    """Evaluate ``node`` at ``X = x`` and ``Y = y``.

    ``x`` and ``y`` may be floats or numpy arrays (broadcast together).
    ``y`` may be omitted for single-asset payoffs.
    """
    xa = np.asarray(x, dtype=float)
    ya = None if y is None else np.asarray(y, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = _eval(node, xa, ya)
    shape = np.broadcast_shapes(xa.shape, () if ya is None else ya.shape)
    if shape == ():
        return float(out)
    return np.broadcast_to(np.asarray(out, dtype=float), shape).copy()


def _eval(node: Node, x, y):
    if isinstance(node, Literal):
        return node.value
    if isinstance(node, Var):
        if node.name == "Y":
            if y is None:
                raise PayoffEvaluationError("no value supplied for Y", "Y")
            return y
        return x
    if isinstance(node, Call):
        a = _eval(node.args[0], x, y)
        b = _eval(node.args[1], x, y)
        if node.func == "min":
            return np.minimum(a, b)
        if node.func == "max":
            return np.maximum(a, b)
        out = np.power(a, b)
        if not np.all(np.isfinite(out)):
            raise PayoffEvaluationError("non-finite power", render(node))
        return out
    a = _eval(node.left, x, y)
    b = _eval(node.right, x, y)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if np.any(np.asarray(b) == 0):
        raise PayoffEvaluationError("division by zero", render(node))
    return a / b


class Verdict(str, Enum):
    HOMOTHETIC = "homothetic"
    NOT_HOMOTHETIC = "not-homothetic"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class HomotheticityVerdict:
    verdict: Verdict
    witnesses: list[tuple[float, tuple[float, float], float]] = field(default_factory=list)

    @property
    def is_homothetic(self) -> bool:
        return self.verdict is Verdict.HOMOTHETIC


HOMOTHETIC_SCALES = (0.5, 2.0, 3.7)
HOMOTHETIC_TOL = 1e-9


def check_homothetic(node: Node, n_points: int = 24, seed: int = 0) -> HomotheticityVerdict:
    """Sample ``f(s*x, s*y)`` against ``s*f(x, y)`` on random positive points.

    Witnesses record ``(scale, (x, y), relative deviation)`` for every sample;
    a failed evaluation anywhere makes the verdict inconclusive.
    """
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.1, 200.0, size=(n_points, 2))
    witnesses = []
    homothetic = True
    try:
        for s in HOMOTHETIC_SCALES:
            for x, y in pts:
                base = s * evaluate(node, x, y)
                scaled = evaluate(node, s * x, s * y)
                dev = abs(scaled - base) / max(1.0, abs(base))
                witnesses.append((s, (float(x), float(y)), float(dev)))
                if not dev <= HOMOTHETIC_TOL:
                    homothetic = False
    except PayoffEvaluationError:
        return HomotheticityVerdict(Verdict.INCONCLUSIVE, witnesses)
    return HomotheticityVerdict(
        Verdict.HOMOTHETIC if homothetic else Verdict.NOT_HOMOTHETIC, witnesses
    )
