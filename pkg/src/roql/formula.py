"""Read-once formulas over arbitrary bases and their text syntax.

Grammar (whitespace is ignored)::

    formula := expr [binop expr]
    expr    := "~" expr | primary
    primary := "x<k>" | "0" | "1"
             | "g{<hex>,<arity>}" "(" expr ("," expr)* ")"
             | "(" expr [binop expr] ")"
    binop   := "&" | "|" | "^" | "<=>"

Every binary operator needs its own pair of parentheses, so ``x1 & x2 & x3``
is rejected.  Variables are 1-based in text and 0-based in code.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union

import numpy as np

from .basis import AND, NOT, NXOR, ONE, OR, XOR, ZERO, Basis, BasisFunction
from .core import ArityError, TotalAssignment, TruthTable, _check_arity


class FormulaSyntaxError(ValueError):
    pass


class RepeatedVariableError(ValueError):
    pass


class GateNotInBasisError(ValueError):
    pass


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Gate:
    fn: BasisFunction
    args: tuple["FormulaNode", ...]


FormulaNode = Union[Var, Gate]

_SYMBOLS = {AND.table: "&", OR.table: "|", XOR.table: "^", NXOR.table: "<=>"}


def _walk(node: FormulaNode) -> Iterator[FormulaNode]:
    stack = [node]
    while stack:
        cur = stack.pop()
        yield cur
        if isinstance(cur, Gate):
            stack.extend(reversed(cur.args))


def _render(node: FormulaNode) -> str:
    if isinstance(node, Var):
        return f"x{node.index + 1}"
    fn, args = node.fn, node.args
    if fn.arity == 0:
        return str(fn.table[0])
    if fn.table == NOT.table:
        return "~" + _render(args[0])
    if fn.table in _SYMBOLS:
        return f"({_render(args[0])} {_SYMBOLS[fn.table]} {_render(args[1])})"
    return f"g{{{fn.hex},{fn.arity}}}(" + ",".join(_render(a) for a in args) + ")"


@dataclass(frozen=True)
class ReadOnceFormula:
    """A formula whose leaves carry distinct variables of ``x_1..x_n``.

    Variables that do not occur are fictitious.
    """

    n: int
    root: FormulaNode

    def __post_init__(self):
        _check_arity(self.n)
        seen = set()
        for node in _walk(self.root):
            if isinstance(node, Var):
                if not 0 <= node.index < self.n:
                    raise ArityError(f"x{node.index + 1} outside arity {self.n}")
                if node.index in seen:
                    raise RepeatedVariableError(f"x{node.index + 1} occurs more than once")
                seen.add(node.index)
            elif len(node.args) != node.fn.arity:
                raise ArityError(
                    f"gate {node.fn.name} has arity {node.fn.arity} but {len(node.args)} arguments"
                )

    @property
    def leaves(self) -> frozenset[int]:
        return frozenset(nd.index for nd in _walk(self.root) if isinstance(nd, Var))

    def gates(self) -> list[BasisFunction]:
        return [nd.fn for nd in _walk(self.root) if isinstance(nd, Gate)]

    def is_over(self, basis: Basis) -> bool:
        return all(g in basis for g in self.gates())

    def __call__(self, point: TotalAssignment) -> int:
        return eval_formula(self, point)

    def __str__(self) -> str:
        return _render(self.root)


def eval_formula(formula: ReadOnceFormula, point: TotalAssignment) -> int:
    if point.n != formula.n:
        raise ArityError(f"assignment arity {point.n} != formula arity {formula.n}")

    def ev(node):
        if isinstance(node, Var):
            return point.bits[node.index]
        u = 0
        for j, arg in enumerate(node.args):
            u |= ev(arg) << j
        return node.fn.table[u]

    return ev(formula.root)


def truth_table(formula: ReadOnceFormula) -> TruthTable:
    v = np.arange(1 << formula.n, dtype=np.int64)

    def tab(node):
        if isinstance(node, Var):
            return ((v >> node.index) & 1).astype(np.int64)
        u = np.zeros(v.shape, dtype=np.int64)
        for j, arg in enumerate(node.args):
            u |= tab(arg) << j
        return node.fn.table.bits[u].astype(np.int64)

    return TruthTable(formula.n, tab(formula.root).astype(np.uint8))


_TOKEN = re.compile(
    r"\s*(?:(?P<var>x(?P<idx>\d+))|(?P<gate>g\{(?P<hex>[0-9a-fA-F]+),(?P<ar>\d+)\})"
    r"|(?P<op><=>|[&|^~(),])|(?P<const>[01]))"
)


def _tokenize(text: str) -> list[tuple[str, re.Match]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected input at column {pos + 1}: {text[pos:pos + 10]!r}")
        kind = next(k for k in ("var", "gate", "op", "const") if m.group(k) is not None)
        tokens.append((kind, m))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, n: int, basis: Optional[Basis]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.n = n
        self.basis = basis

    def peek(self) -> Optional[str]:
        if self.pos >= len(self.tokens):
            return None
        kind, m = self.tokens[self.pos]
        return m.group("op") if kind == "op" else kind

    def take(self):
        if self.pos >= len(self.tokens):
            raise FormulaSyntaxError("unexpected end of formula")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, op: str):
        kind, m = self.take()
        if kind != "op" or m.group("op") != op:
            raise FormulaSyntaxError(f"expected {op!r}, found {m.group(0).strip()!r}")

    def gate(self, fn: BasisFunction) -> BasisFunction:
        if self.basis is None:
            return fn
        member = self.basis.lookup(fn.table)
        if member is None:
            raise GateNotInBasisError(f"gate {fn.name} is not in basis {self.basis.name}")
        return member

    def formula(self) -> FormulaNode:
        left = self.expr()
        if self.peek() in ("&", "|", "^", "<=>"):
            left = self.binary(left)
        if self.pos != len(self.tokens):
            raise FormulaSyntaxError(
                f"unexpected {self.tokens[self.pos][1].group(0).strip()!r}; "
                "binary operators need explicit parentheses"
            )
        return left

    def binary(self, left: FormulaNode) -> FormulaNode:
        _, m = self.take()
        fn = {"&": AND, "|": OR, "^": XOR, "<=>": NXOR}[m.group("op")]
        right = self.expr()
        return Gate(self.gate(fn), (left, right))

    def expr(self) -> FormulaNode:
        if self.peek() == "~":
            self.take()
            return Gate(self.gate(NOT), (self.expr(),))
        return self.primary()

    def primary(self) -> FormulaNode:
        kind, m = self.take()
        if kind == "var":
            index = int(m.group("idx")) - 1
            if not 0 <= index < self.n:
                raise ArityError(f"{m.group('var')} outside arity {self.n}")
            return Var(index)
        if kind == "const":
            return Gate(self.gate(ONE if m.group("const") == "1" else ZERO), ())
        if kind == "gate":
            fn = self.gate(BasisFunction.from_hex(m.group("hex"), int(m.group("ar"))))
            self.expect("(")
            args = [self.expr()]
            while self.peek() == ",":
                self.take()
                args.append(self.expr())
            self.expect(")")
            if len(args) != fn.arity:
                raise ArityError(f"gate {fn.name} takes {fn.arity} arguments, got {len(args)}")
            return Gate(fn, tuple(args))
        if kind == "op" and m.group("op") == "(":
            inner = self.expr()
            if self.peek() in ("&", "|", "^", "<=>"):
                inner = self.binary(inner)
            self.expect(")")
            return inner
        raise FormulaSyntaxError(f"unexpected {m.group(0).strip()!r}")


def parse_formula(text: str, n: int, basis: Optional[Basis] = None) -> ReadOnceFormula:
    """Parse ``text`` into a read-once formula of declared arity ``n``.

    When ``basis`` is given every gate must be one of its members.
    """
    root = _Parser(text, n, basis).formula()
    return ReadOnceFormula(n, root)


_ESSENTIAL_BINARY = (0x1, 0x2, 0x4, 0x6, 0x7, 0x8, 0x9, 0xB, 0xD, 0xE)


def random_b2_formula(
    n: int,
    rng: np.random.Generator,
    leaves: Optional[list[int]] = None,
    negate_p: float = 0.25,
) -> ReadOnceFormula:
    """Random read-once formula over B2 whose binary gates depend on both inputs.

    ``leaves`` defaults to all ``n`` variables, so every variable is
    essential.  The tree shape comes from random splits of a shuffled
    leaf order.
    """
    from .basis import B2

    order = list(range(n)) if leaves is None else list(leaves)
    rng.shuffle(order)
    if not order:
        return ReadOnceFormula(n, Gate(ONE if rng.integers(2) else ZERO, ()))

    def build(items: list[int]) -> FormulaNode:
        if len(items) == 1:
            node: FormulaNode = Var(items[0])
        else:
            cut = int(rng.integers(1, len(items)))
            table = TruthTable.from_int(2, int(rng.choice(_ESSENTIAL_BINARY)))
            node = Gate(B2.lookup(table), (build(items[:cut]), build(items[cut:])))
        if rng.random() < negate_p:
            node = Gate(NOT, (node,))
        return node

    return ReadOnceFormula(n, build(order))
