"""Canonical read-once trees over {AND, OR, XOR, NXOR, NOT, 0, 1}.

A canonical tree is either a single constant, or a tree whose leaves are
distinct literals and whose internal vertices carry AND/OR (non-linear) or
XOR/NXOR (linear) labels with at least two children, such that

* adjacent vertices never share a label and are never both linear,
* a child of a linear vertex is neither an AND vertex nor a negative literal.

Children are kept sorted by the smallest variable in their subtree, so two
canonical trees of the same function compare equal structurally.

The normaliser is built from smart constructors (:func:`negate`,
:func:`conj`, :func:`disj`, :func:`xor`) that each return a canonical tree
when given canonical inputs.  Together they implement constant propagation,
pushing negations through De Morgan and XOR/NXOR flips, associative
flattening, and the repair that turns an AND child of a linear vertex into
an OR child by toggling the parent's parity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .basis import AND, NOT, NXOR, ONE, OR, XOR, ZERO
from .core import TruthTable
from .formula import Gate, ReadOnceFormula, Var

LINEAR = frozenset({"XOR", "NXOR"})
NONLINEAR = frozenset({"AND", "OR"})


@dataclass(frozen=True)
class Const:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Lit:
    var: int
    positive: bool = True

    def __str__(self):
        return ("" if self.positive else "~") + f"x{self.var + 1}"


@dataclass(frozen=True)
class Node:
    op: str
    children: tuple["CanonicalTree", ...]

    def __str__(self):
        return f"{self.op}(" + ",".join(str(c) for c in self.children) + ")"


CanonicalTree = Union[Const, Lit, Node]


def leaves(tree: CanonicalTree) -> list[Lit]:
    if isinstance(tree, Lit):
        return [tree]
    if isinstance(tree, Node):
        return [lit for c in tree.children for lit in leaves(c)]
    return []


def variables(tree: CanonicalTree) -> frozenset[int]:
    return frozenset(lit.var for lit in leaves(tree))


def min_var(tree: CanonicalTree) -> int:
    if isinstance(tree, Lit):
        return tree.var
    if isinstance(tree, Node):
        return min(min_var(c) for c in tree.children)
    return -1


def _node(op: str, children: Iterable[CanonicalTree]) -> Node:
    return Node(op, tuple(sorted(children, key=min_var)))


def negate(tree: CanonicalTree) -> CanonicalTree:
    if isinstance(tree, Const):
        return Const(1 - tree.value)
    if isinstance(tree, Lit):
        return Lit(tree.var, not tree.positive)
    if tree.op == "AND":
        return _node("OR", (negate(c) for c in tree.children))
    if tree.op == "OR":
        return _node("AND", (negate(c) for c in tree.children))
    return Node("NXOR" if tree.op == "XOR" else "XOR", tree.children)


def _nonlinear(op: str, parts: Iterable[CanonicalTree]) -> CanonicalTree:
    absorbing = 0 if op == "AND" else 1
    kids: list[CanonicalTree] = []
    for t in parts:
        if isinstance(t, Const):
            if t.value == absorbing:
                return Const(absorbing)
            continue
        if isinstance(t, Node) and t.op == op:
            kids.extend(t.children)
        else:
            kids.append(t)
    if not kids:
        return Const(1 - absorbing)
    if len(kids) == 1:
        return kids[0]
    return _node(op, kids)


def conj(*parts: CanonicalTree) -> CanonicalTree:
    return _nonlinear("AND", parts)


def disj(*parts: CanonicalTree) -> CanonicalTree:
    return _nonlinear("OR", parts)


def xor(*parts: CanonicalTree, parity: int = 0) -> CanonicalTree:
    """XOR of ``parts``, complemented when ``parity`` is 1."""
    kids: list[CanonicalTree] = []
    for t in parts:
        if isinstance(t, Const):
            parity ^= t.value
        elif isinstance(t, Node) and t.op in LINEAR:
            kids.extend(t.children)
            parity ^= t.op == "NXOR"
        elif (isinstance(t, Node) and t.op == "AND") or (isinstance(t, Lit) and not t.positive):
            kids.append(negate(t))
            parity ^= 1
        else:
            kids.append(t)
    if not kids:
        return Const(parity)
    if len(kids) == 1:
        return negate(kids[0]) if parity else kids[0]
    return _node("NXOR" if parity else "XOR", kids)


def _unary(bits: tuple[int, int], arg: CanonicalTree) -> CanonicalTree:
    if bits[0] == bits[1]:
        return Const(bits[0])
    return arg if bits == (0, 1) else negate(arg)


def _binary(t: tuple[int, int, int, int], a: CanonicalTree, b: CanonicalTree) -> CanonicalTree:
    # t[u] with u = a + 2b
    if isinstance(a, Const):
        return _unary((t[a.value], t[a.value + 2]), b)
    if isinstance(b, Const):
        return _unary((t[2 * b.value], t[2 * b.value + 1]), a)
    if t[0] == t[1] and t[2] == t[3]:
        return _unary((t[0], t[2]), b)
    if t[0] == t[2] and t[1] == t[3]:
        return _unary((t[0], t[1]), a)
    weight = sum(t)
    if weight == 2:
        return xor(a, b, parity=t[0])
    odd_value = 1 if weight == 1 else 0
    u = t.index(odd_value)
    la = a if u & 1 else negate(a)
    lb = b if u & 2 else negate(b)
    core = conj(la, lb)
    return core if odd_value == 1 else negate(core)


def canonicalize_b2(formula: ReadOnceFormula) -> CanonicalTree:
    """Canonical tree of a read-once formula whose gates have fan-in <= 2."""

    def walk(node):
        if isinstance(node, Var):
            return Lit(node.index)
        args = [walk(a) for a in node.args]
        table = tuple(int(b) for b in node.fn.table.bits)
        if node.fn.arity == 0:
            return Const(table[0])
        if node.fn.arity == 1:
            return _unary(table, args[0])
        if node.fn.arity == 2:
            return _binary(table, args[0], args[1])
        raise ValueError(f"gate {node.fn.name} has fan-in {node.fn.arity} > 2")

    return walk(formula.root)


def canonicalize_tree(tree: CanonicalTree) -> CanonicalTree:
    """Re-normalise an arbitrary tree built from these node types."""
    if isinstance(tree, (Const, Lit)):
        return tree
    kids = [canonicalize_tree(c) for c in tree.children]
    if tree.op == "AND":
        return conj(*kids)
    if tree.op == "OR":
        return disj(*kids)
    return xor(*kids, parity=int(tree.op == "NXOR"))


def violations(tree: CanonicalTree) -> list[str]:
    """Canonicity conditions broken by ``tree`` (empty when canonical)."""
    problems: list[str] = []
    if isinstance(tree, Const):
        if tree.value not in (0, 1):
            problems.append("constant must be 0 or 1")
        return problems
    seen: set[int] = set()

    def visit(node, parent):
        if isinstance(node, Const):
            problems.append("constant below the root")
            return
        if isinstance(node, Lit):
            if node.var in seen:
                problems.append(f"x{node.var + 1} repeated")
            seen.add(node.var)
            if parent in LINEAR and not node.positive:
                problems.append(f"negative literal ~x{node.var + 1} under {parent}")
            return
        if node.op not in LINEAR | NONLINEAR:
            problems.append(f"unknown label {node.op}")
        if len(node.children) < 2:
            problems.append(f"{node.op} vertex with {len(node.children)} child")
        if parent is not None:
            if parent == node.op:
                problems.append(f"adjacent {node.op} vertices")
            elif parent in LINEAR and node.op in LINEAR:
                problems.append(f"{node.op} below {parent}")
            elif parent in LINEAR and node.op == "AND":
                problems.append(f"AND below {parent}")
        for c in node.children:
            visit(c, node.op)

    visit(tree, None)
    return problems


def is_canonical(tree: CanonicalTree) -> bool:
    return not violations(tree)


def is_sorted(tree: CanonicalTree) -> bool:
    if not isinstance(tree, Node):
        return True
    keys = [min_var(c) for c in tree.children]
    return keys == sorted(keys) and all(is_sorted(c) for c in tree.children)


def tree_bits(tree: CanonicalTree, n: int) -> np.ndarray:
    v = np.arange(1 << n, dtype=np.int64)

    def tab(node):
        if isinstance(node, Const):
            return np.full(v.shape, node.value, dtype=np.uint8)
        if isinstance(node, Lit):
            col = ((v >> node.var) & 1).astype(np.uint8)
            return col if node.positive else 1 - col
        cols = [tab(c) for c in node.children]
        if node.op == "AND":
            return np.logical_and.reduce(cols).astype(np.uint8)
        if node.op == "OR":
            return np.logical_or.reduce(cols).astype(np.uint8)
        acc = np.bitwise_xor.reduce(cols).astype(np.uint8)
        return acc if node.op == "XOR" else 1 - acc

    return tab(tree)


def tree_table(tree: CanonicalTree, n: int) -> TruthTable:
    return TruthTable(n, tree_bits(tree, n))


def eval_tree(tree: CanonicalTree, point) -> int:
    """Evaluate at a bit sequence indexed by variable."""
    if isinstance(tree, Const):
        return tree.value
    if isinstance(tree, Lit):
        b = int(point[tree.var])
        return b if tree.positive else 1 - b
    vals = [eval_tree(c, point) for c in tree.children]
    if tree.op == "AND":
        return int(all(vals))
    if tree.op == "OR":
        return int(any(vals))
    acc = sum(vals) & 1
    return acc if tree.op == "XOR" else 1 - acc


def tree_to_formula(tree: CanonicalTree, n: int) -> ReadOnceFormula:
    """Binary read-once formula over B2 computing the same function."""

    def build(node):
        if isinstance(node, Const):
            return Gate(ONE if node.value else ZERO, ())
        if isinstance(node, Lit):
            return Var(node.var) if node.positive else Gate(NOT, (Var(node.var),))
        kids = [build(c) for c in node.children]
        if node.op in NONLINEAR:
            fn = AND if node.op == "AND" else OR
            acc = kids[0]
            for k in kids[1:]:
                acc = Gate(fn, (acc, k))
            return acc
        acc = kids[0]
        for k in kids[1:-1]:
            acc = Gate(XOR, (acc, k))
        return Gate(XOR if node.op == "XOR" else NXOR, (acc, kids[-1]))

    return ReadOnceFormula(n, build(tree))


def parse_tree(text: str) -> CanonicalTree:
    """Parse the prefix serialisation, e.g. ``AND(x1,OR(x2,~x3))``."""
    text = text.replace(" ", "")
    pos = 0

    def term():
        nonlocal pos
        if text.startswith(("0", "1"), pos) and (pos + 1 == len(text) or text[pos + 1] in ",)"):
            pos += 1
            return Const(int(text[pos - 1]))
        positive = True
        if text.startswith("~", pos):
            positive = False
            pos += 1
        if text.startswith("x", pos):
            end = pos + 1
            while end < len(text) and text[end].isdigit():
                end += 1
            if end == pos + 1:
                raise ValueError(f"bad variable at {pos}")
            var = int(text[pos + 1 : end]) - 1
            pos = end
            return Lit(var, positive)
        if not positive:
            raise ValueError("negation applies to literals only")
        for op in ("NXOR", "XOR", "AND", "OR"):
            if text.startswith(op + "(", pos):
                pos += len(op) + 1
                kids = [term()]
                while text.startswith(",", pos):
                    pos += 1
                    kids.append(term())
                if not text.startswith(")", pos):
                    raise ValueError(f"expected ')' at {pos}")
                pos += 1
                return Node(op, tuple(kids))
        raise ValueError(f"cannot parse tree at {pos}: {text[pos:pos + 10]!r}")

    tree = term()
    if pos != len(text):
        raise ValueError(f"trailing input at {pos}")
    return tree
