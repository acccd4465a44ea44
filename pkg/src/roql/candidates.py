"""Enumeration of all read-once functions over a basis at small arity.

Tables are packed into ``uint64`` words (bit ``v`` is ``f(v)``), so the
enumerator supports ``n <= 6``.  For every leaf set ``S`` it computes the
set ``F(S)`` of functions of formulas whose leaves are exactly ``S``:

* ``F(empty)`` closes the 0-ary gates under application of gates;
* an *effective gate* is a basis gate with some arguments fixed to members
  of ``F(empty)``;
* ``F(S)`` applies every effective gate of arity ``m >= 2`` to every ordered
  partition of ``S`` into ``m`` blocks, then closes under effective unary
  gates.

Each table remembers the gate and argument rows that first produced it, so
formulas are rebuilt on demand.  The sets are kept per leaf set without
cross-set pruning; this stays correct for bases that cannot drop leaves.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .basis import Basis, BasisFunction
from .core import ArityError, TruthTable
from .formula import FormulaNode, Gate, ReadOnceFormula, Var

MAX_ENUM_ARITY = 6


@dataclass(frozen=True)
class _EffectiveGate:
    table: int  # packed over its m live arguments
    arity: int
    fn: BasisFunction
    template: tuple  # per basis argument: None (live) or a constant FormulaNode


@dataclass
class _Block:
    """One batch of discoveries: a gate family applied to a fixed argument layout."""

    parts: tuple  # leaf sets of the argument positions; () for a variable leaf
    gates: list  # _EffectiveGate per gate id, or the variable index for leaves
    gate_ids: np.ndarray
    args: np.ndarray  # (rows, m) row indices into F(part)


@dataclass
class _LeafSet:
    tables: np.ndarray = field(default_factory=lambda: np.empty(0, np.uint64))
    block_of: np.ndarray = field(default_factory=lambda: np.empty(0, np.int32))
    row_of: np.ndarray = field(default_factory=lambda: np.empty(0, np.int32))
    blocks: list = field(default_factory=list)

    def add(self, block: _Block, tables: np.ndarray) -> int:
        """Append the previously unseen tables of ``block``; return how many were new."""
        uniq, first = np.unique(tables, return_index=True)
        order = np.argsort(first, kind="stable")
        uniq, first = uniq[order], first[order]
        fresh = ~np.isin(uniq, self.tables)
        if not fresh.any():
            return 0
        rows = first[fresh]
        block.gate_ids = block.gate_ids[rows]
        block.args = block.args[rows]
        self.blocks.append(block)
        self.tables = np.concatenate([self.tables, uniq[fresh]])
        self.block_of = np.concatenate(
            [self.block_of, np.full(rows.size, len(self.blocks) - 1, np.int32)]
        )
        self.row_of = np.concatenate([self.row_of, np.arange(rows.size, dtype=np.int32)])
        return int(rows.size)


def _full(n: int) -> np.uint64:
    return np.uint64((1 << (1 << n)) - 1)


def _var_table(n: int, i: int) -> np.uint64:
    return np.uint64(sum(1 << v for v in range(1 << n) if (v >> i) & 1))


def _apply(table: int, m: int, args: Sequence[np.ndarray], full: np.uint64) -> np.ndarray:
    """Packed result of the ``m``-ary gate ``table`` on packed argument columns."""
    out = np.zeros(args[0].shape, np.uint64)
    for u in range(1 << m):
        if not (table >> u) & 1:
            continue
        term = np.full(args[0].shape, full, np.uint64)
        for j in range(m):
            term &= args[j] if (u >> j) & 1 else ~args[j]
        out |= term
    return out & full


def _gate_node(fn: BasisFunction, template: tuple, live: Sequence[FormulaNode]) -> Gate:
    it = iter(live)
    return Gate(fn, tuple(next(it) if t is None else t for t in template))


def _constants(basis: Basis) -> dict[int, FormulaNode]:
    """Constant values reachable with no leaves, each with a witnessing formula."""
    found: dict[int, FormulaNode] = {}
    changed = True
    while changed:
        changed = False
        for fn in basis.functions:
            for args in itertools.product(sorted(found), repeat=fn.arity):
                u = sum(a << j for j, a in enumerate(args))
                value = int(fn.table.bits[u])
                if value not in found:
                    found[value] = Gate(fn, tuple(found[a] for a in args))
                    changed = True
    return found


def _effective_gates(basis: Basis, constants: dict[int, FormulaNode]) -> dict[int, list[_EffectiveGate]]:
    by_arity: dict[int, dict[int, _EffectiveGate]] = {}
    choices = [None] + sorted(constants)
    for fn in basis.functions:
        for pattern in itertools.product(choices, repeat=fn.arity):
            live = [j for j, c in enumerate(pattern) if c is None]
            m = len(live)
            if m == 0:
                continue
            table = 0
            for y in range(1 << m):
                u = 0
                for j, c in enumerate(pattern):
                    bit = (y >> live.index(j)) & 1 if c is None else c
                    u |= bit << j
                table |= int(fn.table.bits[u]) << y
            template = tuple(None if c is None else constants[c] for c in pattern)
            by_arity.setdefault(m, {}).setdefault(table, _EffectiveGate(table, m, fn, template))
    return {m: list(g.values()) for m, g in by_arity.items()}


def _ordered_partitions(items: tuple, m: int):
    """Surjections of ``items`` onto ``m`` labelled blocks, blocks in label order."""
    for labels in itertools.product(range(m), repeat=len(items)):
        if len(set(labels)) == m:
            yield tuple(tuple(x for x, b in zip(items, labels) if b == k) for k in range(m))


class CandidateSet:
    """All functions of arity ``n`` read-once over ``basis``, deduplicated by table.

    Candidates are listed in discovery order: by leaf-set size, then leaf
    set, then gate.  ``formula(i)`` rebuilds a witnessing formula.
    """

    def __init__(self, basis: Basis, n: int):
        if not 0 <= n <= MAX_ENUM_ARITY:
            raise ArityError(f"enumeration supports 0 <= n <= {MAX_ENUM_ARITY}, got {n}")
        self.basis = basis
        self.n = n
        self._full = _full(n)
        self._constants = _constants(basis)
        self._gates = _effective_gates(basis, self._constants)
        self._sets: dict[tuple, _LeafSet] = {}
        order_tables, order_src = [], []
        for size in range(n + 1):
            for leafset in itertools.combinations(range(n), size):
                ls = self._build(leafset)
                self._sets[leafset] = ls
                order_tables.append(ls.tables)
                order_src.extend((leafset, r) for r in range(ls.tables.size))
        all_tables = np.concatenate(order_tables) if order_tables else np.empty(0, np.uint64)
        uniq, first = np.unique(all_tables, return_index=True)
        keep = np.sort(first)
        self.tables: np.ndarray = all_tables[keep]
        self._source = [order_src[i] for i in keep]
        self._index = {int(t): i for i, t in enumerate(self.tables)}

    def _build(self, leafset: tuple) -> _LeafSet:
        ls = _LeafSet()
        n, full = self.n, self._full
        if not leafset:
            for value, node in sorted(self._constants.items()):
                block = _Block((), [node], np.zeros(1, np.int32), np.zeros((1, 0), np.int32))
                ls.add(block, np.array([full if value else 0], np.uint64))
        elif len(leafset) == 1:
            i = leafset[0]
            block = _Block((), [Var(i)], np.zeros(1, np.int32), np.zeros((1, 0), np.int32))
            ls.add(block, np.array([_var_table(n, i)], np.uint64))
        else:
            for m in range(2, len(leafset) + 1):
                gates = self._gates.get(m, [])
                if not gates:
                    continue
                for parts in _ordered_partitions(leafset, m):
                    cols = [self._sets[p].tables for p in parts]
                    grids = np.meshgrid(*[np.arange(c.size, dtype=np.int32) for c in cols], indexing="ij")
                    idx = np.stack([g.ravel() for g in grids], axis=1)
                    packed = [cols[j][idx[:, j]] for j in range(m)]
                    results = np.concatenate([_apply(g.table, m, packed, full) for g in gates])
                    gate_ids = np.repeat(np.arange(len(gates), dtype=np.int32), idx.shape[0])
                    args = np.tile(idx, (len(gates), 1))
                    ls.add(_Block(parts, gates, gate_ids, args), results)
        unary = self._gates.get(1, [])
        if leafset and unary:
            start = 0
            while start < ls.tables.size:
                stop = ls.tables.size
                src = ls.tables[start:stop]
                idx = np.arange(start, stop, dtype=np.int32)[:, None]
                results = np.concatenate([_apply(g.table, 1, [src], full) for g in unary])
                gate_ids = np.repeat(np.arange(len(unary), dtype=np.int32), src.size)
                args = np.tile(idx, (len(unary), 1))
                ls.add(_Block((leafset,), unary, gate_ids, args), results)
                start = stop
        return ls

    def __len__(self) -> int:
        return int(self.tables.size)

    def table(self, i: int) -> TruthTable:
        return TruthTable.from_int(self.n, int(self.tables[i]))

    def index_of(self, f: TruthTable) -> Optional[int]:
        if f.n != self.n:
            raise ArityError(f"table arity {f.n} != candidate arity {self.n}")
        return self._index.get(f.to_int())

    def __contains__(self, f: TruthTable) -> bool:
        return self.index_of(f) is not None

    def _node(self, leafset: tuple, row: int) -> FormulaNode:
        ls = self._sets[leafset]
        block = ls.blocks[int(ls.block_of[row])]
        r = int(ls.row_of[row])
        gate = block.gates[int(block.gate_ids[r])]
        if not block.parts:
            return gate
        live = [self._node(part, int(block.args[r, j])) for j, part in enumerate(block.parts)]
        return _gate_node(gate.fn, gate.template, live)

    def formula(self, i: int) -> ReadOnceFormula:
        leafset, row = self._source[i]
        return ReadOnceFormula(self.n, self._node(leafset, row))

    def consistent(self, points: Sequence[int], values: Sequence[int]) -> np.ndarray:
        """Indices of candidates agreeing with ``values`` at input indices ``points``."""
        idx = np.asarray(points, dtype=np.uint64)
        vals = np.asarray(values, dtype=np.uint8)
        if idx.size == 0:
            return np.arange(len(self))
        return np.flatnonzero(_kernels.consistent(self.tables, idx, vals))


@lru_cache(maxsize=32)
def candidate_set(basis: Basis, n: int) -> CandidateSet:
    """Memoised :class:`CandidateSet` per ``(basis, n)``."""
    return CandidateSet(basis, n)
