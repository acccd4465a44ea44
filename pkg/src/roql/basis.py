"""Gate vocabularies (bases) for read-once formulas.

A gate table of arity ``r`` stores ``g(u)`` at position ``u`` where bit ``j``
of ``u`` is the value of argument ``j``.  The hex form used in formulas and
basis files is the integer whose bit ``u`` is ``g(u)``: AND is ``8``, OR is
``e``, XOR is ``6``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional

from .core import TruthTable

_BINARY_NAMES = {
    0x0: "ZERO2",
    0x1: "NOR",
    0x6: "XOR",
    0x7: "NAND",
    0x8: "AND",
    0x9: "NXOR",
    0xE: "OR",
    0xF: "ONE2",
}


@dataclass(frozen=True)
class BasisFunction:
    name: str
    table: TruthTable

    @property
    def arity(self) -> int:
        return self.table.n

    @property
    def hex(self) -> str:
        return format(self.table.to_int(), "x")

    @classmethod
    def from_hex(cls, hex_table: str, arity: int, name: Optional[str] = None) -> "BasisFunction":
        table = TruthTable.from_int(arity, int(hex_table, 16))
        return cls(name or f"g{{{hex_table.lower()},{arity}}}", table)


ZERO = BasisFunction("0", TruthTable.from_int(0, 0))
ONE = BasisFunction("1", TruthTable.from_int(0, 1))
IDENTITY = BasisFunction("ID", TruthTable.from_int(1, 0b10))
NOT = BasisFunction("NOT", TruthTable.from_int(1, 0b01))
AND = BasisFunction("AND", TruthTable.from_int(2, 0x8))
OR = BasisFunction("OR", TruthTable.from_int(2, 0xE))
XOR = BasisFunction("XOR", TruthTable.from_int(2, 0x6))
NXOR = BasisFunction("NXOR", TruthTable.from_int(2, 0x9))


@dataclass(frozen=True)
class Basis:
    name: str
    functions: tuple[BasisFunction, ...]

    @property
    def l(self) -> int:
        """Maximum fan-in."""
        return max((g.arity for g in self.functions), default=0)

    @cached_property
    def _by_table(self) -> dict[TruthTable, BasisFunction]:
        out: dict[TruthTable, BasisFunction] = {}
        for g in self.functions:
            out.setdefault(g.table, g)
        return out

    def lookup(self, table: TruthTable) -> Optional[BasisFunction]:
        return self._by_table.get(table)

    def __contains__(self, g: BasisFunction) -> bool:
        return g.table in self._by_table

    def __hash__(self):
        return hash((self.name, tuple(g.table for g in self.functions)))

    def __eq__(self, other):
        if not isinstance(other, Basis):
            return NotImplemented
        return self.name == other.name and [g.table for g in self.functions] == [
            g.table for g in other.functions
        ]


def _dedupe(functions: Iterable[BasisFunction]) -> tuple[BasisFunction, ...]:
    seen = set()
    out = []
    for g in functions:
        if g.table not in seen:
            seen.add(g.table)
            out.append(g)
    return tuple(out)


def _b2() -> Basis:
    binary = [
        BasisFunction(_BINARY_NAMES.get(v, f"g{{{v:x},2}}"), TruthTable.from_int(2, v))
        for v in range(16)
    ]
    return Basis("b2", _dedupe([ZERO, ONE, IDENTITY, NOT, *binary]))


B2 = _b2()
AND_OR = Basis("and-or", (AND, OR))


def _threshold_tables(arity: int, max_weight: int) -> list[tuple[tuple[int, ...], int, TruthTable]]:
    found = {}
    for weights in itertools.product(range(max_weight + 1), repeat=arity):
        for theta in range(0, sum(weights) + 2):
            table = TruthTable.from_function(
                arity, lambda x, w=weights, t=theta: sum(a * b for a, b in zip(w, x)) >= t
            )
            found.setdefault(table, (weights, theta))
    return [(w, t, table) for table, (w, t) in found.items()]


def threshold_basis(max_arity: int = 3) -> Basis:
    """Monotone threshold gates of fan-in at most ``max_arity``.

    Only gates depending on all of their inputs are listed, plus the two
    constants.  Integer weights up to ``max_arity`` cover every threshold
    function of that many inputs for ``max_arity <= 3``.
    """
    from .core import essential_mask

    functions = [ZERO, ONE]
    for arity in range(1, max_arity + 1):
        for weights, theta, table in _threshold_tables(arity, max_arity):
            if essential_mask(table) == (1 << arity) - 1:
                wname = ",".join(map(str, weights))
                functions.append(BasisFunction(f"thr[{wname};{theta}]", table))
    return Basis(f"threshold{max_arity}", _dedupe(functions))


def b_l(l: int) -> Basis:
    """All Boolean functions of fan-in at most ``l``."""
    functions = [ZERO, ONE, IDENTITY, NOT]
    for arity in range(2, l + 1):
        for v in range(1 << (1 << arity)):
            functions.append(BasisFunction(f"g{{{v:x},{arity}}}", TruthTable.from_int(arity, v)))
    return Basis(f"b{l}", _dedupe(functions))


def parse_basis(text: str, name: str = "custom") -> Basis:
    """Parse a basis file: one ``<name> <arity> <hex>`` line per gate."""
    functions = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected '<name> <arity> <hex>'")
        gname, arity, hex_table = parts
        functions.append(BasisFunction.from_hex(hex_table, int(arity), gname))
    if not functions:
        raise ValueError("basis file lists no gates")
    return Basis(name, _dedupe(functions))


def basis_by_name(name: str) -> Basis:
    """Resolve a builtin basis name or a path to a basis file."""
    builtins = {"b2": B2, "and-or": AND_OR, "threshold": None, "b3": None}
    if name in builtins:
        if name == "threshold":
            return threshold_basis(3)
        if name == "b3":
            return b_l(3)
        return builtins[name]
    path = Path(name)
    if path.is_file():
        return parse_basis(path.read_text(), path.stem)
    raise ValueError(f"unknown basis {name!r} (builtins: b2, and-or, threshold, b3, or a file)")
