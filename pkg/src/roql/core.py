"""Truth tables, partial assignments and projections.

A truth table of arity ``n`` stores ``f(v)`` at position ``v`` where bit ``i``
of ``v`` is the value of ``x_{i+1}``.  Partial assignments are written as
strings over ``{0, 1, *}`` whose position ``i`` is ``x_{i+1}``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator, Optional, Sequence

import numpy as np

from . import _kernels

DEFAULT_ARITY_CAP = 16


class ArityError(ValueError):
    """Raised when arities disagree or exceed the configured cap."""


def arity_cap() -> int:
    raw = os.environ.get("ROQL_ARITY_CAP")
    if raw is None:
        return DEFAULT_ARITY_CAP
    return int(raw)


def _check_arity(n: int) -> None:
    if n < 0:
        raise ArityError(f"negative arity {n}")
    if n > arity_cap():
        raise ArityError(f"arity {n} exceeds cap {arity_cap()} (set ROQL_ARITY_CAP)")


@dataclass(frozen=True, eq=False)
class TruthTable:
    n: int
    bits: np.ndarray

    def __post_init__(self):
        _check_arity(self.n)
        bits = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if bits.shape != (1 << self.n,):
            raise ArityError(f"table of arity {self.n} needs {1 << self.n} entries, got {bits.shape}")
        if bits.size and bits.max() > 1:
            raise ValueError("truth table entries must be 0 or 1")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    # constructors -------------------------------------------------------

    @classmethod
    def from_function(cls, n: int, fn: Callable[[tuple[int, ...]], int]) -> "TruthTable":
        _check_arity(n)
        bits = [int(bool(fn(tuple((v >> i) & 1 for i in range(n))))) for v in range(1 << n)]
        return cls(n, np.array(bits, dtype=np.uint8))

    @classmethod
    def from_int(cls, n: int, value: int) -> "TruthTable":
        _check_arity(n)
        size = 1 << n
        if value < 0 or value >> size:
            raise ValueError(f"value does not fit a table of arity {n}")
        raw = value.to_bytes((size + 7) // 8, "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size]
        return cls(n, bits)

    @classmethod
    def constant(cls, n: int, value: int) -> "TruthTable":
        _check_arity(n)
        return cls(n, np.full(1 << n, int(bool(value)), dtype=np.uint8))

    @classmethod
    def variable(cls, n: int, i: int) -> "TruthTable":
        """Table of ``x_{i+1}`` over ``n`` variables (``i`` is 0-based)."""
        if not 0 <= i < n:
            raise ArityError(f"variable index {i} out of range for arity {n}")
        v = np.arange(1 << n)
        return cls(n, ((v >> i) & 1).astype(np.uint8))

    @classmethod
    def loads(cls, text: str) -> "TruthTable":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("n="):
            raise ValueError("truth table text must start with 'n=<k>'")
        n = int(lines[0][2:])
        body = "".join(lines[1:])
        if len(body) != 1 << n or set(body) - {"0", "1"}:
            raise ValueError(f"expected {1 << n} characters over 0/1")
        return cls(n, np.frombuffer(body.encode(), dtype=np.uint8) - ord("0"))

    def dumps(self) -> str:
        return f"n={self.n}\n" + "".join("01"[b] for b in self.bits) + "\n"

    # identity -------------------------------------------------------------

    @cached_property
    def _key(self) -> tuple[int, bytes]:
        return self.n, np.packbits(self.bits, bitorder="little").tobytes()

    def __eq__(self, other):
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        body = "".join("01"[b] for b in self.bits[:64])
        more = "..." if self.bits.size > 64 else ""
        return f"TruthTable(n={self.n}, bits={body}{more})"

    def to_int(self) -> int:
        return int.from_bytes(self._key[1], "little")

    # evaluation -----------------------------------------------------------

    def __getitem__(self, index: int) -> int:
        return int(self.bits[index])

    def __call__(self, point: "TotalAssignment | Sequence[int]") -> int:
        if isinstance(point, TotalAssignment):
            if point.n != self.n:
                raise ArityError(f"assignment arity {point.n} != table arity {self.n}")
            return int(self.bits[point.index])
        if len(point) != self.n:
            raise ArityError(f"assignment arity {len(point)} != table arity {self.n}")
        return int(self.bits[sum(int(b) << i for i, b in enumerate(point))])

    def __invert__(self) -> "TruthTable":
        return TruthTable(self.n, 1 - self.bits)

    def __xor__(self, other: "TruthTable") -> "TruthTable":
        if other.n != self.n:
            raise ArityError("arity mismatch")
        return TruthTable(self.n, self.bits ^ other.bits)

    def weight(self) -> int:
        return int(self.bits.sum())


@dataclass(frozen=True)
class TotalAssignment:
    n: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != self.n:
            raise ArityError(f"expected {self.n} values, got {len(self.bits)}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("total assignment values must be 0 or 1")

    @classmethod
    def from_index(cls, n: int, index: int) -> "TotalAssignment":
        return cls(n, tuple((index >> i) & 1 for i in range(n)))

    @classmethod
    def parse(cls, text: str) -> "TotalAssignment":
        if set(text) - {"0", "1"}:
            raise ValueError(f"not a 0/1 vector: {text!r}")
        return cls(len(text), tuple(int(c) for c in text))

    @property
    def index(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    def as_partial(self) -> "PartialAssignment":
        return PartialAssignment(self.n, tuple(self.bits))

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class PartialAssignment:
    """Mapping of each variable to 0, 1 or ``None`` (a star)."""

    n: int
    values: tuple[Optional[int], ...]

    def __post_init__(self):
        if len(self.values) != self.n:
            raise ArityError(f"expected {self.n} entries, got {len(self.values)}")
        if any(v not in (0, 1, None) for v in self.values):
            raise ValueError("partial assignment entries must be 0, 1 or None")

    @classmethod
    def parse(cls, text: str) -> "PartialAssignment":
        if set(text) - {"0", "1", "*"}:
            raise ValueError(f"not a {{0,1,*}} string: {text!r}")
        return cls(len(text), tuple(None if c == "*" else int(c) for c in text))

    @classmethod
    def from_mask(cls, n: int, mask: int, vals: int) -> "PartialAssignment":
        return cls(n, tuple(((vals >> i) & 1) if (mask >> i) & 1 else None for i in range(n)))

    @classmethod
    def stars(cls, n: int) -> "PartialAssignment":
        return cls(n, (None,) * n)

    @classmethod
    def fixing(cls, n: int, fixed: dict[int, int]) -> "PartialAssignment":
        return cls(n, tuple(fixed.get(i) for i in range(n)))

    @cached_property
    def mask(self) -> int:
        return sum(1 << i for i, v in enumerate(self.values) if v is not None)

    @cached_property
    def vals(self) -> int:
        return sum(1 << i for i, v in enumerate(self.values) if v == 1)

    @property
    def fixed(self) -> frozenset[int]:
        return frozenset(i for i, v in enumerate(self.values) if v is not None)

    @property
    def star_vars(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.values) if v is None)

    @property
    def is_total(self) -> bool:
        return None not in self.values

    def with_value(self, i: int, value: Optional[int]) -> "PartialAssignment":
        values = list(self.values)
        values[i] = value
        return PartialAssignment(self.n, tuple(values))

    def lowest_extension(self) -> TotalAssignment:
        return TotalAssignment(self.n, tuple(0 if v is None else v for v in self.values))

    def to_total(self) -> TotalAssignment:
        if not self.is_total:
            raise ValueError(f"{self} has stars")
        return TotalAssignment(self.n, tuple(self.values))

    def __str__(self) -> str:
        return "".join("*" if v is None else str(v) for v in self.values)


def _as_partial(p: "PartialAssignment | TotalAssignment") -> PartialAssignment:
    return p.as_partial() if isinstance(p, TotalAssignment) else p


def project(f: TruthTable, p: PartialAssignment) -> TruthTable:
    """Hardwire the fixed values of ``p`` into ``f``.

    The result has one variable per star of ``p``, numbered in ascending
    order of the original index.
    """
    p = _as_partial(p)
    if f.n != p.n:
        raise ArityError(f"table arity {f.n} != assignment arity {p.n}")
    k = f.n - bin(p.mask).count("1")
    return TruthTable(k, _kernels.project(f.bits, f.n, p.mask, p.vals))


def total_extensions(p: PartialAssignment) -> list[TotalAssignment]:
    stars = p.star_vars
    out = []
    for y in range(1 << len(stars)):
        values = list(p.values)
        for j, i in enumerate(stars):
            values[i] = (y >> j) & 1
        out.append(TotalAssignment(p.n, tuple(values)))
    return out


def essential_vars(f: TruthTable) -> frozenset[int]:
    mask = _kernels.essential_mask(f.bits, f.n)
    return frozenset(i for i in range(f.n) if (mask >> i) & 1)


def essential_mask(f: TruthTable) -> int:
    return int(_kernels.essential_mask(f.bits, f.n))


def is_constant(f: TruthTable) -> Optional[int]:
    """Return the constant value of ``f``, or ``None`` when it varies."""
    first = f.bits[0]
    return int(first) if np.all(f.bits == first) else None


def subcube_constant(f: TruthTable, p: PartialAssignment) -> Optional[int]:
    """Constant value of the projection ``f_p`` without materialising it."""
    if f.n != p.n:
        raise ArityError(f"table arity {f.n} != assignment arity {p.n}")
    value = int(_kernels.constant_value(f.bits, f.n, p.mask, p.vals))
    return None if value < 0 else value


def subcube_parity(f: TruthTable, p: PartialAssignment) -> int:
    if f.n != p.n:
        raise ArityError(f"table arity {f.n} != assignment arity {p.n}")
    return int(_kernels.parity(f.bits, f.n, p.mask, p.vals))


def iter_partial_assignments(n: int) -> Iterator[PartialAssignment]:
    """All ``3**n`` partial assignments in base-3 order (digit 2 is a star)."""
    for code in range(3**n):
        values = []
        for _ in range(n):
            code, digit = divmod(code, 3)
            values.append(None if digit == 2 else digit)
        yield PartialAssignment(n, tuple(values))


def deposit(y: int, positions: Iterable[int]) -> int:
    out = 0
    for j, pos in enumerate(positions):
        if (y >> j) & 1:
            out |= 1 << pos
    return out
