"""Checking tests, essentiality hypercubes and discriminatory functions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Optional

import numpy as np

from . import _kernels
from .basis import Basis
from .candidates import candidate_set
from .core import ArityError, PartialAssignment, TotalAssignment, TruthTable, deposit, essential_mask


class NotSatisfiableError(ValueError):
    pass


class InconsistentTestError(ValueError):
    pass


@dataclass(frozen=True)
class Hypercube:
    variables: tuple[int, ...]
    base: PartialAssignment
    values: tuple[int, ...]  # f on the 2**l extensions, ascending star pattern

    def points(self) -> list[int]:
        """Input indices of the extensions, in the order of ``values``."""
        vals = self.base.vals
        return [vals | deposit(y, self.variables) for y in range(1 << len(self.variables))]


def _cube(f: TruthTable, variables: tuple[int, ...], base_index: int) -> Hypercube:
    star_mask = sum(1 << i for i in variables)
    fixed_mask = ((1 << f.n) - 1) & ~star_mask
    base = PartialAssignment.from_mask(f.n, fixed_mask, base_index)
    values = tuple(int(f.bits[base_index | deposit(y, variables)]) for y in range(1 << len(variables)))
    return Hypercube(variables, base, values)


def find_hypercube(f: TruthTable, variables: Iterable[int], rng: Optional[np.random.Generator] = None) -> Optional[Hypercube]:
    """An essentiality hypercube for ``variables``: the first base in ascending
    order, or a uniformly random valid base when ``rng`` is given."""
    variables = tuple(sorted(variables))
    star_mask = sum(1 << i for i in variables)
    if rng is None:
        base = int(_kernels.first_hypercube_base(f.bits, f.n, star_mask))
        return None if base < 0 else _cube(f, variables, base)
    bases = _kernels.all_hypercube_bases(f.bits, f.n, star_mask)
    if len(bases) == 0:
        return None
    return _cube(f, variables, int(bases[rng.integers(len(bases))]))


def build_hypercube_set(
    f: TruthTable,
    l: int,
    rng: Optional[np.random.Generator] = None,
    require_all: bool = False,
) -> dict[tuple[int, ...], Hypercube]:
    """``l``-essentiality hypercube set of ``f`` keyed by variable subset.

    Subsets without a hypercube are absent, unless ``require_all`` is set,
    in which case :class:`NotSatisfiableError` is raised.
    """
    if not 0 <= l <= f.n:
        raise ArityError(f"hypercube size {l} outside 0..{f.n}")
    out = {}
    for subset in itertools.combinations(range(f.n), l):
        cube = find_hypercube(f, subset, rng)
        if cube is None:
            if require_all:
                raise NotSatisfiableError(f"no essentiality hypercube for {[i + 1 for i in subset]}")
            continue
        out[subset] = cube
    return out


def hypercube_test(f: TruthTable, cubes: dict[tuple[int, ...], Hypercube]) -> set[tuple[int, int]]:
    """The ``(input index, value)`` pairs covered by a hypercube set."""
    return {(v, int(f.bits[v])) for cube in cubes.values() for v in cube.points()}


def is_l_satisfiable(f: TruthTable, l: int) -> bool:
    return all(
        _kernels.first_hypercube_base(f.bits, f.n, sum(1 << i for i in s)) >= 0
        for s in itertools.combinations(range(f.n), l)
    )


@dataclass(frozen=True)
class CheckingTest:
    n: int
    basis_name: str
    pairs: frozenset  # of (input index, bit)

    @classmethod
    def from_hypercubes(cls, f: TruthTable, basis_name: str, cubes) -> "CheckingTest":
        return cls(f.n, basis_name, frozenset(hypercube_test(f, cubes)))

    def __len__(self) -> int:
        return len(self.pairs)

    def dumps(self) -> str:
        lines = [f"n={self.n} basis={self.basis_name}"]
        for v, b in sorted(self.pairs):
            lines.append(f"{TotalAssignment.from_index(self.n, v)} {b}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "CheckingTest":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty checking test")
        header = dict(part.split("=", 1) for part in lines[0].split())
        if "n" not in header or "basis" not in header:
            raise ValueError("header must read 'n=<k> basis=<name>'")
        n = int(header["n"])
        pairs = set()
        for ln in lines[1:]:
            vec, bit = ln.split()
            point = TotalAssignment.parse(vec)
            if point.n != n:
                raise ArityError(f"vector {vec} does not have length {n}")
            if bit not in ("0", "1"):
                raise ValueError(f"bad bit {bit!r}")
            pairs.add((point.index, int(bit)))
        return cls(n, header["basis"], frozenset(pairs))


class Verdict(IntEnum):
    UNIQUE = 0
    AMBIGUOUS = 1
    INCONSISTENT = 2


def consistent_candidates(test: CheckingTest, basis: Basis) -> np.ndarray:
    pts = sorted(test.pairs)
    return candidate_set(basis, test.n).consistent([v for v, _ in pts], [b for _, b in pts])


def classify_test(test: CheckingTest, basis: Basis) -> Verdict:
    """Unique, ambiguous, or inconsistent (no read-once candidate fits)."""
    count = consistent_candidates(test, basis).size
    if count == 0:
        return Verdict.INCONSISTENT
    return Verdict.UNIQUE if count == 1 else Verdict.AMBIGUOUS


def verify_checking_test(test: CheckingTest, basis: Basis, n: int, f_ref: TruthTable) -> bool:
    """True iff ``f_ref`` is the only read-once function over ``basis`` fitting ``test``."""
    if test.n != n or f_ref.n != n:
        raise ArityError("checking test, arity and reference function disagree")
    for v, b in test.pairs:
        if int(f_ref.bits[v]) != b:
            raise InconsistentTestError(f"reference differs from the test at {TotalAssignment.from_index(n, v)}")
    hits = consistent_candidates(test, basis)
    return hits.size == 1 and int(candidate_set(basis, n).tables[hits[0]]) == f_ref.to_int()


def is_discriminatory(f: TruthTable) -> Optional[frozenset[int]]:
    """Smallest-first witness ``X'`` such that every assignment to ``X'`` leaves a
    variable outside ``X'`` fictitious, or ``None``."""
    if essential_mask(f) != (1 << f.n) - 1:
        raise ValueError("is_discriminatory needs every variable essential")
    for size in range(1, f.n):
        for subset in itertools.combinations(range(f.n), size):
            if _kernels.discriminatory_subset(f.bits, f.n, sum(1 << i for i in subset)):
                return frozenset(subset)
    return None
