"""Threshold functions, the ``K_n`` family and the adversary experiment.

``K_n`` holds the majority-like base function (unit weights, threshold
``k + 1`` with ``k = n // 2``) and one variant per ``k``-subset ``S`` whose
weights on ``S`` are raised by ``1/(2k)`` with threshold ``k + 1/2``.  Each
variant differs from the base on exactly the indicator vector of ``S``, so
a membership or subcube identity query answered as the base can rule out
at most one variant.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .basis import BasisFunction
from .core import PartialAssignment, TotalAssignment, TruthTable, _check_arity, iter_partial_assignments
from .formula import Gate, ReadOnceFormula, Var
from .oracle import (
    Counterexample,
    EquivalenceYes,
    Membership,
    OracleSession,
    QueryNotAllowed,
    SubcubeIdentity,
)

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class ThresholdFunction:
    """``f(x) = 1`` iff ``sum(weights[i] * x[i]) >= threshold``, in exact arithmetic."""

    weights: tuple[Fraction, ...]
    threshold: Fraction

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))
        object.__setattr__(self, "threshold", Fraction(self.threshold))

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def monotone(self) -> bool:
        return all(w >= 0 for w in self.weights)

    def scaled(self) -> tuple[list[int], int]:
        """Integer weights and threshold with the same comparisons."""
        scale = math.lcm(*(q.denominator for q in (*self.weights, self.threshold)))
        return [int(w * scale) for w in self.weights], int(self.threshold * scale)


def threshold_to_tt(t: ThresholdFunction) -> TruthTable:
    _check_arity(t.n)
    weights, theta = t.scaled()
    v = np.arange(1 << t.n, dtype=np.int64)
    bound = sum(abs(w) for w in weights) + abs(theta)
    dtype = np.int64 if bound < 2**62 else object
    total = np.zeros(v.shape, dtype=dtype)
    for i, w in enumerate(weights):
        total = total + ((v >> i) & 1).astype(dtype) * w
    return TruthTable(t.n, (total >= theta).astype(np.uint8))


def random_monotone_threshold(n: int, rng: np.random.Generator, max_num: int = 12, max_den: int = 6) -> ThresholdFunction:
    """Random nonnegative rational weights; threshold drawn between 0 and their sum."""
    weights = [Fraction(int(rng.integers(0, max_num + 1)), int(rng.integers(1, max_den + 1))) for _ in range(n)]
    total = sum(weights, Fraction(0))
    theta = Fraction(int(rng.integers(1, 4 * max_den + 1)), 4 * max_den) * total if total else Fraction(1)
    return ThresholdFunction(tuple(weights), theta)


@dataclass(frozen=True)
class KnFamily:
    n: int
    k: int
    base: ThresholdFunction
    subsets: tuple[tuple[int, ...], ...]
    variants: tuple[ThresholdFunction, ...]
    tables: np.ndarray  # (members, 2**n) uint8; row 0 is the base

    @property
    def size(self) -> int:
        return len(self.variants) + 1

    def member(self, m: int) -> ThresholdFunction:
        return self.base if m == 0 else self.variants[m - 1]

    def table(self, m: int) -> TruthTable:
        return TruthTable(self.n, self.tables[m])

    def label(self, m: int) -> str:
        return "base" if m == 0 else "S=" + "".join(str(i + 1) for i in self.subsets[m - 1])


@lru_cache(maxsize=None)
def kn_family(n: int) -> KnFamily:
    if n < 2:
        raise ValueError("the family needs n >= 2")
    _check_arity(n)
    k = n // 2
    base = ThresholdFunction((1,) * n, k + 1)
    bump = Fraction(1, 2 * k)
    subsets = tuple(itertools.combinations(range(n), k))
    variants = tuple(
        ThresholdFunction(tuple(1 + bump if i in s else 1 for i in range(n)), Fraction(2 * k + 1, 2)) for s in subsets
    )
    tables = np.stack([threshold_to_tt(t).bits for t in (base, *variants)])
    tables.setflags(write=False)
    return KnFamily(n, k, base, subsets, variants, tables)


# -- adversary ---------------------------------------------------------------


AdversaryQuery = Union[Membership, SubcubeIdentity]


class AdversaryInvariantError(AssertionError):
    pass


def _answers(tables: np.ndarray, n: int, q: AdversaryQuery) -> np.ndarray:
    """Answer of every member (rows of ``tables``) as a 0/1 vector."""
    if isinstance(q, Membership):
        return tables[:, q.point.index]
    if isinstance(q, SubcubeIdentity):
        p = q.p
        stars = p.star_vars
        pts = [p.vals | sum(((y >> j) & 1) << i for j, i in enumerate(stars)) for y in range(1 << len(stars))]
        vals = tables[:, pts]
        return np.all(vals == vals[:, :1], axis=1).astype(np.uint8)
    raise QueryNotAllowed(f"the adversary answers membership and subcube identity queries, not {type(q).__name__}")


@dataclass
class AdversaryState:
    family: KnFamily
    alive: set = field(default_factory=set)
    transcript: list = field(default_factory=list)
    counters: dict = field(default_factory=lambda: {"membership": 0, "si": 0})

    def __post_init__(self):
        if not self.alive:
            self.alive = set(range(self.family.size))


def adversary_answer(st: AdversaryState, q: AdversaryQuery) -> int:
    """Answer ``q`` as the base function and drop the members it rules out."""
    fam = st.family
    if q.kind.value not in st.counters:
        raise QueryNotAllowed(f"{q.kind.value} queries are not part of the adversary game")
    answers = _answers(fam.tables, fam.n, q)
    given = int(answers[0])
    removed = {m for m in st.alive if int(answers[m]) != given}
    if 0 in removed:
        raise AdversaryInvariantError("the base member can never be eliminated")
    if len(removed) > 1:
        raise AdversaryInvariantError(f"{len(removed)} members removed by one query")
    st.alive -= removed
    st.counters[q.kind.value] += 1
    st.transcript.append((q, given))
    return given


def pivotal(p: PartialAssignment, k: int) -> bool:
    """True when exactly one total extension of ``p`` has ``k`` ones."""
    ones = sum(1 for v in p.values if v == 1)
    stars = len(p.star_vars)
    need = k - ones
    return 0 <= need <= stars and math.comb(stars, need) == 1


def max_elimination(n: int) -> int:
    """Largest number of members any single query removes (all memberships and SI patterns)."""
    fam = kn_family(n)
    worst = 0
    for index in range(1 << n):
        ans = fam.tables[:, index]
        worst = max(worst, int(np.count_nonzero(ans != ans[0])))
    for p in iter_partial_assignments(n):
        ans = _answers(fam.tables, n, SubcubeIdentity(p))
        worst = max(worst, int(np.count_nonzero(ans != ans[0])))
    return worst


# -- strategies ---------------------------------------------------------------

Strategy = Callable[[KnFamily, list, np.random.Generator], AdversaryQuery]


def exhaustive_k_weight(fam: KnFamily, transcript: list, rng: np.random.Generator) -> AdversaryQuery:
    """Membership on the ``k``-weight vectors in lexicographic order of their support."""
    s = fam.subsets[len(transcript) % len(fam.subsets)]
    return Membership(TotalAssignment(fam.n, tuple(int(i in s) for i in range(fam.n))))


def random_strategy(fam: KnFamily, transcript: list, rng: np.random.Generator) -> AdversaryQuery:
    """Fresh random queries: half memberships on unasked ``k``-weight vectors, half SI."""
    asked = {str(q.point) for q, _ in transcript if isinstance(q, Membership)}
    if rng.random() < 0.5:
        fresh = [s for s in fam.subsets if "".join(str(int(i in s)) for i in range(fam.n)) not in asked]
        if fresh:
            s = fresh[int(rng.integers(len(fresh)))]
            return Membership(TotalAssignment(fam.n, tuple(int(i in s) for i in range(fam.n))))
    values = tuple(None if c == 2 else int(c) for c in rng.integers(0, 3, fam.n))
    return SubcubeIdentity(PartialAssignment(fam.n, values))


@lru_cache(maxsize=None)
def _all_queries(n: int) -> tuple[list, np.ndarray]:
    fam = kn_family(n)
    queries: list = [Membership(TotalAssignment.from_index(n, v)) for v in range(1 << n)]
    queries += [SubcubeIdentity(p) for p in iter_partial_assignments(n)]
    answers = np.stack([_answers(fam.tables, n, q) for q in queries])
    return queries, answers


def greedy_entropy(fam: KnFamily, transcript: list, rng: np.random.Generator) -> AdversaryQuery:
    """Query whose answer splits the members consistent so far most evenly."""
    queries, answers = _all_queries(fam.n)
    alive = np.ones(fam.size, dtype=bool)
    for q, given in transcript:
        alive &= _answers(fam.tables, fam.n, q) == given
    sub = answers[:, alive].astype(np.float64)
    p1 = sub.mean(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -np.nan_to_num(p1 * np.log2(p1)) - np.nan_to_num((1 - p1) * np.log2(1 - p1))
    return queries[int(np.argmax(h))]


STRATEGIES: dict[str, Strategy] = {
    "exhaustive-k-weight": exhaustive_k_weight,
    "random": random_strategy,
    "greedy-entropy": greedy_entropy,
}


@dataclass(frozen=True)
class ExperimentResult:
    n: int
    k: int
    pivots: int  # C(n, k)
    strategy: str
    budget: int
    survivors: int
    queries_by_kind: dict

    def row(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "C(n,k)": self.pivots,
            "strategy": self.strategy,
            "budget": self.budget,
            "survivors": self.survivors,
            "queries_by_kind": self.queries_by_kind,
        }


def run_adversary_experiment(
    strategy: Union[str, Strategy], n: int, budget: int, rng: Optional[np.random.Generator] = None
) -> ExperimentResult:
    """Play ``budget`` strategy queries against the adversary; report the survivors."""
    name = strategy if isinstance(strategy, str) else getattr(strategy, "__name__", "custom")
    fn = STRATEGIES[strategy] if isinstance(strategy, str) else strategy
    rng = rng if rng is not None else np.random.default_rng(0)
    fam = kn_family(n)
    st = AdversaryState(fam)
    for _ in range(budget):
        adversary_answer(st, fn(fam, st.transcript, rng))
    return ExperimentResult(n, fam.k, len(fam.subsets), name, budget, len(st.alive), dict(st.counters))


def base_formula(fam: KnFamily) -> ReadOnceFormula:
    """The base function as a single threshold gate over ``x_1..x_n``."""
    gate = BasisFunction(f"thr[1^{fam.n};{fam.k + 1}]", fam.table(0))
    return ReadOnceFormula(fam.n, Gate(gate, tuple(Var(i) for i in range(fam.n))))


def eq_identifies_kn(n: int, target: int) -> tuple[int, int]:
    """Identify member ``target`` of ``K_n`` with one equivalence query on the base.

    Returns ``(identified member, equivalence queries used)``.
    """
    fam = kn_family(n)
    s = OracleSession(fam.table(target))
    answer = s.equivalence(base_formula(fam))
    if isinstance(answer, EquivalenceYes):
        found = 0
    else:
        assert isinstance(answer, Counterexample)
        support = tuple(i for i, b in enumerate(answer.point.bits) if b)
        found = fam.subsets.index(support) + 1
    return found, s.counters["equivalence"]
