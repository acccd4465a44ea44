"""Query oracles over a hidden truth table, with per-kind accounting.

Six query kinds are supported: membership, subcube identity (``si``),
necessity, possibility, subcube parity and proper equivalence.  The module
also provides the reductions between them: subcube identity from necessity
plus possibility, necessity/possibility from subcube identity plus
membership, and an equivalence query answered with membership and subcube
identity queries only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from . import core
from .basis import Basis
from .core import ArityError, PartialAssignment, TotalAssignment, TruthTable
from .formula import ReadOnceFormula, truth_table


class Kind(str, Enum):
    MEMBERSHIP = "membership"
    SI = "si"
    NECESSITY = "necessity"
    POSSIBILITY = "possibility"
    PARITY = "parity"
    EQUIVALENCE = "equivalence"


ALL_KINDS = frozenset(Kind)


class QueryNotAllowed(PermissionError):
    pass


class ImproperHypothesisError(ValueError):
    """An equivalence payload that is not read-once over the session basis."""


class PreconditionError(ValueError):
    pass


class PromiseViolation(RuntimeError):
    """The hidden target is outside the class a learner was promised."""


class NoCheckingTestError(ValueError):
    pass


# -- queries ---------------------------------------------------------------


@dataclass(frozen=True)
class Membership:
    point: TotalAssignment
    kind = Kind.MEMBERSHIP


@dataclass(frozen=True)
class SubcubeIdentity:
    p: PartialAssignment
    kind = Kind.SI


@dataclass(frozen=True)
class Necessity:
    p: PartialAssignment
    kind = Kind.NECESSITY


@dataclass(frozen=True)
class Possibility:
    p: PartialAssignment
    kind = Kind.POSSIBILITY


@dataclass(frozen=True)
class SubcubeParity:
    p: PartialAssignment
    kind = Kind.PARITY


@dataclass(frozen=True)
class Equivalence:
    hypothesis: ReadOnceFormula
    kind = Kind.EQUIVALENCE


Query = Union[Membership, SubcubeIdentity, Necessity, Possibility, SubcubeParity, Equivalence]


# -- answers ---------------------------------------------------------------


@dataclass(frozen=True)
class Bit:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class YesNo:
    flag: bool

    def __str__(self):
        return "yes" if self.flag else "no"

    def __bool__(self):
        return self.flag


@dataclass(frozen=True)
class EquivalenceYes:
    def __str__(self):
        return "yes"


@dataclass(frozen=True)
class Counterexample:
    point: TotalAssignment

    def __str__(self):
        return f"counterexample {self.point}"


Answer = Union[Bit, YesNo, EquivalenceYes, Counterexample]


def _payload(q: Query) -> str:
    if isinstance(q, Membership):
        return str(q.point)
    if isinstance(q, Equivalence):
        return str(q.hypothesis)
    return str(q.p)


@dataclass
class OracleSession:
    """Answers queries about a hidden ``target`` and counts them.

    ``allowed`` restricts the query kinds; a disallowed query raises
    :class:`QueryNotAllowed` and is not counted.  ``basis`` is the class the
    equivalence oracle accepts hypotheses from (``None`` accepts any
    formula).  With ``generalized_si`` a subcube identity query on a total
    assignment returns the bit ``f(p)`` instead of "yes".
    """

    target: TruthTable
    allowed: frozenset = ALL_KINDS
    basis: Optional[Basis] = None
    generalized_si: bool = False
    record: bool = False
    counters: dict = field(default_factory=lambda: {k.value: 0 for k in Kind})
    log: list = field(default_factory=list)

    def __post_init__(self):
        self.allowed = frozenset(Kind(k) for k in self.allowed)

    @property
    def n(self) -> int:
        return self.target.n

    def total_queries(self) -> int:
        return sum(self.counters.values())

    def counters_json(self) -> str:
        return json.dumps(self.counters, sort_keys=False)

    def _check_arity(self, n: int) -> None:
        if n != self.target.n:
            raise ArityError(f"query arity {n} != target arity {self.target.n}")

    def ask(self, q: Query) -> Answer:
        if q.kind not in self.allowed:
            raise QueryNotAllowed(f"{q.kind.value} queries are not allowed in this session")
        f = self.target
        if isinstance(q, Membership):
            self._check_arity(q.point.n)
            ans: Answer = Bit(int(f.bits[q.point.index]))
        elif isinstance(q, Equivalence):
            g = q.hypothesis
            self._check_arity(g.n)
            if self.basis is not None and not g.is_over(self.basis):
                raise ImproperHypothesisError(f"{g} is not a formula over basis {self.basis.name}")
            diff = np.flatnonzero(truth_table(g).bits != f.bits)
            if diff.size == 0:
                ans = EquivalenceYes()
            else:
                ans = Counterexample(TotalAssignment.from_index(f.n, int(diff[0])))
        else:
            self._check_arity(q.p.n)
            if isinstance(q, SubcubeParity):
                ans = Bit(core.subcube_parity(f, q.p))
            else:
                value = core.subcube_constant(f, q.p)
                if isinstance(q, SubcubeIdentity):
                    if self.generalized_si and q.p.is_total:
                        ans = Bit(value)
                    else:
                        ans = YesNo(value is not None)
                elif isinstance(q, Necessity):
                    ans = YesNo(value == 1)
                else:
                    ans = YesNo(value != 0)
        self.counters[q.kind.value] += 1
        if self.record:
            self.log.append(f"{q.kind.value} {_payload(q)} -> {ans}")
        return ans

    # convenience wrappers returning plain values

    def membership(self, point: TotalAssignment) -> int:
        return self.ask(Membership(point)).value

    def subcube_identity(self, p: PartialAssignment) -> bool:
        ans = self.ask(SubcubeIdentity(p))
        return True if isinstance(ans, Bit) else ans.flag

    def necessity(self, p: PartialAssignment) -> bool:
        return self.ask(Necessity(p)).flag

    def possibility(self, p: PartialAssignment) -> bool:
        return self.ask(Possibility(p)).flag

    def parity(self, p: PartialAssignment) -> int:
        return self.ask(SubcubeParity(p)).value

    def equivalence(self, g: ReadOnceFormula) -> Answer:
        return self.ask(Equivalence(g))


# -- reductions between query kinds -----------------------------------------


def si_from_np(s: OracleSession, p: PartialAssignment) -> bool:
    """Subcube identity answered with one necessity and at most one possibility query."""
    if s.necessity(p):
        return True
    return not s.possibility(p)


def _np_from_si_m(s: OracleSession, p: PartialAssignment) -> tuple[bool, bool]:
    if p.is_total:
        b = s.membership(p.to_total())
        return b == 1, b == 1
    if not s.subcube_identity(p):
        # f_p varies: it is neither identically 1 nor identically 0
        return False, True
    b = s.membership(p.lowest_extension())
    return b == 1, b == 1


def necessity_from_si_m(s: OracleSession, p: PartialAssignment) -> bool:
    return _np_from_si_m(s, p)[0]


def possibility_from_si_m(s: OracleSession, p: PartialAssignment) -> bool:
    return _np_from_si_m(s, p)[1]


def bisect(
    s: OracleSession, p: PartialAssignment, c: int, known: Optional[dict[int, int]] = None
) -> TotalAssignment:
    """Find a total extension ``x`` of ``p`` with ``f(x) != c``.

    ``f_p`` must be non-constant (or constant ``1 - c``).  The lowest-index
    star is split at every level: at most ``2 * (stars - 1)`` subcube
    identity queries and at most two membership queries are issued, and
    the returned point is always confirmed by a membership answer.
    ``known`` maps input indices to membership answers already obtained;
    those points are not asked again.
    """
    if p.n != s.n:
        raise ArityError(f"assignment arity {p.n} != target arity {s.n}")
    known = {} if known is None else known

    def member(x: TotalAssignment) -> int:
        if x.index not in known:
            known[x.index] = s.membership(x)
        return known[x.index]

    while True:
        stars = p.star_vars
        if not stars:
            raise PreconditionError(f"{p} is total, so f_p is constant")
        i = stars[0]
        p0, p1 = p.with_value(i, 0), p.with_value(i, 1)
        if len(stars) == 1:
            x0, x1 = p0.to_total(), p1.to_total()
            if member(x0) != c:
                return x0
            if member(x1) != c:
                return x1
            raise PreconditionError(f"f is identically {c} on {p}")
        if not s.subcube_identity(p0):
            p = p0
            continue
        if not s.subcube_identity(p1):
            p = p1
            continue
        # both halves constant: one membership each decides the half equal to 1 - c
        x0 = p0.lowest_extension()
        if member(x0) != c:
            return x0
        x1 = p1.lowest_extension()
        if member(x1) != c:
            return x1
        raise PreconditionError(f"f is identically {c} on {p}")


TestBuilder = Callable[[TruthTable], Sequence[tuple[int, int]]]


def hypercube_test_builder(l: int = 2) -> TestBuilder:
    """Checking test for a function with no fictitious variables.

    Uses an ``l``-essentiality hypercube set; when fewer than ``l`` variables
    remain the full table is the test.  Returns ``(index, value)`` pairs.
    """
    from .checking import NotSatisfiableError, build_hypercube_set, hypercube_test

    def build(g: TruthTable) -> Sequence[tuple[int, int]]:
        if g.n <= l:
            return [(v, int(g.bits[v])) for v in range(1 << g.n)]
        try:
            cubes = build_hypercube_set(g, l, require_all=True)
        except NotSatisfiableError as exc:
            raise NoCheckingTestError(str(exc)) from exc
        return sorted(hypercube_test(g, cubes))

    return build


def equivalence_from_m_si(
    s: OracleSession,
    g: ReadOnceFormula,
    test_builder: Optional[TestBuilder] = None,
) -> Answer:
    """Answer an equivalence query for ``g`` with membership and subcube identity queries.

    The checking test of ``g`` with its fictitious variables removed is
    lifted by fixing those variables to 0 and verified by membership
    queries.  Each test point is then widened by starring the fictitious
    variables; a non-constant subcube is bisected to a counterexample.
    """
    if g.n != s.n:
        raise ArityError(f"hypothesis arity {g.n} != target arity {s.n}")
    if s.basis is not None and not g.is_over(s.basis):
        raise ImproperHypothesisError(f"{g} is not a formula over basis {s.basis.name}")
    if test_builder is None:
        test_builder = hypercube_test_builder(max(2, s.basis.l) if s.basis is not None else 2)
    g_table = truth_table(g)
    essential = sorted(core.essential_vars(g_table))
    reduced = core.project(g_table, PartialAssignment.fixing(g.n, {i: 0 for i in range(g.n) if i not in essential}))
    test = test_builder(reduced)

    def lift(index: int, star_rest: bool) -> PartialAssignment:
        values: list = [None if star_rest else 0] * g.n
        for j, var in enumerate(essential):
            values[var] = (index >> j) & 1
        return PartialAssignment(g.n, tuple(values))

    answers: dict[int, int] = {}
    for index, value in test:
        x = lift(index, star_rest=False).to_total()
        answers[x.index] = s.membership(x)
        if answers[x.index] != value:
            return Counterexample(x)
    if len(essential) == g.n:
        return EquivalenceYes()
    for index, value in test:
        p = lift(index, star_rest=True)
        if not s.subcube_identity(p):
            return Counterexample(bisect(s, p, value, answers))
    return EquivalenceYes()
