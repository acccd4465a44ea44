"""Identification algorithms.

* :func:`reconstruct_b2` rebuilds the canonical tree of a read-once function
  over B2 from one essentiality square per variable pair.
* :func:`learn_monotone_si` identifies read-once functions over {AND, OR}
  with subcube identity queries only.
* :func:`learn_via_equivalence` eliminates candidates with (real or
  simulated) equivalence queries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import networkx as nx
import numpy as np

from .basis import Basis
from .canonical import CanonicalTree, Const, Lit, conj, disj, eval_tree, negate, xor
from .candidates import candidate_set
from .core import PartialAssignment, TotalAssignment, deposit
from .cotree import CoNode, GlueTree, NotACographError, co_leaves, cograph_to_cotree
from .formula import ReadOnceFormula
from .oracle import (
    Counterexample,
    EquivalenceYes,
    NoCheckingTestError,
    OracleSession,
    PromiseViolation,
    equivalence_from_m_si,
    hypercube_test_builder,
)


class MembershipCache:
    """Membership answers memoised by input index; only first asks reach the oracle."""

    def __init__(self, session: OracleSession):
        self.session = session
        self.n = session.n
        self.known: dict[int, int] = {}

    def __call__(self, index: int) -> int:
        if index not in self.known:
            self.known[index] = self.session.membership(TotalAssignment.from_index(self.n, index))
        return self.known[index]


@dataclass(frozen=True)
class EssentialitySquare:
    i: int
    j: int
    base: PartialAssignment
    values: tuple[int, int, int, int]  # f at x_i + 2 x_j

    @property
    def linear(self) -> bool:
        return sum(self.values) == 2


SquareSet = dict  # (i, j) with i < j -> EssentialitySquare


def _square_values(ask, base: int, i: int, j: int) -> tuple[int, int, int, int]:
    return tuple(ask(base | (a << i) | (b << j)) for b in (0, 1) for a in (0, 1))


def _both_essential(v) -> bool:
    return (v[0] != v[1] or v[2] != v[3]) and (v[0] != v[2] or v[1] != v[3])


def find_square(s: OracleSession, i: int, j: int, cache: Optional[MembershipCache] = None) -> EssentialitySquare:
    """First base, in ascending order, on which ``x_i`` and ``x_j`` are both essential."""
    if i == j:
        raise ValueError("a square needs two distinct variables")
    i, j = min(i, j), max(i, j)
    ask = cache or MembershipCache(s)
    others = [k for k in range(s.n) if k not in (i, j)]
    fixed_mask = ((1 << s.n) - 1) & ~((1 << i) | (1 << j))
    for m in range(1 << len(others)):
        base = deposit(m, others)
        values = _square_values(ask, base, i, j)
        if _both_essential(values):
            return EssentialitySquare(i, j, PartialAssignment.from_mask(s.n, fixed_mask, base), values)
    raise PromiseViolation(f"no essentiality square for x{i + 1}, x{j + 1}")


def square_set(s: OracleSession, cache: Optional[MembershipCache] = None) -> SquareSet:
    cache = cache or MembershipCache(s)
    return {(i, j): find_square(s, i, j, cache) for i, j in itertools.combinations(range(s.n), 2)}


def reconstruct_glueing(squares: SquareSet, n: int) -> GlueTree:
    """Cotree of the graph joining ``i, j`` exactly when their square is non-linear."""
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(key for key, sq in squares.items() if not sq.linear)
    try:
        return cograph_to_cotree(graph)
    except NotACographError as exc:
        raise PromiseViolation(f"target not read-once over B2: {exc}") from exc


@dataclass
class _Current:
    """A resolved subtree: its exact definition up to sign, and its original leaves."""

    tree: CanonicalTree
    leaves: tuple[int, ...]


def _relative_square(squares: SquareSet, u: _Current, w: _Current, n: int) -> tuple[int, int, int, int]:
    """Square values re-expressed in the coordinates ``(D_u, D_w)``."""
    i, j = u.leaves[0], w.leaves[0]
    swap = i > j
    sq = squares[(j, i) if swap else (i, j)]
    base = sq.base.vals
    point = [(base >> k) & 1 for k in range(n)]

    def offset(cur: _Current, var: int) -> int:
        point[var] = 0
        lo = eval_tree(cur.tree, point)
        point[var] = 1
        hi = eval_tree(cur.tree, point)
        point[var] = 0
        if lo == hi:
            raise PromiseViolation(f"x{var + 1} does not reach its subtree on the stored square")
        return lo

    cu, cw = offset(u, i), offset(w, j)
    v = sq.values
    out = []
    for bw in (0, 1):
        for bu in (0, 1):
            a, b = bu ^ cu, bw ^ cw
            out.append(v[b + 2 * a] if swap else v[a + 2 * b])
    return tuple(out)


def _odd_point(values) -> tuple[int, int]:
    weight = sum(values)
    if weight not in (1, 3):
        raise PromiseViolation(f"square {values} is linear inside a non-linear fragment")
    u = values.index(1 if weight == 1 else 0)
    return u & 1, (u >> 1) & 1


def reconstruct_fragment(
    squares: SquareSet, children: list[_Current], n: int, at_root: bool, known: Optional[tuple[list, int]] = None
) -> CanonicalTree:
    """AND/OR fragment over resolved ``children`` of a glue vertex labelled 1.

    Literal signs follow from the odd point of every pair's square up to a
    global flip; the two resulting variants are complements.  Below a linear
    vertex the OR-rooted variant is the canonical one; at the root ``known``
    (a point and its value) picks the variant.
    """
    r = len(children)
    delta = {}
    for a, b in itertools.combinations(range(r), 2):
        delta[a, b] = _odd_point(_relative_square(squares, children[a], children[b], n))
    sigma = [1] + [1 ^ delta[0, b][0] ^ delta[0, b][1] for b in range(1, r)]
    graph = nx.Graph()
    graph.add_nodes_from(range(r))
    for (a, b), (da, db) in delta.items():
        if da ^ db != sigma[a] ^ sigma[b]:
            raise PromiseViolation("literal signs in a fragment are inconsistent")
        if (da, db) == (sigma[a], sigma[b]):
            graph.add_edge(a, b)
    try:
        shape = cograph_to_cotree(graph)
    except NotACographError as exc:
        raise PromiseViolation(f"fragment is not read-once: {exc}") from exc

    def build(node) -> CanonicalTree:
        if isinstance(node, int):
            tree = children[node].tree
            return tree if sigma[node] else negate(tree)
        kids = [build(c) for c in node.children]
        return conj(*kids) if node.label == 1 else disj(*kids)

    tree = build(shape)
    if at_root:
        point, value = known
        return tree if eval_tree(tree, point) == value else negate(tree)
    return tree if tree.op == "OR" else negate(tree)


def reconstruct_b2(s: OracleSession, n: Optional[int] = None) -> CanonicalTree:
    """Canonical tree of a read-once target over B2 with every variable essential.

    Uses membership queries only: one essentiality square per pair found by
    exhaustive ascending search, then bottom-up resolution of the glueing.
    """
    n = s.n if n is None else n
    if n != s.n:
        raise ValueError(f"declared arity {n} != target arity {s.n}")
    ask = MembershipCache(s)
    if n == 0:
        return Const(ask(0))
    if n == 1:
        lo, hi = ask(0), ask(1)
        if lo == hi:
            raise PromiseViolation("x1 is fictitious")
        return Lit(0, hi == 1)
    squares = square_set(s, ask)
    glue = reconstruct_glueing(squares, n)
    first = squares[(0, 1)]
    known_index = first.base.vals
    known = ([(known_index >> k) & 1 for k in range(n)], ask(known_index))

    def resolve(node: GlueTree, at_root: bool) -> _Current:
        if isinstance(node, int):
            return _Current(Lit(node), (node,))
        kids = [resolve(c, False) for c in node.children]
        leaves = tuple(sorted(v for k in kids for v in k.leaves))
        if node.label == 1:
            return _Current(reconstruct_fragment(squares, kids, n, at_root, known), leaves)
        tree = xor(*(k.tree for k in kids))
        if at_root:
            point, value = known
            tree = tree if eval_tree(tree, point) == value else negate(tree)
        return _Current(tree, leaves)

    result = resolve(glue, True).tree
    for index, value in ask.known.items():
        if eval_tree(result, [(index >> k) & 1 for k in range(n)]) != value:
            raise PromiseViolation("reconstructed tree contradicts a membership answer")
    return result


# -- monotone read-once targets, subcube identity queries only ----------------


def simulate_membership_monotone(s: OracleSession, a) -> int:
    """``f(a)`` for a non-constant monotone target from one subcube identity query.

    The ones of ``a`` are fixed and its zeros starred; the subcube is
    constant exactly when ``f(a) = f(1...1) = 1``.
    """
    values = tuple(1 if int(b) else None for b in a)
    return int(s.subcube_identity(PartialAssignment(len(values), values)))


def learn_monotone_si(s: OracleSession, n: Optional[int] = None) -> CanonicalTree:
    """Identify a non-constant read-once target over {AND, OR} with SI queries only.

    A minimal true set is grown from the all-ones point; every reached
    variable then gets a minimal false-complement (maxterm) and a minterm
    through it, until the reached set is closed.  Unreached variables are
    fictitious.  For a pair ``i, j`` the point keeping everything at 1
    except the other members of their maxterms is an AND square exactly when
    their lowest common ancestor is an AND gate.
    """
    n = s.n if n is None else n
    if n != s.n:
        raise ValueError(f"declared arity {n} != target arity {s.n}")
    if n == 0 or s.subcube_identity(PartialAssignment.stars(n)):
        raise PromiseViolation("target is constant")
    memo: dict[frozenset, int] = {}
    everything = frozenset(range(n))

    def mem(ones: frozenset) -> int:
        if ones not in memo:
            memo[ones] = simulate_membership_monotone(s, [int(k in ones) for k in range(n)])
        return memo[ones]

    def minterm_through(i: Optional[int], start: frozenset) -> frozenset:
        cur = start
        for k in sorted(start):
            if k != i and mem(cur - {k}):
                cur = cur - {k}
        return cur

    def maxterm_through(i: int, minterm: frozenset) -> frozenset:
        false = minterm - {i}
        for k in sorted(everything - false - {i}):
            if not mem(false | {k}):
                false = false | {k}
        return everything - false

    minterm_of: dict[int, frozenset] = {}
    maxterm_of: dict[int, frozenset] = {}
    first = minterm_through(None, everything)
    minterm_of.update(dict.fromkeys(first, first))
    while True:
        need_max = sorted(minterm_of.keys() - maxterm_of.keys())
        need_min = sorted(maxterm_of.keys() - minterm_of.keys())
        if need_max:
            i = need_max[0]
            clause = maxterm_through(i, minterm_of[i])
            for k in clause:
                maxterm_of.setdefault(k, clause)
        elif need_min:
            i = need_min[0]
            term = minterm_through(i, everything - (maxterm_of[i] - {i}))
            for k in term:
                minterm_of.setdefault(k, term)
        else:
            break
    essential = sorted(minterm_of)
    if len(essential) == 1:
        return Lit(essential[0])
    graph = nx.Graph()
    graph.add_nodes_from(essential)
    for i, j in itertools.combinations(essential, 2):
        q = everything - (maxterm_of[i] - {i}) - (maxterm_of[j] - {j})
        square = [mem((q - {i, j}) | {k for k, b in ((i, a), (j, c)) if b}) for c in (0, 1) for a in (0, 1)]
        if square == [0, 0, 0, 1]:
            graph.add_edge(i, j)
    try:
        shape = cograph_to_cotree(graph)
    except NotACographError as exc:
        raise PromiseViolation(f"target is not read-once over AND/OR: {exc}") from exc

    def build(node) -> CanonicalTree:
        if isinstance(node, int):
            return Lit(node)
        kids = [build(c) for c in node.children]
        return conj(*kids) if node.label == 1 else disj(*kids)

    return build(shape)


# -- candidate elimination ---------------------------------------------------


def _full_table_builder(g):
    return [(v, int(g.bits[v])) for v in range(1 << g.n)]


def _pick_hypothesis(rows: np.ndarray) -> int:
    """Row maximising the worst-case number of candidates a counterexample removes."""
    ones = rows.sum(axis=0, dtype=np.int64)
    total = rows.shape[0]
    agree = np.where(rows == 1, ones[None, :], total - ones[None, :])
    return int(np.argmax(agree.min(axis=1)))


def learn_via_equivalence(
    s: OracleSession, basis: Basis, n: Optional[int] = None, simulate: bool = False
) -> ReadOnceFormula:
    """Identify a target read-once over ``basis`` by candidate elimination.

    Each round presents the surviving candidate whose counterexamples prune
    the most in the worst case.  With ``simulate`` the equivalence query is
    answered by membership and subcube identity queries; a checking test
    from essentiality hypercubes is used when one exists, the full table of
    the hypothesis otherwise.
    """
    n = s.n if n is None else n
    if n != s.n:
        raise ValueError(f"declared arity {n} != target arity {s.n}")
    cands = candidate_set(basis, n)
    hypercubes = hypercube_test_builder(max(2, basis.l))

    def builder(g):
        try:
            return hypercubes(g)
        except NoCheckingTestError:
            return _full_table_builder(g)

    shifts = np.arange(1 << n, dtype=np.uint64)
    alive = np.arange(len(cands))
    while alive.size:
        rows = ((cands.tables[alive, None] >> shifts[None, :]) & np.uint64(1)).astype(np.uint8)
        pick = _pick_hypothesis(rows)
        h = cands.formula(int(alive[pick]))
        answer = equivalence_from_m_si(s, h, builder) if simulate else s.equivalence(h)
        if isinstance(answer, EquivalenceYes):
            return h
        assert isinstance(answer, Counterexample)
        y = answer.point.index
        alive = alive[rows[:, y] != rows[pick, y]]
    raise PromiseViolation(f"no read-once function over {basis.name} fits the answers")
