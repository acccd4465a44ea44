import numpy as np
import pytest

import fixtures as fx
import oracles as o
from roql.basis import AND_OR, B2, Basis, threshold_basis
from roql.candidates import CandidateSet, candidate_set
from roql.core import ArityError, TruthTable, essential_mask
from roql.formula import truth_table


@pytest.mark.parametrize("n", range(0, 5))
def test_b2_enumeration_matches_syntactic_reference(n):
    cands = candidate_set(B2, n)
    assert {int(t) for t in cands.tables} == o.b2_read_once(n)
    assert len(cands) == fx.B2_COUNT[n]


def test_b2_enumeration_n5_counts():
    cands = candidate_set(B2, 5)
    assert len(cands) == fx.B2_COUNT[5]
    full = sum(essential_mask(cands.table(i)) == 31 for i in range(len(cands)))
    assert full == fx.B2_ESSENTIAL_COUNT[5]


@pytest.mark.parametrize("n", range(1, 6))
def test_and_or_enumeration(n):
    cands = candidate_set(AND_OR, n)
    assert len(cands) == fx.AND_OR_COUNT[n]
    if n <= 4:
        assert {int(t) for t in cands.tables} == o.monotone_read_once(n)


@pytest.mark.parametrize("basis, n", [(B2, 4), (AND_OR, 4), (threshold_basis(3), 4)])
def test_formulas_rebuild_their_tables(basis, n):
    cands = candidate_set(basis, n)
    rng = np.random.default_rng(7)
    for i in rng.choice(len(cands), size=min(300, len(cands)), replace=False):
        f = cands.formula(int(i))
        assert f.is_over(basis)
        assert truth_table(f) == cands.table(int(i))
        assert cands.index_of(cands.table(int(i))) == int(i)


def test_basis_without_constants_keeps_every_leaf():
    and_only = Basis("and", tuple(g for g in AND_OR.functions if g.name == "AND"))
    cands = candidate_set(and_only, 3)
    assert len(cands) == 7  # one conjunction per nonempty leaf set
    assert TruthTable.from_function(2, lambda x: x[0] | x[1]) not in candidate_set(and_only, 2)


def test_consistency_filter():
    cands = candidate_set(B2, 2)
    hits = cands.consistent([3], [1])
    assert all(cands.table(int(i)).bits[3] == 1 for i in hits)
    assert len(cands.consistent([], [])) == len(cands)


def test_arity_limit():
    with pytest.raises(ArityError):
        CandidateSet(B2, 7)


def test_memoised():
    assert candidate_set(B2, 3) is candidate_set(B2, 3)
