import itertools
import json
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as o
from roql.basis import AND_OR, B2
from roql.candidates import candidate_set
from roql.core import ArityError, PartialAssignment, TotalAssignment, TruthTable, iter_partial_assignments
from roql.formula import parse_formula, random_b2_formula, truth_table
from roql.oracle import (
    Bit, Counterexample, EquivalenceYes, ImproperHypothesisError, Kind, Membership, OracleSession,
    PreconditionError, QueryNotAllowed, SubcubeIdentity, YesNo, bisect, equivalence_from_m_si,
    necessity_from_si_m, possibility_from_si_m, si_from_np,
)

P = PartialAssignment.parse
T = TotalAssignment.parse


def session(text, n, **kw):
    return OracleSession(truth_table(parse_formula(text, n)), **kw)


def test_answer_examples():
    s = session("(x1 & x2)", 2)
    assert s.subcube_identity(P("*0")) is True
    assert s.subcube_identity(P("*1")) is False
    assert session("(x1 ^ x2)", 2).parity(P("**")) == 0
    assert session("(x1 | x2)", 2).necessity(P("1*")) is True
    assert s.possibility(P("*0")) is False
    assert s.membership(T("11")) == 1
    assert s.counters == {"membership": 1, "si": 2, "necessity": 0, "possibility": 1, "parity": 0, "equivalence": 0}


def test_total_si_is_yes_unless_generalised():
    f = truth_table(parse_formula("(x1 & x2)", 2))
    assert OracleSession(f).ask(SubcubeIdentity(P("10"))) == YesNo(True)
    assert OracleSession(f, generalized_si=True).ask(SubcubeIdentity(P("10"))) == Bit(0)
    assert OracleSession(f, generalized_si=True).ask(SubcubeIdentity(P("1*"))) == YesNo(False)


def test_disallowed_kind_is_rejected_and_not_counted():
    s = session("x1", 1, allowed={Kind.SI})
    with pytest.raises(QueryNotAllowed):
        s.membership(T("1"))
    assert s.total_queries() == 0


def test_arity_mismatch():
    s = session("x1", 2)
    with pytest.raises(ArityError):
        s.membership(T("1"))
    with pytest.raises(ArityError):
        s.subcube_identity(P("***"))


def test_improper_equivalence_rejected():
    s = session("(x1 & x2)", 2, basis=AND_OR)
    with pytest.raises(ImproperHypothesisError):
        s.equivalence(parse_formula("(x1 ^ x2)", 2))
    with pytest.raises(ImproperHypothesisError):
        equivalence_from_m_si(s, parse_formula("(x1 ^ x2)", 2))


def test_direct_equivalence_gives_lowest_disagreement():
    s = session("(x1 | x2)", 2)
    assert s.equivalence(parse_formula("(x1 & x2)", 2)) == Counterexample(T("10"))
    assert s.equivalence(parse_formula("~(~x1 & ~x2)", 2)) == EquivalenceYes()


def test_log_and_counter_formats():
    s = session("(x1 & x2)", 2, record=True)
    s.subcube_identity(P("*0"))
    s.membership(T("11"))
    s.equivalence(parse_formula("x1", 2))
    assert s.log == ["si *0 -> yes", "membership 11 -> 1", "equivalence x1 -> counterexample 10"]
    assert json.loads(s.counters_json())["si"] == 1


def test_si_from_np_examples():
    s = OracleSession(TruthTable.constant(2, 1))
    assert si_from_np(s, P("**")) and s.counters["necessity"] == 1 and s.counters["possibility"] == 0
    s = session("x1", 1)
    assert not si_from_np(s, P("*"))
    s = session("(x1 & x2)", 2)
    assert si_from_np(s, P("*0"))
    assert s.counters["necessity"] == 1 and s.counters["possibility"] == 1


def test_necessity_possibility_from_si_examples():
    s = session("(x1 | x2)", 2)
    assert necessity_from_si_m(s, P("1*")) and possibility_from_si_m(s, P("1*"))
    s = session("x1", 1)
    assert not necessity_from_si_m(s, P("*"))
    assert possibility_from_si_m(s, P("*"))
    s = session("x1", 1)
    assert not necessity_from_si_m(s, P("0")) and s.counters == {**s.counters, "membership": 1, "si": 0}
    assert not possibility_from_si_m(s, P("0"))


@pytest.mark.parametrize("n", range(0, 4))
def test_adapters_agree_with_direct_oracles(n):
    cands = candidate_set(B2, n)
    for i in range(len(cands)):
        f = cands.table(i)
        direct = OracleSession(f)
        s = OracleSession(f)
        for p in iter_partial_assignments(n):
            before = s.total_queries()
            assert si_from_np(s, p) == direct.subcube_identity(p)
            assert s.total_queries() - before <= 2
            before = s.total_queries()
            assert necessity_from_si_m(s, p) == direct.necessity(p)
            assert s.total_queries() - before <= 2
            before = s.total_queries()
            assert possibility_from_si_m(s, p) == direct.possibility(p)
            assert s.total_queries() - before <= 2


def test_bisect_examples():
    s = session("x2", 2)
    assert bisect(s, P("0*"), 0) == T("01")
    s = session("(x1 ^ x2)", 2)
    x = bisect(s, P("**"), 0)
    assert s.target(x) == 1
    # one star, both halves constant: two memberships decide
    s = session("x1", 1)
    assert bisect(s, P("*"), 1) == T("0")
    assert s.counters["membership"] == 1 and s.counters["si"] == 0


def test_bisect_precondition():
    s = session("x1", 2)
    with pytest.raises(PreconditionError):
        bisect(s, P("10"), 0)
    with pytest.raises(PreconditionError):
        bisect(s, P("1*"), 1)


@given(st.integers(1, 7), st.integers(0, 2**32 - 1), st.data())
def test_bisect_finds_disagreement_within_budget(n, seed, data):
    rng = np.random.default_rng(seed)
    f = truth_table(random_b2_formula(n, rng))
    p = PartialAssignment(n, tuple(data.draw(st.lists(st.sampled_from([0, 1, None]), min_size=n, max_size=n))))
    values = {o.bit(f.to_int(), v) for v in o.extensions(n, p.values)}
    c = data.draw(st.integers(0, 1))
    s = OracleSession(f)
    if values == {c} or not p.star_vars:
        with pytest.raises(PreconditionError):
            bisect(s, p, c)
        return
    x = bisect(s, p, c)
    assert f(x) != c
    assert all(v is None or v == b for v, b in zip(p.values, x.bits))
    stars = len(p.star_vars)
    assert s.counters["si"] <= 2 * max(stars - 1, 0)
    assert s.counters["membership"] <= 2


def test_equivalence_from_m_si_examples():
    s = session("(x1 & x2)", 2)
    assert equivalence_from_m_si(s, parse_formula("(x1 & x2)", 2)) == EquivalenceYes()
    s = session("(x1 ^ x2)", 2, record=True)
    assert equivalence_from_m_si(s, parse_formula("x1", 2)) == Counterexample(T("01"))
    assert "si 0* -> no" in s.log
    s = session("(x1 | x2)", 2)
    ans = equivalence_from_m_si(s, parse_formula("(x1 & x2)", 2))
    assert isinstance(ans, Counterexample) and ans.point in (T("10"), T("01"))
    assert s.counters["si"] == 0


@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_equivalence_from_m_si_is_sound(n, seed):
    rng = np.random.default_rng(seed)
    f = truth_table(random_b2_formula(n, rng, leaves=sorted(rng.permutation(n)[: rng.integers(0, n + 1)])))
    g = random_b2_formula(n, rng, leaves=sorted(rng.permutation(n)[: rng.integers(0, n + 1)]))
    s = OracleSession(f, basis=B2)
    ans = equivalence_from_m_si(s, g)
    gt = truth_table(g)
    if isinstance(ans, EquivalenceYes):
        assert gt == f
    else:
        assert f(ans.point) != gt(ans.point)
    assert s.counters["membership"] <= 4 * comb(n, 2) + n + 1
    assert s.counters["si"] <= 4 * comb(n, 2) + 2 * n
    assert s.counters["equivalence"] == 0
