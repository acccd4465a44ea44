import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as o
from roql import core
from roql.core import ArityError, PartialAssignment, TotalAssignment, TruthTable


def tables(max_n=6, min_n=0):
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.integers(0, (1 << (1 << n)) - 1).map(lambda v: TruthTable.from_int(n, v))
    )


def partials(n):
    return st.lists(st.sampled_from([0, 1, None]), min_size=n, max_size=n).map(
        lambda vals: PartialAssignment(n, tuple(vals))
    )


AND2 = TruthTable.from_int(2, 0b1000)


def test_project_hardwires_a_conjunct():
    assert core.project(AND2, PartialAssignment.parse("*1")) == TruthTable.variable(1, 0)


def test_project_total_gives_arity_zero_constant():
    got = core.project(AND2, PartialAssignment.parse("10"))
    assert got.n == 0 and core.is_constant(got) == 0


def test_project_all_stars_is_identity():
    f = TruthTable.from_int(3, 0b10010110)
    assert core.project(f, PartialAssignment.stars(3)) == f


def test_project_arity_mismatch():
    with pytest.raises(ArityError):
        core.project(AND2, PartialAssignment.parse("1**"))


def test_total_extensions_examples():
    assert [str(a) for a in core.total_extensions(PartialAssignment.parse("1*"))] == ["10", "11"]
    assert [str(a) for a in core.total_extensions(PartialAssignment.parse("01"))] == ["01"]
    assert len(core.total_extensions(PartialAssignment.stars(3))) == 8


def test_essential_vars_examples():
    assert core.essential_vars(AND2) == {0, 1}
    assert core.essential_vars(TruthTable.constant(3, 1)) == frozenset()
    assert core.essential_vars(TruthTable.variable(2, 0)) == {0}


def test_is_constant_examples():
    assert core.is_constant(TruthTable.constant(2, 0)) == 0
    assert core.is_constant(TruthTable.constant(2, 1)) == 1
    assert core.is_constant(TruthTable.variable(1, 0)) is None


def test_truth_table_text_round_trip():
    f = TruthTable.from_int(2, 0b0110)
    assert f.dumps() == "n=2\n0110\n"
    assert TruthTable.loads(f.dumps()) == f
    with pytest.raises(ValueError):
        TruthTable.loads("n=2\n011")


def test_tables_are_immutable():
    f = TruthTable.from_int(2, 0b0110)
    with pytest.raises(ValueError):
        f.bits[0] = 1


def test_arity_cap_is_configurable(monkeypatch):
    monkeypatch.setenv("ROQL_ARITY_CAP", "3")
    with pytest.raises(ArityError):
        TruthTable.constant(4, 0)
    monkeypatch.setenv("ROQL_ARITY_CAP", "17")
    assert core.arity_cap() == 17


def test_assignment_syntax():
    p = PartialAssignment.parse("1*0")
    assert p.fixed == {0, 2} and p.star_vars == (1,)
    assert str(p) == "1*0"
    assert TotalAssignment.parse("101").index == 0b101
    with pytest.raises(ValueError):
        PartialAssignment.parse("12*")


@given(tables(max_n=8, min_n=1), st.data())
def test_projection_composes(f, data):
    p = data.draw(partials(f.n))
    fp = core.project(f, p)
    q = data.draw(partials(fp.n))
    combined = list(p.values)
    for j, i in enumerate(p.star_vars):
        combined[i] = q.values[j]
    assert core.project(fp, q) == core.project(f, PartialAssignment(f.n, tuple(combined)))


@given(tables(max_n=7, min_n=1), st.data())
def test_projection_matches_reference(f, data):
    p = data.draw(partials(f.n))
    assert core.project(f, p).to_int() == o.project(f.to_int(), f.n, p.values)
    assert core.subcube_constant(f, p) == o.constant_on(f.to_int(), f.n, p.values)


@given(tables(max_n=6, min_n=1), st.data())
def test_essential_after_projection_within_stars(f, data):
    p = data.draw(partials(f.n))
    assert core.essential_vars(core.project(f, p)) <= set(range(len(p.star_vars)))


@given(tables(max_n=6, min_n=1))
def test_fictitious_variables_do_not_matter(f):
    ess = core.essential_vars(f)
    assert ess == o.essential(f.to_int(), f.n)
    for i in range(f.n):
        if i not in ess:
            lo = core.project(f, PartialAssignment.fixing(f.n, {i: 0}))
            hi = core.project(f, PartialAssignment.fixing(f.n, {i: 1}))
            assert lo == hi


@given(st.integers(0, 6).flatmap(partials))
def test_total_extensions_extend(p):
    exts = core.total_extensions(p)
    assert len(exts) == 2 ** len(p.star_vars)
    assert len({a.index for a in exts}) == len(exts)
    for a in exts:
        assert all(v is None or v == b for v, b in zip(p.values, a.bits))


@given(tables(max_n=6, min_n=1), st.data())
def test_parity_is_xor_of_subcube(f, data):
    p = data.draw(partials(f.n))
    expected = sum(o.bit(f.to_int(), v) for v in o.extensions(f.n, p.values)) & 1
    assert core.subcube_parity(f, p) == expected


def test_iter_partial_assignments_covers_all():
    seen = {str(p) for p in core.iter_partial_assignments(3)}
    assert len(seen) == 27


def test_call_and_operators():
    f = TruthTable.from_int(2, 0b0110)
    assert f((1, 0)) == 1 and f(TotalAssignment.parse("11")) == 0
    assert (~f).to_int() == 0b1001
    assert (f ^ AND2).to_int() == 0b1110
    assert f.weight() == 2
    assert np.array_equal(TruthTable.variable(2, 1).bits, [0, 0, 1, 1])
