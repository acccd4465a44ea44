from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import fixtures as fx
import oracles as o
from roql.basis import B2, b_l, threshold_basis
from roql.candidates import candidate_set
from roql.checking import (
    CheckingTest, InconsistentTestError, Verdict, build_hypercube_set, classify_test, find_hypercube,
    hypercube_test, is_discriminatory, is_l_satisfiable, verify_checking_test,
)
from roql.core import TotalAssignment, TruthTable, essential_mask
from roql.formula import parse_formula, random_b2_formula, truth_table
from roql.lowerbound import random_monotone_threshold, threshold_to_tt


def tt(text, n):
    return truth_table(parse_formula(text, n))


def test_hypercube_set_examples():
    f = tt("(x1 & (x2 & x3))", 3)
    cubes = build_hypercube_set(f, 2)
    # three squares of four points overlap in 111
    assert len(cubes) == 3 and sum(len(c.points()) for c in cubes.values()) == 12
    assert {v for v, _ in hypercube_test(f, cubes)} == set(range(1, 8))
    g = tt("(x1 ^ x2)", 2)
    cubes = build_hypercube_set(g, 2)
    assert list(cubes) == [(0, 1)] and len(hypercube_test(g, cubes)) == 4
    whole = build_hypercube_set(f, 3)
    assert len(hypercube_test(f, whole)) == 8


@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_hypercube_bases_match_reference(n, seed):
    f = truth_table(random_b2_formula(n, np.random.default_rng(seed)))
    for subset, cube in build_hypercube_set(f, 2).items():
        ref = o.first_hypercube_base(f.to_int(), n, subset)
        assert [v for i, v in enumerate(ref) if i not in subset] == [
            v for i, v in enumerate(cube.base.values) if i not in subset
        ]


def test_l_satisfiability_examples():
    assert is_l_satisfiable(tt("(x1 & x2)", 2), 2)
    mux = tt(fx.NON_3_SAT_MUX, 4)
    assert essential_mask(mux) == 15 and not is_l_satisfiable(mux, 3)
    # once x1 is fixed, x2 and x3 never matter together
    assert not is_l_satisfiable(mux, 2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_b2_read_once_functions_are_2_satisfiable(n):
    cands = candidate_set(B2, n)
    for i in range(len(cands)):
        f = cands.table(i)
        if essential_mask(f) == (1 << n) - 1:
            assert is_l_satisfiable(f, 2)


def test_non_3_satisfiable_read_once_over_b3():
    cands = candidate_set(b_l(3), 4)
    bad = [
        int(cands.tables[i])
        for i in range(len(cands))
        if essential_mask(cands.table(i)) == 15 and not is_l_satisfiable(cands.table(i), 3)
    ]
    assert len(bad) == fx.NON_3_SAT_COUNT_B3_N4
    assert bad[0] == fx.NON_3_SAT_FIRST_B3_N4
    assert tt(fx.NON_3_SAT_MUX, 4).to_int() in bad


def test_verify_examples():
    f = tt("(x1 & x2)", 2)
    full = CheckingTest(2, "b2", frozenset((v, int(f.bits[v])) for v in range(4)))
    assert verify_checking_test(full, B2, 2, f)
    single = CheckingTest(2, "b2", frozenset({(3, 1)}))
    assert not verify_checking_test(single, B2, 2, f)
    with pytest.raises(InconsistentTestError):
        verify_checking_test(CheckingTest(2, "b2", frozenset({(3, 0)})), B2, 2, f)


@pytest.mark.parametrize("n", [3, 4])
def test_hypercube_tests_check_b2_functions(n):
    cands = candidate_set(B2, n)
    for i in range(len(cands)):
        f = cands.table(i)
        if essential_mask(f) != (1 << n) - 1:
            continue
        test = CheckingTest.from_hypercubes(f, "b2", build_hypercube_set(f, 2))
        assert len(test) <= 4 * comb(n, 2)
        assert verify_checking_test(test, B2, n, f)


@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_any_square_set_is_a_checking_test(n, seed):
    rng = np.random.default_rng(seed)
    f = truth_table(random_b2_formula(n, rng))
    test = CheckingTest.from_hypercubes(f, "b2", build_hypercube_set(f, 2, rng=rng))
    assert verify_checking_test(test, B2, n, f)


def test_file_format_round_trip_and_verdicts():
    f = tt("(x1 & x2)", 2)
    test = CheckingTest.from_hypercubes(f, "b2", build_hypercube_set(f, 2))
    text = test.dumps()
    assert text.splitlines()[0] == "n=2 basis=b2"
    assert "11 1" in text.splitlines()
    assert CheckingTest.loads(text) == test
    assert classify_test(test, B2) is Verdict.UNIQUE
    assert classify_test(CheckingTest(2, "b2", frozenset({(3, 1)})), B2) is Verdict.AMBIGUOUS
    # f(00) = 1 is impossible for a read-once function over {AND, OR}
    from roql.basis import AND_OR

    clash = CheckingTest(2, "and-or", frozenset({(0, 1)}))
    assert classify_test(clash, AND_OR) is Verdict.INCONSISTENT


def test_find_hypercube_random_choice_is_valid():
    f = tt("((x1 | x2) & x3)", 3)
    rng = np.random.default_rng(3)
    for _ in range(10):
        cube = find_hypercube(f, (0, 1), rng)
        assert cube.values[0] == 0 and str(cube.base)[2] == "1"


def test_discriminatory_examples():
    assert is_discriminatory(tt("(x1 & x2)", 2)) is None
    assert is_discriminatory(tt(fx.MUX_3, 3)) == {0}
    table, witness = fx.DISCRIMINATORY_3_FIRST
    assert is_discriminatory(TruthTable.from_int(3, table)) == witness
    with pytest.raises(ValueError):
        is_discriminatory(tt("x1", 2))


def test_discriminatory_search_over_three_variables():
    found = [
        (v, is_discriminatory(TruthTable.from_int(3, v)))
        for v in range(256)
        if essential_mask(TruthTable.from_int(3, v)) == 7
    ]
    found = [(v, w) for v, w in found if w is not None]
    assert len(found) == fx.DISCRIMINATORY_3_COUNT
    assert found[0] == fx.DISCRIMINATORY_3_FIRST
    for v, w in found:
        assert o.discriminatory(v, 3) == set(w)


def test_functions_with_two_variables_are_never_discriminatory():
    # a discriminatory function needs at least three essential variables
    for n in (1, 2):
        for v in range(1 << (1 << n)):
            f = TruthTable.from_int(n, v)
            if essential_mask(f) == (1 << n) - 1:
                assert is_discriminatory(f) is None


@pytest.mark.parametrize("n", [3, 4])
def test_threshold_functions_are_not_discriminatory(n):
    rng = np.random.default_rng(n)
    for _ in range(200):
        f = threshold_to_tt(random_monotone_threshold(n, rng))
        if essential_mask(f) == (1 << n) - 1:
            assert is_discriminatory(f) is None
