import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from faultgraphs.boolean_core import (
    TruthTable,
    evaluate_table,
    input_matrix,
    is_monotone,
    minimal_cut_sets_bruteforce,
    minimize,
    probability_bruteforce,
    table_from_cut_sets,
)
from faultgraphs.errors import (
    NonMonotoneFunction,
    ProbabilityOutOfRange,
    TooManyVariables,
    TrivialFunction,
    UniverseMismatch,
)
from faultgraphs.fault_tree import ft_truth_table

from conftest import CONTAINER_SEAL_CUT_SETS
from helpers import random_ft

SEAL = tuple(f'B{i}' for i in range(1, 8))


def seal_formula(b1, b2, b3, b4, b5, b6, b7):
    return int((b1 and b2) or (b3 and b7 and (b4 + b5 + b6) >= 2))


def seal_table():
    return TruthTable.from_function(SEAL, lambda a: seal_formula(*(a[v] for v in SEAL)))


def and_table():
    return TruthTable(('B1', 'B2'), [0, 0, 0, 1])


def or_table():
    return TruthTable(('B1', 'B2'), [0, 1, 1, 1])


def test_row_convention_msb_first():
    bits = input_matrix(3)
    assert bits[1].tolist() == [0, 0, 1]
    assert bits[4].tolist() == [1, 0, 0]
    t = TruthTable(('x', 'y'), [0, 0, 1, 0])
    assert evaluate_table(t, {'x': 1, 'y': 0}) == 1


def test_evaluate_table_examples():
    assert evaluate_table(TruthTable.constant(('B1', 'B2'), 1), {'B1': 0, 'B2': 1}) == 1
    assert evaluate_table(and_table(), {'B1': 1, 'B2': 0}) == 0
    a = dict.fromkeys(SEAL, 0) | {'B1': 1, 'B2': 1}
    assert evaluate_table(seal_table(), a) == 1


@pytest.mark.parametrize('a', [{'B1': 1}, {'B1': 1, 'B2': 0, 'B3': 1}])
def test_evaluate_table_universe_mismatch(a):
    with pytest.raises(UniverseMismatch):
        evaluate_table(and_table(), a)


def test_table_size_guard():
    with pytest.raises(TooManyVariables):
        input_matrix(25)
    with pytest.raises(ValueError):
        TruthTable(('a',), [0, 1, 1])


def test_seal_failure_count_by_inclusion_exclusion():
    # P(G2) = 1/4, P(G3) = P(B3) P(B7) P(2of3) = 1/4 * 1/2, P(G2 and G3) = product
    p_g2 = Fraction(1, 4)
    p_g3 = Fraction(1, 4) * Fraction(1, 2)
    assert (p_g2 + p_g3 - p_g2 * p_g3) * 128 == 44
    count = sum(seal_formula(*bits) for bits in itertools.product((0, 1), repeat=7))
    assert count == 44
    assert seal_table().count_ones() == 44


def test_minimal_cut_sets_examples():
    assert minimal_cut_sets_bruteforce(and_table()) == {frozenset({'B1', 'B2'})}
    assert minimal_cut_sets_bruteforce(or_table()) == {frozenset({'B1'}), frozenset({'B2'})}
    assert minimal_cut_sets_bruteforce(seal_table()) == CONTAINER_SEAL_CUT_SETS


def test_minimal_cut_sets_rejects():
    with pytest.raises(TrivialFunction):
        minimal_cut_sets_bruteforce(TruthTable.constant(('B1',), 1))
    with pytest.raises(NonMonotoneFunction, match='NOT function'):
        minimal_cut_sets_bruteforce(TruthTable(('B1', 'B2'), [0, 1, 1, 0]))


def test_probability_examples():
    assert probability_bruteforce(and_table(), {'B1': 0.5, 'B2': 0.5}) == 0.25
    p = dict.fromkeys(SEAL, 1e-3)
    expected = 1e-6 + 2.998e-12 - 1e-6 * 2.998e-12
    assert probability_bruteforce(seal_table(), p) == pytest.approx(expected, abs=1e-18)
    assert probability_bruteforce(seal_table(), dict.fromkeys(SEAL, 0.5)) == 44 / 128


def test_probability_errors():
    with pytest.raises(ProbabilityOutOfRange):
        probability_bruteforce(and_table(), {'B1': 1.5, 'B2': 0.5})
    with pytest.raises(UniverseMismatch):
        probability_bruteforce(and_table(), {'B1': 0.5})


def test_minimize_examples():
    assert minimize([{'B1'}, {'B1', 'B2'}]) == {frozenset({'B1'})}
    assert minimize([{'B1', 'B2'}, {'B1', 'B2'}]) == {frozenset({'B1', 'B2'})}
    assert minimize(CONTAINER_SEAL_CUT_SETS) == CONTAINER_SEAL_CUT_SETS
    assert minimize([]) == frozenset()


def test_lift_reorders_and_extends():
    t = TruthTable(('x', 'y'), [0, 0, 0, 1])
    lifted = t.lift(('y', 'z', 'x'))
    for bits in itertools.product((0, 1), repeat=3):
        a = dict(zip(('y', 'z', 'x'), bits))
        assert evaluate_table(lifted, a) == (a['x'] & a['y'])


cut_set_lists = st.lists(
    st.frozensets(st.sampled_from(['a', 'b', 'c', 'd', 'e']), min_size=1, max_size=4),
    max_size=8)


@given(cut_set_lists)
def test_minimize_idempotent_antichain_and_semantics(sets):
    m = minimize(sets)
    assert minimize(m) == m
    assert all(not (x < y) for x in m for y in m)
    universe = ('a', 'b', 'c', 'd', 'e')
    assert table_from_cut_sets(m, universe) == table_from_cut_sets(sets, universe)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(2, 8))
def test_cut_sets_fire_and_are_minimal(rng, n):
    t = ft_truth_table(random_ft(rng, n))
    for s in minimal_cut_sets_bruteforce(t):
        a = {v: int(v in s) for v in t.universe}
        assert evaluate_table(t, a) == 1
        for v in s:
            assert evaluate_table(t, a | {v: 0}) == 0


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(2, 7))
def test_deterministic_probabilities_match_table(rng, n):
    t = ft_truth_table(random_ft(rng, n, shared=True))
    for row in input_matrix(n)[:: max(1, (1 << n) // 16)]:
        a = dict(zip(t.universe, row.tolist()))
        assert probability_bruteforce(t, {v: float(x) for v, x in a.items()}) == \
            evaluate_table(t, a)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(2, 8))
def test_gate_compositions_are_monotone(rng, n):
    t = ft_truth_table(random_ft(rng, n, shared=True))
    assert is_monotone(t)
    # pairwise dominance spot-check, independent of the single-bit scan
    f = t.outputs
    rows = np.arange(len(t))
    for _ in range(50):
        r = rng.randrange(len(t))
        sup = rows[(rows & r) == r]
        assert np.all(f[sup] >= f[r])


def test_non_monotone_detected_for_random_parities():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randint(2, 6)
        t = TruthTable.from_function(
            tuple(f'x{i}' for i in range(n)),
            lambda a: sum(a.values()) % 2)
        assert not is_monotone(t)
