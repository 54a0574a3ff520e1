import itertools

import pytest
from hypothesis import given, settings, strategies as st

from faultgraphs.bdd import (
    BDD,
    Op,
    bdd_min_cut_sets,
    bdd_path_sets,
    bdd_probability,
    build_bdd,
    evaluate_bdd,
    from_fault_tree,
    order_heuristic,
    read_bdd_dot,
)
from faultgraphs.boolean_core import (
    TruthTable,
    input_matrix,
    minimal_cut_sets_bruteforce,
    probability_bruteforce,
)
from faultgraphs.errors import (
    ManagerMismatch,
    NonMonotoneFunction,
    OrderMismatch,
    OrderViolation,
    ParseError,
    ProbabilityOutOfRange,
    UniverseMismatch,
)
from faultgraphs.fault_tree import evaluate_ft, ft_truth_table, parse_ft

from conftest import CONTAINER_SEAL_CUT_SETS
from helpers import random_ft


def check_reduced(mgr):
    seen = set()
    for u in range(2, len(mgr)):
        level, low, high = mgr._levels[u], mgr._low[u], mgr._high[u]
        assert low != high
        assert level < mgr._levels[low] and level < mgr._levels[high]
        assert (level, low, high) not in seen
        seen.add((level, low, high))
        assert mgr._unique[(level, low, high)] == u


def test_mk_reduces_and_hash_conses():
    mgr = BDD(['v'])
    assert mgr.mk(0, mgr.false, mgr.false) == mgr.false
    a = mgr.mk(0, mgr.false, mgr.true)
    b = mgr.mk(0, mgr.false, mgr.true)
    assert a.node == b.node
    assert a == mgr.var('v')


def test_mk_order_violation():
    mgr = BDD(['x', 'y'])
    y = mgr.var('y')
    with pytest.raises(OrderViolation):
        mgr.mk(1, mgr.false, y)
    with pytest.raises(OrderViolation):
        mgr.mk(2, mgr.false, mgr.true)


def test_two_of_three_node_count():
    # hand construction: B4 at the root; B5 on both branches (one node each,
    # they differ); a single shared B6 node underneath -> 4 nodes
    mgr = BDD(['B4', 'B5', 'B6'])
    b4, b5, b6 = (mgr.var(v) for v in mgr.order)
    maj = (b4 & b5) | (b4 & b6) | (b5 & b6)
    assert mgr.node_count(maj) == 4 <= 5
    b6_node = mgr.mk(2, mgr.false, mgr.true)
    built = mgr.mk(0, mgr.mk(1, mgr.false, b6_node), mgr.mk(1, b6_node, mgr.true))
    assert built == maj


def test_apply_identities():
    mgr = BDD(['a', 'b', 'c'])
    a, b, c = (mgr.var(v) for v in mgr.order)
    f = (a & b) | c
    assert mgr.apply(Op.AND, f, mgr.true) == f
    assert mgr.apply('or', f, mgr.negate(f)) == mgr.true
    assert (f & f) == f and (f | f) == f
    assert (f ^ f) == mgr.false
    assert ~~f == f


def test_apply_on_container_seal(seal):
    mgr = BDD(order_heuristic(seal, 'dfs'))
    b = {v: mgr.var(v) for v in mgr.order}
    g2 = b['B1'] & b['B2']
    g4 = (b['B4'] & b['B5']) | (b['B4'] & b['B6']) | (b['B5'] & b['B6'])
    g3 = b['B3'] & g4 & b['B7']
    g1 = g2 | g3
    assert g1 == from_fault_tree(mgr, seal)
    assert mgr.truth_table(g1) == ft_truth_table(seal)


def test_manager_mismatch():
    m1, m2 = BDD(['a']), BDD(['a'])
    with pytest.raises(ManagerMismatch):
        m1.apply(Op.AND, m1.var('a'), m2.var('a'))


def test_ite_matches_formula():
    mgr = BDD(['a', 'b', 'c'])
    a, b, c = (mgr.var(v) for v in mgr.order)
    assert mgr.ite(a, b, c) == (a & b) | (~a & c)


def test_from_fault_tree_and(and2):
    mgr, f = build_bdd(and2)
    assert mgr.node_count(f) == 2


def test_from_fault_tree_seal(seal):
    mgr, f = build_bdd(seal, 'dfs')
    assert mgr.truth_table(f) == ft_truth_table(seal)
    # regression baseline, checked by hand: B1, B2, B3, B4, two B5 nodes
    # (B4=0 needs both of B5,B6; B4=1 needs one), a shared B6, and B7
    assert mgr.node_count(f) == 8
    check_reduced(mgr)


@pytest.mark.parametrize('kind', ['declared', 'dfs', 'bfs'])
def test_seal_all_orders_equivalent(seal, kind):
    mgr, f = build_bdd(seal, kind)
    assert mgr.truth_table(f, seal.basic_events) == ft_truth_table(seal)


def test_from_fault_tree_order_mismatch(seal):
    mgr = BDD(['B1', 'B2'])
    with pytest.raises(OrderMismatch):
        from_fault_tree(mgr, seal)
    mgr = BDD(seal.basic_events)
    with pytest.raises(OrderMismatch):
        from_fault_tree(mgr, seal, order=tuple(reversed(seal.basic_events)))


def test_evaluate_examples(seal, and2):
    mgr = BDD(['B1'])
    assert evaluate_bdd(mgr, mgr.true, {'B1': 0}) == 1
    mgr, f = build_bdd(and2)
    assert evaluate_bdd(mgr, f, {'B1': 1, 'B2': 0}) == 0
    mgr, f = build_bdd(seal)
    a = dict.fromkeys(seal.basic_events, 0) | {'B3': 1, 'B4': 1, 'B6': 1, 'B7': 1}
    assert evaluate_bdd(mgr, f, a) == 1
    with pytest.raises(UniverseMismatch):
        evaluate_bdd(mgr, f, {'B1': 1})


def test_probability_examples(seal, or2):
    mgr = BDD(['x'])
    assert bdd_probability(mgr, mgr.true, {}) == 1.0
    mgr, f = build_bdd(or2)
    p = 1e-3
    assert bdd_probability(mgr, f, {'B1': p, 'B2': p}) == pytest.approx(2 * p - p * p, rel=1e-14)
    mgr, f = build_bdd(seal)
    got = bdd_probability(mgr, f, seal.probabilities)
    assert got == pytest.approx(1.000003e-6, rel=1e-6)
    assert abs(got - probability_bruteforce(ft_truth_table(seal), seal.probabilities)) <= 1e-12
    with pytest.raises(ProbabilityOutOfRange):
        bdd_probability(mgr, f, dict(seal.probabilities, B1=-0.1))


def test_cut_set_examples(and2, or2, seal):
    assert bdd_min_cut_sets(*build_bdd(and2)) == {frozenset({'B1', 'B2'})}
    assert bdd_min_cut_sets(*build_bdd(or2)) == {frozenset({'B1'}), frozenset({'B2'})}
    assert bdd_min_cut_sets(*build_bdd(seal)) == CONTAINER_SEAL_CUT_SETS


def test_raw_path_sets_can_be_non_minimal():
    # a or (b and c) under order (b, c, a): the path b=1, c=1 yields {b, c},
    # but the path b=1, c=0, a=1 yields {a, b}, a superset of {a}
    ft = parse_ft('toplevel T; T or a G; G and b c; a prob=0.1; b prob=0.1; c prob=0.1;')
    mgr = BDD(['b', 'c', 'a'])
    f = from_fault_tree(mgr, ft)
    raw = bdd_path_sets(mgr, f, minimal=False)
    assert frozenset({'a', 'b'}) in raw
    assert bdd_min_cut_sets(mgr, f) == {frozenset({'a'}), frozenset({'b', 'c'})}


def test_cut_sets_reject_negation():
    mgr = BDD(['B1', 'B2'])
    with pytest.raises(NonMonotoneFunction, match='FTs do not support a NOT function'):
        bdd_min_cut_sets(mgr, mgr.var('B1') ^ mgr.var('B2'))


def test_monotone_check_after_negation():
    mgr = BDD(['a', 'b'])
    a, b = mgr.var('a'), mgr.var('b')
    f = ~(~a & ~b)  # a or b, built through negations
    assert not mgr.negation_free
    assert mgr.is_monotone(f)
    assert bdd_min_cut_sets(mgr, f) == {frozenset({'a'}), frozenset({'b'})}
    assert not mgr.is_monotone(~a)


def test_order_heuristics(seal):
    assert order_heuristic(seal, 'dfs') == ('B1', 'B2', 'B3', 'B4', 'B5', 'B6', 'B7')
    assert order_heuristic(seal, 'bfs') == ('B1', 'B2', 'B3', 'B7', 'B4', 'B5', 'B6')
    assert order_heuristic(seal, 'declared') == seal.basic_events
    ft = parse_ft('toplevel G; G and B2 B1; B1 prob=0.5; B2 prob=0.5;')
    assert order_heuristic(ft, 'dfs') == ('B2', 'B1')


def test_dot_round_trip(seal):
    mgr, f = build_bdd(seal)
    dot = mgr.to_dot(f, seal.probabilities)
    assert '[style=dashed]' in dot and '[style=solid]' in dot
    assert 'n1 [shape=square, label="1"];' in dot
    assert 'label="B1"' in dot
    m2, g, probs = read_bdd_dot(dot)
    assert m2.truth_table(g) == mgr.truth_table(f)
    assert probs == seal.probabilities
    assert m2.to_dot(g, probs).count('shape=circle') == 8


def test_dot_reader_rejects_garbage():
    with pytest.raises(ParseError):
        read_bdd_dot('digraph dt {\n}\n')
    with pytest.raises(ParseError):
        read_bdd_dot('digraph bdd {\n  // order: a\n  // root: n2\n  n2 [shape=circle, '
                     'label="a"];\n}\n')


def test_from_truth_table_terminal_and_flags():
    mgr = BDD(['a', 'b'])
    assert mgr.from_truth_table(TruthTable.constant(('a', 'b'), 1)) == mgr.true
    assert mgr.negation_free
    mgr.from_truth_table(TruthTable(('a', 'b'), [0, 1, 1, 0]))
    assert not mgr.negation_free


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(2, 8), st.booleans())
def test_apply_and_table_construction_share_roots(rng, n, shared):
    ft = random_ft(rng, n, shared=shared)
    mgr = BDD(order_heuristic(ft, rng.choice(['declared', 'dfs', 'bfs'])))
    f = from_fault_tree(mgr, ft)
    g = mgr.from_truth_table(ft_truth_table(ft))
    assert f.node == g.node
    check_reduced(mgr)


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(2, 12))
def test_semantic_equivalence_exhaustive(rng, n):
    ft = random_ft(rng, n, shared=True)
    mgr, f = build_bdd(ft, 'bfs')
    t = ft_truth_table(ft)
    assert mgr.truth_table(f, ft.basic_events) == t
    if n <= 8:
        for row in input_matrix(n):
            a = dict(zip(ft.basic_events, row.tolist()))
            assert evaluate_bdd(mgr, f, {v: a[v] for v in mgr.order}) == evaluate_ft(ft, a)


@settings(max_examples=50, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(2, 12))
def test_probability_matches_oracle(rng, n):
    ft = random_ft(rng, n, shared=True)
    mgr, f = build_bdd(ft)
    p = {v: rng.random() for v in ft.basic_events}
    assert abs(bdd_probability(mgr, f, p) - probability_bruteforce(ft_truth_table(ft), p)) <= 1e-12


@settings(max_examples=50, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(2, 10))
def test_cut_sets_match_oracle(rng, n):
    ft = random_ft(rng, n, shared=True)
    mgr, f = build_bdd(ft, 'dfs')
    assert bdd_min_cut_sets(mgr, f) == minimal_cut_sets_bruteforce(ft_truth_table(ft))


def test_all_two_variable_functions_are_canonical():
    mgr = BDD(['a', 'b'])
    a, b = mgr.var('a'), mgr.var('b')
    seen = {}
    for outputs in itertools.product((0, 1), repeat=4):
        f = mgr.from_truth_table(TruthTable(('a', 'b'), outputs))
        assert f.node not in seen
        seen[f.node] = outputs
    assert seen[((a & ~b) | (~a & b)).node] == (0, 1, 1, 0)
    check_reduced(mgr)
