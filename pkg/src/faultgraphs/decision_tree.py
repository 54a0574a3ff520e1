"""Binary classification trees over binary features.

Induction is CART-style: greedy recursive partitioning on the Gini index,
no pruning, ties broken towards the earliest variable in the dataset
universe.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from faultgraphs.boolean_core import (
    Assignment,
    CutSetCollection,
    TruthTable,
    assignment_vector,
    check_size,
    check_universe,
    input_matrix,
    minimize,
)
from faultgraphs.dataset import Dataset
from faultgraphs.dot import parse_dot, prob_comments
from faultgraphs.errors import EmptyDataset, ParseError, UniverseMismatch


@dataclass(frozen=True)
class Leaf:
    label: int


@dataclass(frozen=True)
class Split:
    var: str
    low: int   # node index taken when var = 0
    high: int  # node index taken when var = 1


@dataclass(frozen=True)
class DecisionTree:
    universe: tuple[str, ...]
    nodes: tuple[Leaf | Split, ...]
    root: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'universe', check_universe(self.universe))
        object.__setattr__(self, 'nodes', tuple(self.nodes))
        self._check()

    def _check(self):
        parents = [0] * len(self.nodes)
        known = set(self.universe)

        def visit(i, path):
            if not (0 <= i < len(self.nodes)):
                raise ValueError(f'node index {i} out of range')
            node = self.nodes[i]
            if isinstance(node, Leaf):
                if node.label not in (0, 1):
                    raise ValueError(f'leaf {i} has label {node.label!r}')
                return
            if node.var not in known:
                raise UniverseMismatch(f'{node.var!r} is not in the universe')
            if node.var in path:
                raise ValueError(f'{node.var} is tested twice on one path')
            for child in (node.low, node.high):
                if 0 <= child < len(self.nodes):
                    parents[child] += 1
                    if parents[child] > 1:
                        raise ValueError(f'node {child} has more than one parent')
                visit(child, path | {node.var})

        visit(self.root, frozenset())
        if parents[self.root] or any(p != 1 for i, p in enumerate(parents) if i != self.root):
            raise ValueError('nodes must form a single proper tree')

    @classmethod
    def leaf(cls, universe: Sequence[str], label: int) -> DecisionTree:
        return cls(tuple(universe), (Leaf(label),))

    @property
    def decision_count(self) -> int:
        return sum(isinstance(n, Split) for n in self.nodes)

    def __len__(self):
        return len(self.nodes)

    def depth(self) -> int:
        def rec(i):
            node = self.nodes[i]
            return 0 if isinstance(node, Leaf) else 1 + max(rec(node.low), rec(node.high))
        return rec(self.root)


class _Builder:
    """Appends nodes in preorder so the root lands at index 0."""

    def __init__(self):
        self.nodes: list = []

    def leaf(self, label):
        self.nodes.append(Leaf(int(label)))
        return len(self.nodes) - 1

    def split(self, var, make_low, make_high):
        i = len(self.nodes)
        self.nodes.append(None)
        low = make_low()
        high = make_high()
        self.nodes[i] = Split(var, low, high)
        return i


def gini(zeros: int, ones: int) -> Fraction:
    """``1 - p0^2 - p1^2``, exact so that tie-breaking is reproducible."""
    m = zeros + ones
    return 1 - Fraction(zeros * zeros + ones * ones, m * m)


def gini_decrease(zeros: int, ones: int, children) -> Fraction:
    """Parent impurity minus size-weighted child impurity."""
    m = zeros + ones
    weighted = sum((Fraction(z + o, m) * gini(z, o) for z, o in children if z + o),
                   Fraction(0))
    return gini(zeros, ones) - weighted


def induce_dt(d: Dataset) -> DecisionTree:
    """Grow a tree until every leaf is pure or no variable separates its rows.

    Splits maximise the Gini impurity decrease. When every usable variable
    has zero decrease but the node is still impure (parity-like data), the
    first variable that still separates the rows is used, so exhaustive
    noise-free data is always fitted exactly. Majority ties label a leaf 1.
    """
    if len(d) == 0:
        raise EmptyDataset('cannot induce a tree from an empty dataset')
    X, y = d.X, d.y
    builder = _Builder()

    def grow(rows, used):
        labels = y[rows]
        ones = int(labels.sum())
        zeros = len(rows) - ones
        if ones == 0 or zeros == 0:
            return builder.leaf(1 if ones else 0)
        best = fallback = None
        best_decrease = Fraction(0)
        for j, var in enumerate(d.universe):
            if var in used:
                continue
            on = X[rows, j].astype(bool)
            n_on = int(on.sum())
            if n_on == 0 or n_on == len(rows):
                continue
            if fallback is None:
                fallback = j
            ones_on = int(labels[on].sum())
            ones_off = ones - ones_on
            decrease = gini_decrease(zeros, ones, [(n_on - ones_on, ones_on),
                                                   (len(rows) - n_on - ones_off, ones_off)])
            if decrease > best_decrease:
                best, best_decrease = j, decrease
        if best is None:
            best = fallback
        if best is None:
            return builder.leaf(1 if ones >= zeros else 0)
        on = X[rows, best].astype(bool)
        var = d.universe[best]
        return builder.split(var,
                             lambda: grow(rows[~on], used | {var}),
                             lambda: grow(rows[on], used | {var}))

    grow(np.arange(len(d)), frozenset())
    return DecisionTree(d.universe, tuple(builder.nodes), 0)


def _walk(dt: DecisionTree, value_of) -> int:
    node = dt.nodes[dt.root]
    while isinstance(node, Split):
        node = dt.nodes[node.high if value_of(node.var) else node.low]
    return node.label


def evaluate_dt(dt: DecisionTree, a: Assignment) -> int:
    values = dict(zip(dt.universe, assignment_vector(dt.universe, a)))
    return _walk(dt, values.__getitem__)


def dt_positive_rules(dt: DecisionTree, raw: bool = False) -> CutSetCollection:
    """Variables on their 1-branch along each path to a leaf labelled 1.

    With ``raw=True`` the path sets are returned unminimized.
    """
    sets = set()

    def visit(i, taken):
        node = dt.nodes[i]
        if isinstance(node, Leaf):
            if node.label == 1:
                sets.add(frozenset(taken))
            return
        visit(node.low, taken)
        visit(node.high, taken | {node.var})

    visit(dt.root, frozenset())
    return frozenset(sets) if raw else minimize(sets)


def dt_truth_table(dt: DecisionTree, universe=None) -> TruthTable:
    universe = dt.universe if universe is None else check_universe(universe)
    check_size(len(universe))
    column = {name: j for j, name in enumerate(universe)}
    tested = {n.var for n in dt.nodes if isinstance(n, Split)}
    if not tested <= set(column):
        raise UniverseMismatch(f'universe lacks {sorted(tested - set(column))}')
    bits = input_matrix(len(universe))
    out = np.zeros(bits.shape[0], dtype=np.uint8)

    def fill(i, rows):
        node = dt.nodes[i]
        if isinstance(node, Leaf):
            out[rows] = node.label
            return
        on = bits[rows, column[node.var]].astype(bool)
        fill(node.low, rows[~on])
        fill(node.high, rows[on])

    fill(dt.root, np.arange(bits.shape[0]))
    return TruthTable(universe, out)


def accuracy(dt: DecisionTree, t: TruthTable) -> float:
    """Fraction of rows of `t` on which `dt` agrees."""
    predicted = dt_truth_table(dt, t.universe)
    return float(np.mean(predicted.outputs == t.outputs))


def dt_to_dot(dt: DecisionTree, probs=None) -> str:
    lines = ['digraph dt {',
             f"  // variables: {' '.join(dt.universe)}",
             f'  // root: n{dt.root}']
    lines += prob_comments(dt.universe, probs)
    for i, node in enumerate(dt.nodes):
        if isinstance(node, Leaf):
            lines.append(f'  n{i} [shape=square, label="{node.label}"];')
        else:
            lines.append(f'  n{i} [shape=circle, label="{node.var}"];')
    for i, node in enumerate(dt.nodes):
        if isinstance(node, Split):
            lines.append(f'  n{i} -> n{node.low} [style=dashed];')
            lines.append(f'  n{i} -> n{node.high} [style=solid];')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def read_dt_dot(text: str) -> tuple[DecisionTree, dict[str, float]]:
    graph = parse_dot(text)
    if graph.kind != 'dt' or 'variables' not in graph.meta:
        raise ParseError('not a DT DOT file (need "digraph dt" and "// variables:")')
    builder = _Builder()
    active = set()

    def copy(u):
        if u in active:
            raise ParseError(f'node n{u} lies on a cycle')
        d = graph.decision(u)
        if isinstance(d, int):
            return builder.leaf(d)
        var, low, high = d
        active.add(u)
        i = builder.split(var, lambda: copy(low), lambda: copy(high))
        active.discard(u)
        return i

    copy(graph.root())
    try:
        dt = DecisionTree(tuple(graph.meta['variables'].split()), tuple(builder.nodes))
    except ValueError as exc:
        raise ParseError(f'invalid decision tree: {exc}') from None
    return dt, graph.probs
