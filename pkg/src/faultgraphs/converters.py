"""Conversions among fault trees, decision trees and BDDs.

Every arrow preserves the Boolean function. `convert` wraps the individual
arrows and attaches a `ConversionReport` with node counts and an exhaustive
equivalence check when the joint universe is small enough.
"""
from __future__ import annotations

from collections import deque
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from faultgraphs.bdd import (
    BDD,
    BddRef,
    FALSE,
    TRUE,
    OrderKind,
    bdd_min_cut_sets,
    from_fault_tree,
    order_heuristic,
)
from faultgraphs.boolean_core import (
    MAX_VARIABLES,
    CutSetCollection,
    check_probabilities,
    check_size,
    is_monotone,
    minimize,
    sorted_cut_sets,
)
from faultgraphs.dataset import Dataset
from faultgraphs.decision_tree import (
    DecisionTree,
    Leaf,
    Split,
    _Builder,
    dt_positive_rules,
    dt_truth_table,
    induce_dt,
)
from faultgraphs.errors import (
    EmptyCutSets,
    NonMonotoneFunction,
    OrderMismatch,
    TooManyVariables,
    TrivialFunction,
    UnsupportedArrow,
)
from faultgraphs.fault_tree import (
    BasicEvent,
    FaultTree,
    Gate,
    GateKind,
    ft_truth_table,
    sample_dataset,
)

EXACT_INDUCTION_LIMIT = 16
KINDS = ('ft', 'bdd', 'dt')


@dataclass
class ConversionReport:
    source: str
    target: str
    method: str
    source_nodes: int
    target_nodes: int
    equivalence: str = 'skipped'  # pass | fail | skipped
    extra: dict = field(default_factory=dict)

    def to_text(self) -> str:
        items = [('source', self.source), ('target', self.target),
                 ('method', self.method), ('source_nodes', self.source_nodes),
                 ('target_nodes', self.target_nodes),
                 ('node_reduction', self.source_nodes - self.target_nodes),
                 ('equivalence', self.equivalence)]
        items += sorted(self.extra.items())
        return ''.join(f'{k}={v}\n' for k, v in items)


# ---------------------------------------------------------------------------
# model helpers


def universe_of(model) -> tuple[str, ...]:
    if isinstance(model, FaultTree):
        return model.basic_events
    if isinstance(model, BddRef):
        return model.manager.order
    if isinstance(model, DecisionTree):
        return model.universe
    raise TypeError(f'not a model: {model!r}')


def size_of(model) -> int:
    """Total node count: FT nodes, BDD nodes incl. terminals, DT nodes incl. leaves."""
    if isinstance(model, FaultTree):
        return len(model.nodes)
    if isinstance(model, BddRef):
        mgr = model.manager
        inner = mgr.reachable(model)
        terminals = {w for u in inner for w in (mgr._low[u], mgr._high[u]) if w <= TRUE}
        if model.is_terminal:
            terminals.add(model.node)
        return len(inner) + len(terminals)
    if isinstance(model, DecisionTree):
        return len(model)
    raise TypeError(f'not a model: {model!r}')


def truth_table_of(model, universe):
    if isinstance(model, FaultTree):
        return ft_truth_table(model, universe)
    if isinstance(model, BddRef):
        return model.manager.truth_table(model, universe)
    return dt_truth_table(model, universe)


def check_equivalence(a, b, limit: int = MAX_VARIABLES) -> str:
    """'pass' only if the models agree on every assignment of the joint universe."""
    universe = tuple(dict.fromkeys(universe_of(a) + universe_of(b)))
    if len(universe) > limit:
        return 'skipped'
    return 'pass' if truth_table_of(a, universe) == truth_table_of(b, universe) else 'fail'


def dt_variable_order(dt: DecisionTree, kind: OrderKind | str = OrderKind.DFS) -> tuple[str, ...]:
    """First-visit order of tested variables, then the untested ones."""
    kind = OrderKind(kind)
    if kind is OrderKind.DECLARED:
        return dt.universe
    seen = {}
    if kind is OrderKind.DFS:
        stack = [dt.root]
        while stack:
            node = dt.nodes[stack.pop()]
            if isinstance(node, Split):
                seen.setdefault(node.var, None)
                stack.extend((node.high, node.low))
    else:
        queue = deque([dt.root])
        while queue:
            node = dt.nodes[queue.popleft()]
            if isinstance(node, Split):
                seen.setdefault(node.var, None)
                queue.extend((node.low, node.high))
    return tuple(seen) + tuple(v for v in dt.universe if v not in seen)


# ---------------------------------------------------------------------------
# the six arrows


def ft_to_bdd(ft: FaultTree, order_kind: OrderKind | str = OrderKind.DFS,
              mgr: BDD | None = None) -> tuple[BddRef, ConversionReport]:
    if mgr is None:
        mgr = BDD(order_heuristic(ft, order_kind))
    f = from_fault_tree(mgr, ft)
    report = ConversionReport('ft', 'bdd', 'shannon-apply', size_of(ft), size_of(f),
                              check_equivalence(ft, f),
                              {'order': ' '.join(mgr.order)})
    return f, report


def bdd_to_dt(mgr: BDD, f: BddRef) -> DecisionTree:
    """Unfold shared nodes until every node has a single parent."""
    check_size(len(mgr.order))
    mgr._own(f)
    builder = _Builder()

    def unfold(u):
        if u <= TRUE:
            return builder.leaf(u)
        var = mgr.order[mgr._levels[u]]
        return builder.split(var, lambda: unfold(mgr._low[u]), lambda: unfold(mgr._high[u]))

    unfold(f.node)
    return DecisionTree(mgr.order, tuple(builder.nodes))


def dt_to_bdd(mgr: BDD, dt: DecisionTree, order: Sequence[str] | None = None) -> BddRef:
    """Collapse a DT into the manager's ROBDD.

    Where a split's variable precedes everything below it the node is
    hash-consed directly (merging isomorphic subtrees, dropping redundant
    tests); otherwise it is composed with if-then-else, which handles trees
    whose paths test variables in different orders.
    """
    if order is not None and tuple(order) != mgr.order:
        raise OrderMismatch('requested order differs from the manager order')
    tested = {n.var for n in dt.nodes if isinstance(n, Split)}
    missing = tested - set(mgr.order)
    if missing:
        raise OrderMismatch(f'order lacks tested variables {sorted(missing)}')
    start = len(mgr)
    memo = {}

    def collapse(i):
        if i in memo:
            return memo[i]
        node = dt.nodes[i]
        if isinstance(node, Leaf):
            r = TRUE if node.label else FALSE
        else:
            low, high = collapse(node.low), collapse(node.high)
            level = mgr.level_of[node.var]
            if level < mgr._levels[low] and level < mgr._levels[high]:
                r = mgr._mk(level, low, high)
            else:
                r = mgr._ite(mgr._mk(level, FALSE, TRUE), high, low)
        memo[i] = r
        return r

    r = collapse(dt.root)
    mgr._track_new_nodes(start)
    return BddRef(mgr, r)


def _fresh(name: str, taken: set) -> str:
    while name in taken:
        name += '_'
    return name


def cutsets_to_ft(c: CutSetCollection, probs: Mapping[str, float]) -> FaultTree:
    """DNF fault tree: an OR over one AND per minimal cut set.

    Singleton sets feed the OR directly; a single set becomes the top gate
    itself, and a single singleton makes the basic event the top.
    """
    sets = sorted_cut_sets(minimize(c))
    if not sets:
        raise EmptyCutSets('no cut sets: the function is constant 0')
    if sets == [()]:
        raise TrivialFunction('the empty cut set makes the function constant 1')
    members = tuple(sorted({v for s in sets for v in s}))
    check_probabilities(members, probs)
    events = {v: BasicEvent(v, float(probs[v])) for v in members}
    taken = set(members)
    top = _fresh('TOP', taken)
    if len(sets) == 1 and len(sets[0]) == 1:
        return FaultTree(events, sets[0][0])
    if len(sets) == 1:
        return FaultTree({top: Gate(top, GateKind.AND, sets[0]), **events}, top)
    gates = {}
    children = []
    for s in sets:
        if len(s) == 1:
            children.append(s[0])
            continue
        name = _fresh(f'CS{len(gates) + 1}', taken | {top})
        gates[name] = Gate(name, GateKind.AND, s)
        children.append(name)
    nodes = {top: Gate(top, GateKind.OR, tuple(children)), **gates, **events}
    return FaultTree(nodes, top)


def bdd_to_ft(mgr: BDD, f: BddRef, probs: Mapping[str, float]) -> FaultTree:
    return cutsets_to_ft(bdd_min_cut_sets(mgr, f), probs)


def dt_to_ft(dt: DecisionTree, probs: Mapping[str, float]) -> FaultTree:
    if len(dt.universe) > MAX_VARIABLES:
        raise TooManyVariables(
            f'monotonicity check needs <= {MAX_VARIABLES} variables')
    if not is_monotone(dt_truth_table(dt)):
        raise NonMonotoneFunction('decision tree encodes a non-monotone function')
    return cutsets_to_ft(dt_positive_rules(dt), probs)


def ft_to_dt(ft: FaultTree, mode: str = 'exact', n: int = 1000, p: float = 0.5,
             seed: int | None = None) -> DecisionTree:
    """Induce a DT from the FT's exhaustive table or from a Monte Carlo sample."""
    if mode == 'exact':
        if len(ft.basic_events) > EXACT_INDUCTION_LIMIT:
            raise TooManyVariables(
                f'exact induction is limited to {EXACT_INDUCTION_LIMIT} basic events')
        return induce_dt(Dataset.from_truth_table(ft_truth_table(ft)))
    if mode == 'sampled':
        if seed is None:
            raise ValueError('sampled induction requires a seed')
        return induce_dt(sample_dataset(ft, n, p, seed))
    raise ValueError(f'unknown induction mode {mode!r}')


# ---------------------------------------------------------------------------
# dispatcher


def convert(model, source: str, target: str, *,
            order: OrderKind | str = OrderKind.DFS,
            mode: str = 'exact', n: int = 1000, p: float = 0.5, seed: int | None = None,
            probs: Mapping[str, float] | None = None):
    """Run one arrow and return ``(result, report)``."""
    arrow = (source, target)
    extra = {}
    if arrow == ('ft', 'bdd'):
        return ft_to_bdd(model, order)
    if arrow == ('bdd', 'dt'):
        result, method = bdd_to_dt(model.manager, model), 'unfold'
    elif arrow == ('dt', 'bdd'):
        mgr = BDD(dt_variable_order(model, order))
        result, method = dt_to_bdd(mgr, model), 'collapse'
        extra['order'] = ' '.join(mgr.order)
    elif arrow == ('bdd', 'ft'):
        result, method = bdd_to_ft(model.manager, model, _need_probs(probs)), 'cutsets-dnf'
    elif arrow == ('dt', 'ft'):
        result, method = dt_to_ft(model, _need_probs(probs)), 'rules-dnf'
    elif arrow == ('ft', 'dt'):
        result = ft_to_dt(model, mode, n, p, seed)
        if mode == 'exact':
            method = 'exhaustive-cart'
        else:
            method = 'monte-carlo-cart'
            extra.update(n=n, p=repr(p), seed=seed)
    else:
        raise UnsupportedArrow(f'no conversion {source} -> {target}')
    report = ConversionReport(source, target, method, size_of(model), size_of(result),
                              check_equivalence(model, result), extra)
    return result, report


def _need_probs(probs):
    if probs is None:
        raise ValueError('basic-event probabilities are required to build a fault tree')
    return probs
