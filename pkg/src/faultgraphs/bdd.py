"""Reduced ordered binary decision diagrams.

A `BDD` manager owns a fixed variable order and a unique table mapping
``(level, low, high)`` to node ids, so every Boolean function has exactly one
node id per manager. Node ids 0 and 1 are the terminals; their level is
``len(order)``. The high (solid) edge is taken when the variable is 1, the
low (dashed) edge when it is 0.

Functions are handed out as `BddRef` values, which support ``&``, ``|``,
``^`` and ``~``.
"""
from __future__ import annotations

import enum
from collections import deque
from collections.abc import Mapping, Sequence

import numpy as np

from faultgraphs.boolean_core import (
    Assignment,
    CutSetCollection,
    TruthTable,
    assignment_vector,
    check_probabilities,
    check_size,
    check_universe,
    input_matrix,
    minimize,
)
from faultgraphs.dot import parse_dot, prob_comments
from faultgraphs.errors import (
    ManagerMismatch,
    NonMonotoneFunction,
    OrderMismatch,
    OrderViolation,
    ParseError,
    UniverseMismatch,
)
from faultgraphs.fault_tree import BasicEvent, FaultTree, GateKind

FALSE = 0
TRUE = 1


class Op(enum.Enum):
    AND = 'and'
    OR = 'or'
    XOR = 'xor'


class BddRef:
    """Handle to a node of a `BDD` manager."""

    __slots__ = ('manager', 'node')

    def __init__(self, manager: BDD, node: int):
        self.manager = manager
        self.node = node

    def __eq__(self, other):
        if not isinstance(other, BddRef):
            return NotImplemented
        return self.manager is other.manager and self.node == other.node

    def __hash__(self):
        return hash((id(self.manager), self.node))

    def __repr__(self):
        if self.is_terminal:
            return f'BddRef({self.node})'
        return f'BddRef({self.node}, var={self.var!r})'

    def __and__(self, other):
        return self.manager.apply(Op.AND, self, other)

    def __or__(self, other):
        return self.manager.apply(Op.OR, self, other)

    def __xor__(self, other):
        return self.manager.apply(Op.XOR, self, other)

    def __invert__(self):
        return self.manager.negate(self)

    @property
    def is_terminal(self) -> bool:
        return self.node in (FALSE, TRUE)

    @property
    def level(self) -> int:
        return self.manager._levels[self.node]

    @property
    def var(self) -> str | None:
        return None if self.is_terminal else self.manager.order[self.level]

    @property
    def low(self) -> BddRef:
        return BddRef(self.manager, self.manager._low[self.node])

    @property
    def high(self) -> BddRef:
        return BddRef(self.manager, self.manager._high[self.node])


class BDD:
    """Shared ROBDD manager over a fixed variable order.

    Single writer: `mk`, `apply`, `negate` and `ite` mutate the tables.
    No garbage collection; managers are meant to live for one analysis.
    """

    def __init__(self, order: Sequence[str]):
        self.order = check_universe(order)
        self.level_of = {name: i for i, name in enumerate(self.order)}
        n = len(self.order)
        # node id -> level / low / high; ids 0 and 1 are the terminals
        self._levels = [n, n]
        self._low = [None, None]
        self._high = [None, None]
        # (level, low, high) -> node id
        self._unique: dict[tuple[int, int, int], int] = {}
        # (op, u, v) -> node id, with u <= v for the commutative ops
        self._apply_cache: dict[tuple[Op, int, int], int] = {}
        self._not_cache: dict[int, int] = {}
        self._ite_cache: dict[tuple[int, int, int], int] = {}
        # stays True while every node came from AND/OR over variables,
        # which lets `is_monotone` skip the structural check
        self.negation_free = True

    def __len__(self):
        """Number of nodes allocated, terminals included."""
        return len(self._levels)

    def __repr__(self):
        return f'BDD(order={list(self.order)}, nodes={len(self)})'

    # -- references ---------------------------------------------------------

    @property
    def false(self) -> BddRef:
        return BddRef(self, FALSE)

    @property
    def true(self) -> BddRef:
        return BddRef(self, TRUE)

    def var(self, name: str) -> BddRef:
        if name not in self.level_of:
            raise UniverseMismatch(f'{name!r} is not in the variable order')
        return BddRef(self, self._mk(self.level_of[name], FALSE, TRUE))

    def _own(self, f: BddRef) -> int:
        if not isinstance(f, BddRef) or f.manager is not self:
            raise ManagerMismatch('operand belongs to a different manager')
        return f.node

    # -- node construction --------------------------------------------------

    def _mk(self, level: int, low: int, high: int) -> int:
        if low == high:
            return low
        key = (level, low, high)
        node = self._unique.get(key)
        if node is None:
            node = len(self._levels)
            self._levels.append(level)
            self._low.append(low)
            self._high.append(high)
            self._unique[key] = node
        return node

    def mk(self, level: int, low: BddRef, high: BddRef) -> BddRef:
        """Hash-consed node testing `order[level]`; reduces ``low == high``."""
        lo, hi = self._own(low), self._own(high)
        if not (0 <= level < len(self.order)):
            raise OrderViolation(f'level {level} outside 0..{len(self.order) - 1}')
        if level >= self._levels[lo] or level >= self._levels[hi]:
            raise OrderViolation(
                f'level {level} must be above both children '
                f'(levels {self._levels[lo]}, {self._levels[hi]})')
        if not self._implies(lo, hi):
            self.negation_free = False
        return BddRef(self, self._mk(level, lo, hi))

    def _cofactors(self, u: int, level: int) -> tuple[int, int]:
        if self._levels[u] == level:
            return self._low[u], self._high[u]
        return u, u

    # -- Boolean algebra ----------------------------------------------------

    def apply(self, op: Op | str, f: BddRef, g: BddRef) -> BddRef:
        op = Op(op)
        u, v = self._own(f), self._own(g)
        if op is Op.XOR:
            self.negation_free = False
        return BddRef(self, self._apply(op, u, v))

    def _apply(self, op: Op, u: int, v: int) -> int:
        if op is Op.AND:
            if u == FALSE or v == FALSE:
                return FALSE
            if u == TRUE or u == v:
                return v
            if v == TRUE:
                return u
        elif op is Op.OR:
            if u == TRUE or v == TRUE:
                return TRUE
            if u == FALSE or u == v:
                return v
            if v == FALSE:
                return u
        else:
            if u == v:
                return FALSE
            if u == FALSE:
                return v
            if v == FALSE:
                return u
            if u == TRUE:
                return self._negate(v)
            if v == TRUE:
                return self._negate(u)
        if u > v:
            u, v = v, u
        key = (op, u, v)
        r = self._apply_cache.get(key)
        if r is not None:
            return r
        level = min(self._levels[u], self._levels[v])
        u0, u1 = self._cofactors(u, level)
        v0, v1 = self._cofactors(v, level)
        r = self._mk(level, self._apply(op, u0, v0), self._apply(op, u1, v1))
        self._apply_cache[key] = r
        return r

    def negate(self, f: BddRef) -> BddRef:
        u = self._own(f)
        self.negation_free = False
        return BddRef(self, self._negate(u))

    def _negate(self, u: int) -> int:
        if u <= TRUE:
            return 1 - u
        r = self._not_cache.get(u)
        if r is None:
            r = self._mk(self._levels[u], self._negate(self._low[u]),
                         self._negate(self._high[u]))
            self._not_cache[u] = r
        return r

    def ite(self, f: BddRef, g: BddRef, h: BddRef) -> BddRef:
        """If-then-else: ``(f and g) or (not f and h)``."""
        u, v, w = self._own(f), self._own(g), self._own(h)
        self.negation_free = False
        return BddRef(self, self._ite(u, v, w))

    def _ite(self, f: int, g: int, h: int) -> int:
        if f == TRUE or g == h:
            return g
        if f == FALSE:
            return h
        if g == TRUE and h == FALSE:
            return f
        key = (f, g, h)
        r = self._ite_cache.get(key)
        if r is not None:
            return r
        level = min(self._levels[f], self._levels[g], self._levels[h])
        f0, f1 = self._cofactors(f, level)
        g0, g1 = self._cofactors(g, level)
        h0, h1 = self._cofactors(h, level)
        r = self._mk(level, self._ite(f0, g0, h0), self._ite(f1, g1, h1))
        self._ite_cache[key] = r
        return r

    def _implies(self, u: int, v: int, memo=None) -> bool:
        """Whether ``u <= v`` pointwise; allocates no nodes."""
        if u == FALSE or v == TRUE or u == v:
            return True
        if u == TRUE or v == FALSE:
            return False
        if memo is None:
            memo = {}
        key = (u, v)
        if key not in memo:
            level = min(self._levels[u], self._levels[v])
            u0, u1 = self._cofactors(u, level)
            v0, v1 = self._cofactors(v, level)
            memo[key] = (self._implies(u0, v0, memo)
                         and self._implies(u1, v1, memo))
        return memo[key]

    # -- construction from other representations ----------------------------

    def from_truth_table(self, t: TruthTable) -> BddRef:
        """Direct Shannon expansion of an exhaustive table.

        The table is lifted to this manager's order first, so each split on
        variable ``order[level]`` halves the current slice.
        """
        t = t.lift(self.order)
        outputs = t.outputs

        def build(level, lo, hi):
            chunk = outputs[lo:hi]
            if not chunk.any():
                return FALSE
            if chunk.all():
                return TRUE
            mid = (lo + hi) // 2
            return self._mk(level, build(level + 1, lo, mid), build(level + 1, mid, hi))

        start = len(self)
        node = build(0, 0, len(outputs))
        self._track_new_nodes(start)
        return BddRef(self, node)

    def _track_new_nodes(self, start: int) -> None:
        """Clear `negation_free` if any node allocated since `start` is non-monotone."""
        if not self.negation_free:
            return
        memo = {}
        for u in range(max(start, 2), len(self)):
            if not self._implies(self._low[u], self._high[u], memo):
                self.negation_free = False
                return

    # -- inspection ---------------------------------------------------------

    def reachable(self, f: BddRef) -> list[int]:
        """Non-terminal node ids below `f`, sorted by (level, id)."""
        seen = set()
        stack = [self._own(f)]
        while stack:
            u = stack.pop()
            if u <= TRUE or u in seen:
                continue
            seen.add(u)
            stack.append(self._low[u])
            stack.append(self._high[u])
        return sorted(seen, key=lambda u: (self._levels[u], u))

    def node_count(self, f: BddRef) -> int:
        """Non-terminal nodes reachable from `f`."""
        return len(self.reachable(f))

    def support(self, f: BddRef) -> tuple[str, ...]:
        levels = sorted({self._levels[u] for u in self.reachable(f)})
        return tuple(self.order[level] for level in levels)

    def is_monotone(self, f: BddRef) -> bool:
        u = self._own(f)
        return self.negation_free or self._is_monotone(u)

    def _is_monotone(self, u: int) -> bool:
        # monotone iff low <= high at every reachable node
        memo = {}
        return all(self._implies(self._low[w], self._high[w], memo)
                   for w in self.reachable(BddRef(self, u)))

    def truth_table(self, f: BddRef, universe=None) -> TruthTable:
        """Exhaustive table of `f` over `universe` (defaults to the order).

        `universe` may omit variables that `f` does not depend on.
        """
        universe = self.order if universe is None else check_universe(universe)
        check_size(len(universe))
        u = self._own(f)
        missing = set(self.support(f)) - set(universe)
        if missing:
            raise UniverseMismatch(f'universe lacks support variables {sorted(missing)}')
        column = {name: j for j, name in enumerate(universe)}
        bits = input_matrix(len(universe))
        out = np.zeros(bits.shape[0], dtype=np.uint8)

        def fill(u, rows):
            if rows.size == 0:
                return
            if u <= TRUE:
                out[rows] = u
                return
            on = bits[rows, column[self.order[self._levels[u]]]].astype(bool)
            fill(self._low[u], rows[~on])
            fill(self._high[u], rows[on])

        fill(u, np.arange(bits.shape[0]))
        return TruthTable(universe, out)

    def _walk(self, u: int, value_of) -> int:
        while u > TRUE:
            name = self.order[self._levels[u]]
            u = self._high[u] if value_of(name) else self._low[u]
        return u

    def to_dot(self, f: BddRef, probs: Mapping[str, float] | None = None) -> str:
        root = self._own(f)
        lines = ['digraph bdd {',
                 f"  // order: {' '.join(self.order)}",
                 f'  // root: n{root}']
        lines += prob_comments(self.order, probs)
        nodes = self.reachable(f)
        terminals = sorted({w for u in nodes for w in (self._low[u], self._high[u])
                            if w <= TRUE} | ({root} if root <= TRUE else set()))
        for u in nodes:
            lines.append(f'  n{u} [shape=circle, label="{self.order[self._levels[u]]}"];')
        for t in terminals:
            lines.append(f'  n{t} [shape=square, label="{t}"];')
        for u in nodes:
            lines.append(f'  n{u} -> n{self._low[u]} [style=dashed];')
            lines.append(f'  n{u} -> n{self._high[u]} [style=solid];')
        lines.append('}')
        return '\n'.join(lines) + '\n'


def read_bdd_dot(text: str) -> tuple[BDD, BddRef, dict[str, float]]:
    """Rebuild a BDD written by `BDD.to_dot` in a fresh manager."""
    graph = parse_dot(text)
    if graph.kind != 'bdd' or 'order' not in graph.meta:
        raise ParseError('not a BDD DOT file (need "digraph bdd" and "// order:")')
    mgr = BDD(graph.meta['order'].split())
    built = {}

    def build(u):
        if u not in built:
            d = graph.decision(u)
            if isinstance(d, int):
                built[u] = BddRef(mgr, d)
            else:
                name, low, high = d
                if name not in mgr.level_of:
                    raise ParseError(f'node n{u} tests unknown variable {name!r}')
                built[u] = mgr.mk(mgr.level_of[name], build(low), build(high))
        return built[u]

    f = build(graph.root())
    mgr.negation_free = mgr._is_monotone(f.node)
    return mgr, f, graph.probs


# ---------------------------------------------------------------------------
# fault trees


class OrderKind(enum.Enum):
    DECLARED = 'declared'
    DFS = 'dfs'
    BFS = 'bfs'


def order_heuristic(ft: FaultTree, kind: OrderKind | str = OrderKind.DFS) -> tuple[str, ...]:
    """Variable order from the FT structure, children visited left to right."""
    kind = OrderKind(kind)
    if kind is OrderKind.DECLARED:
        return ft.basic_events
    order = []
    seen = set()
    if kind is OrderKind.DFS:
        def visit(name):
            if name in seen:
                return
            seen.add(name)
            node = ft.nodes[name]
            if isinstance(node, BasicEvent):
                order.append(name)
            else:
                for child in node.children:
                    visit(child)
        visit(ft.top)
    else:
        queue = deque([ft.top])
        seen.add(ft.top)
        while queue:
            name = queue.popleft()
            node = ft.nodes[name]
            if isinstance(node, BasicEvent):
                order.append(name)
                continue
            for child in node.children:
                if child not in seen:
                    seen.add(child)
                    queue.append(child)
    return tuple(order)


def from_fault_tree(mgr: BDD, ft: FaultTree, order: Sequence[str] | None = None) -> BddRef:
    """ROBDD of the top event, built by apply over the gates.

    AND/OR fold their children; a k-of-N gate uses
    ``atleast(k, [x, *rest]) = (x and atleast(k-1, rest)) or atleast(k, rest)``,
    which equals the if-then-else form because ``atleast`` is monotone in k.
    """
    if order is not None and tuple(order) != mgr.order:
        raise OrderMismatch('requested order differs from the manager order')
    missing = set(ft.basic_events) - set(mgr.order)
    if missing:
        raise OrderMismatch(f'order lacks basic events {sorted(missing)}')
    built: dict[str, int] = {}

    def node(name):
        if name in built:
            return built[name]
        gate = ft.nodes[name]
        if isinstance(gate, BasicEvent):
            r = mgr._mk(mgr.level_of[name], FALSE, TRUE)
        else:
            kids = [node(c) for c in gate.children]
            if gate.kind is GateKind.AND:
                r = TRUE
                for c in kids:
                    r = mgr._apply(Op.AND, r, c)
            elif gate.kind is GateKind.OR:
                r = FALSE
                for c in kids:
                    r = mgr._apply(Op.OR, r, c)
            else:
                r = _at_least(mgr, gate.k, kids)
        built[name] = r
        return r

    return BddRef(mgr, node(ft.top))


def _at_least(mgr: BDD, k: int, kids: list[int]) -> int:
    memo = {}

    def rec(k, i):
        if k <= 0:
            return TRUE
        if len(kids) - i < k:
            return FALSE
        key = (k, i)
        if key not in memo:
            with_x = mgr._apply(Op.AND, kids[i], rec(k - 1, i + 1))
            memo[key] = mgr._apply(Op.OR, with_x, rec(k, i + 1))
        return memo[key]

    return rec(k, 0)


def build_bdd(ft: FaultTree, kind: OrderKind | str = OrderKind.DFS) -> tuple[BDD, BddRef]:
    mgr = BDD(order_heuristic(ft, kind))
    return mgr, from_fault_tree(mgr, ft)


# ---------------------------------------------------------------------------
# analyses


def evaluate_bdd(mgr: BDD, f: BddRef, a: Assignment) -> int:
    """Follow the solid edge where the variable is 1, the dashed edge where 0."""
    values = dict(zip(mgr.order, assignment_vector(mgr.order, a)))
    return mgr._walk(mgr._own(f), values.__getitem__)


def bdd_probability(mgr: BDD, f: BddRef, p: Mapping[str, float]) -> float:
    """``P(node) = p(v) P(high) + (1 - p(v)) P(low)``, memoized per node."""
    check_probabilities(mgr.support(f), p)
    memo = {FALSE: 0.0, TRUE: 1.0}
    for u in reversed(mgr.reachable(f)):
        pv = float(p[mgr.order[mgr._levels[u]]])
        memo[u] = pv * memo[mgr._high[u]] + (1.0 - pv) * memo[mgr._low[u]]
    return memo[mgr._own(f)]


def bdd_path_sets(mgr: BDD, f: BddRef, minimal: bool = True) -> CutSetCollection:
    """Variables taken on their 1-edge along every root-to-1 path."""
    memo = {FALSE: frozenset(), TRUE: frozenset([frozenset()])}
    for u in reversed(mgr.reachable(f)):
        v = mgr.order[mgr._levels[u]]
        sets = memo[mgr._low[u]] | {s | {v} for s in memo[mgr._high[u]]}
        memo[u] = minimize(sets) if minimal else frozenset(sets)
    return memo[mgr._own(f)]


def bdd_min_cut_sets(mgr: BDD, f: BddRef) -> CutSetCollection:
    if not mgr.is_monotone(f):
        raise NonMonotoneFunction('BDD encodes a non-monotone function')
    return bdd_path_sets(mgr, f, minimal=True)
