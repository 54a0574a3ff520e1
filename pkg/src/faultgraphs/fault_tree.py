"""Static fault trees: model, text format, evaluation, and gate-formula analysis.

Text format (Galileo-like, ``;``-terminated, ``#`` starts a comment)::

    toplevel G1;
    G1 or G2 G3;
    G4 2of3 B4 B5 B6;
    B1 prob=1e-3;
"""
from __future__ import annotations

import enum
import re
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from faultgraphs.boolean_core import (
    Assignment,
    TruthTable,
    assignment_vector,
    check_size,
    check_universe,
    input_matrix,
)
from faultgraphs.dataset import Dataset
from faultgraphs.errors import (
    BadArity,
    CycleDetected,
    DuplicateDefinition,
    FtSyntaxError,
    MissingTop,
    ProbabilityOutOfRange,
    SharedEventError,
    UnreachableNode,
    UnresolvedReference,
    UniverseMismatch,
)


class GateKind(enum.Enum):
    AND = 'and'
    OR = 'or'
    VOT = 'vot'


@dataclass(frozen=True)
class BasicEvent:
    name: str
    prob: float


@dataclass(frozen=True)
class Gate:
    name: str
    kind: GateKind
    children: tuple[str, ...]
    k: int | None = None  # threshold, VOT only

    @property
    def threshold(self) -> int:
        if self.kind is GateKind.AND:
            return len(self.children)
        if self.kind is GateKind.OR:
            return 1
        return self.k


@dataclass(frozen=True)
class FaultTree:
    """Validated DAG of gates over basic events.

    `nodes` keeps declaration order, which drives the DECLARED variable
    order and rendering.
    """

    nodes: Mapping[str, BasicEvent | Gate]
    top: str

    def __post_init__(self):
        object.__setattr__(self, 'nodes', dict(self.nodes))
        _validate(self)

    @property
    def basic_events(self) -> tuple[str, ...]:
        return tuple(n for n, node in self.nodes.items() if isinstance(node, BasicEvent))

    @property
    def gates(self) -> tuple[str, ...]:
        return tuple(n for n, node in self.nodes.items() if isinstance(node, Gate))

    @property
    def probabilities(self) -> dict[str, float]:
        return {n: self.nodes[n].prob for n in self.basic_events}

    def parents(self) -> dict[str, list[str]]:
        result = {name: [] for name in self.nodes}
        for node in self.nodes.values():
            if isinstance(node, Gate):
                for child in node.children:
                    result[child].append(node.name)
        return result

    def is_tree_shaped(self) -> bool:
        return all(len(p) <= 1 for p in self.parents().values())

    def structure(self) -> list:
        """Order-sensitive structural fingerprint."""
        return [(name, node) for name, node in self.nodes.items()] + [self.top]


def _validate(ft: FaultTree) -> None:
    if not ft.top:
        raise MissingTop('no toplevel statement')
    if ft.top not in ft.nodes:
        raise UnresolvedReference(f'top event {ft.top!r} is not defined')
    for name, node in ft.nodes.items():
        if name != node.name:
            raise ValueError(f'node stored under {name!r} is named {node.name!r}')
        if isinstance(node, BasicEvent):
            if not (0.0 <= node.prob <= 1.0):
                raise ProbabilityOutOfRange(f'{name}: prob={node.prob!r} not in [0, 1]')
            continue
        for child in node.children:
            if child not in ft.nodes:
                raise UnresolvedReference(f'{name} refers to undefined {child!r}')
        if len(set(node.children)) != len(node.children):
            raise DuplicateDefinition(f'{name} lists a child more than once')
        if len(node.children) < 2:
            raise BadArity(f'{name} needs at least 2 children')
        if node.kind is GateKind.VOT:
            if node.k is None or not (1 <= node.k <= len(node.children)):
                raise BadArity(f'{name}: threshold {node.k} outside 1..{len(node.children)}')
        elif node.k is not None:
            raise BadArity(f'{name}: only voting gates take a threshold')

    # three-colour DFS
    state = dict.fromkeys(ft.nodes, 0)

    def visit(name, path):
        state[name] = 1
        node = ft.nodes[name]
        if isinstance(node, Gate):
            for child in node.children:
                if state[child] == 1:
                    cycle = path[path.index(child):] + [child]
                    raise CycleDetected('cycle ' + ' -> '.join(cycle))
                if state[child] == 0:
                    visit(child, path + [child])
        state[name] = 2

    for name in ft.nodes:
        if state[name] == 0:
            visit(name, [name])

    reachable = set()
    stack = [ft.top]
    while stack:
        name = stack.pop()
        if name in reachable:
            continue
        reachable.add(name)
        node = ft.nodes[name]
        if isinstance(node, Gate):
            stack.extend(node.children)
    unreachable = [n for n in ft.nodes if n not in reachable]
    if unreachable:
        raise UnreachableNode(f'not reachable from {ft.top}: {unreachable}')


# ---------------------------------------------------------------------------
# text format

KEYWORDS = {'toplevel', 'and', 'or', 'prob'}

_TOKEN = re.compile(r'''
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<vot>(?P<k>\d+)\s*of\s*(?P<n>\d+))(?![A-Za-z0-9_.])
  | (?P<number>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?![A-Za-z0-9_])
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[;=])
''', re.VERBOSE)


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    col: int
    value: object = None


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = line_start = 0
    line = 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise FtSyntaxError(f'unexpected character {text[pos]!r}', line, col)
        kind = 'vot' if m.group('vot') is not None else m.lastgroup
        if kind == 'vot':
            tokens.append(_Token('vot', m.group(0), line, col,
                                 (int(m.group('k')), int(m.group('n')))))
        elif kind not in ('ws', 'comment'):
            tokens.append(_Token(kind, m.group(0), line, col))
        newlines = m.group(0).count('\n')
        if newlines:
            line += newlines
            line_start = m.start() + m.group(0).rindex('\n') + 1
        pos = m.end()
    return tokens


def _split_statements(tokens):
    statement = []
    for tok in tokens:
        if tok.kind == 'punct' and tok.text == ';':
            if not statement:
                raise FtSyntaxError('empty statement', tok.line, tok.col)
            yield statement
            statement = []
        else:
            statement.append(tok)
    if statement:
        last = statement[-1]
        raise FtSyntaxError("missing ';'", last.line, last.col + len(last.text))


def _expect_name(tok):
    if tok.kind != 'name' or tok.text in KEYWORDS:
        raise FtSyntaxError(f'expected a name, got {tok.text!r}', tok.line, tok.col)
    return tok.text


def parse_ft(text: str) -> FaultTree:
    top = None
    nodes: dict[str, BasicEvent | Gate] = {}

    def define(tok, node):
        if node.name in nodes:
            raise DuplicateDefinition(
                f'line {tok.line}: {node.name!r} is defined more than once')
        nodes[node.name] = node

    for stmt in _split_statements(_tokenize(text)):
        head = stmt[0]
        if head.kind == 'name' and head.text == 'toplevel':
            if len(stmt) != 2:
                raise FtSyntaxError('expected: toplevel NAME;', head.line, head.col)
            if top is not None:
                raise DuplicateDefinition(f'line {head.line}: second toplevel statement')
            top = _expect_name(stmt[1])
            continue
        name = _expect_name(head)
        if len(stmt) < 2:
            raise FtSyntaxError(f'incomplete statement for {name}', head.line, head.col)
        op = stmt[1]
        if op.kind == 'name' and op.text == 'prob':
            if len(stmt) != 4 or stmt[2].text != '=' or stmt[3].kind != 'number':
                raise FtSyntaxError('expected: NAME prob=FLOAT;', op.line, op.col)
            define(head, BasicEvent(name, float(stmt[3].text)))
        elif op.kind == 'name' and op.text in ('and', 'or'):
            children = tuple(_expect_name(t) for t in stmt[2:])
            if not children:
                raise FtSyntaxError(f'gate {name} has no inputs', op.line, op.col)
            define(head, Gate(name, GateKind(op.text), children))
        elif op.kind == 'vot':
            k, n = op.value
            children = tuple(_expect_name(t) for t in stmt[2:])
            if not children:
                raise FtSyntaxError(f'gate {name} has no inputs', op.line, op.col)
            if n != len(children):
                raise BadArity(f'line {op.line}: {name} declares {n} inputs '
                               f'but lists {len(children)}')
            define(head, Gate(name, GateKind.VOT, children, k))
        else:
            raise FtSyntaxError(f'expected and/or/KofN/prob, got {op.text!r}',
                                op.line, op.col)
    if top is None:
        raise MissingTop('no toplevel statement')
    return FaultTree(nodes, top)


def render_ft(ft: FaultTree) -> str:
    lines = [f'toplevel {ft.top};']
    for node in ft.nodes.values():
        if isinstance(node, BasicEvent):
            lines.append(f'{node.name} prob={node.prob!r};')
        else:
            op = node.kind.value if node.kind is not GateKind.VOT \
                else f'{node.k}of{len(node.children)}'
            lines.append(f"{node.name} {op} {' '.join(node.children)};")
    return '\n'.join(lines) + '\n'


def ft_to_dot(ft: FaultTree) -> str:
    lines = ['digraph ft {']
    for node in ft.nodes.values():
        if isinstance(node, BasicEvent):
            lines.append(f'  "{node.name}" [shape=circle, label="{node.name}\\n'
                         f'p={node.prob!r}"];')
        else:
            op = node.kind.value.upper() if node.kind is not GateKind.VOT \
                else f'{node.k}/{len(node.children)}'
            lines.append(f'  "{node.name}" [shape=box, label="{node.name}\\n{op}"];')
    for node in ft.nodes.values():
        if isinstance(node, Gate):
            for child in node.children:
                lines.append(f'  "{node.name}" -> "{child}";')
    lines.append('}')
    return '\n'.join(lines) + '\n'


# ---------------------------------------------------------------------------
# evaluation


def _fires(node: Gate, values) -> int:
    return int(sum(values) >= node.threshold)


def evaluate_ft(ft: FaultTree, a: Assignment) -> int:
    values = dict(zip(ft.basic_events, assignment_vector(ft.basic_events, a)))
    memo = {}

    def value(name):
        if name in values:
            return values[name]
        if name not in memo:
            node = ft.nodes[name]
            memo[name] = _fires(node, [value(c) for c in node.children])
        return memo[name]

    return value(ft.top)


def evaluate_many(ft: FaultTree, X: np.ndarray, universe) -> np.ndarray:
    """Top-event column for every row of `X` (columns named by `universe`)."""
    universe = check_universe(universe)
    missing = set(ft.basic_events) - set(universe)
    if missing:
        raise UniverseMismatch(f'columns missing for {sorted(missing)}')
    column = {name: i for i, name in enumerate(universe)}
    memo = {}

    def value(name):
        if name not in memo:
            node = ft.nodes[name]
            if isinstance(node, BasicEvent):
                memo[name] = X[:, column[name]].astype(np.int32)
            else:
                total = sum(value(c) for c in node.children)
                memo[name] = (total >= node.threshold).astype(np.int32)
        return memo[name]

    return value(ft.top).astype(np.uint8)


def ft_truth_table(ft: FaultTree, universe=None) -> TruthTable:
    """Exhaustive table; `universe` may be any superset of the basic events."""
    universe = ft.basic_events if universe is None else check_universe(universe)
    check_size(len(universe))
    return TruthTable(universe, evaluate_many(ft, input_matrix(len(universe)), universe))


# ---------------------------------------------------------------------------
# quantitative analysis


def at_least_k_probability(k: int, probs) -> float:
    """P(at least k of independent events occur), exact distribution recursion."""
    dist = [1.0]  # dist[j] = P(exactly j occurred so far)
    for p in probs:
        nxt = [0.0] * (len(dist) + 1)
        for j, mass in enumerate(dist):
            nxt[j] += mass * (1.0 - p)
            nxt[j + 1] += mass * p
        dist = nxt
    return sum(dist[k:])


def ft_probability_formulas(ft: FaultTree) -> dict[str, float]:
    """Per-node failure probabilities by bottom-up gate formulas.

    Only exact when no node is shared between gates; shared nodes raise
    `SharedEventError` (use the BDD route instead).
    """
    shared = [n for n, ps in ft.parents().items() if len(ps) > 1]
    if shared:
        raise SharedEventError(
            f'{shared} feed more than one gate; gate formulas would assume '
            'false independence')
    result: dict[str, float] = {}

    def prob(name):
        if name not in result:
            node = ft.nodes[name]
            if isinstance(node, BasicEvent):
                result[name] = node.prob
            else:
                ps = [prob(c) for c in node.children]
                if node.kind is GateKind.AND:
                    value = 1.0
                    for p in ps:
                        value *= p
                elif node.kind is GateKind.OR:
                    # pairwise P(A) + P(B) - P(A)P(B); keeps precision for tiny p
                    value = 0.0
                    for p in ps:
                        value = value + p - value * p
                else:
                    value = at_least_k_probability(node.k, ps)
                result[name] = value
        return result[name]

    prob(ft.top)
    return {name: result[name] for name in ft.nodes}


def sample_dataset(ft: FaultTree, n: int, p_success: float, seed: int) -> Dataset:
    """`n` rows of i.i.d. Bernoulli(`p_success`) basic events, labelled by the top event."""
    if n < 1:
        raise ValueError(f'sample size must be >= 1, got {n}')
    if not (0.0 <= p_success <= 1.0):
        raise ProbabilityOutOfRange(f'p_success={p_success!r} not in [0, 1]')
    rng = np.random.default_rng(seed)
    universe = ft.basic_events
    X = (rng.random((n, len(universe))) < p_success).astype(np.uint8)
    y = evaluate_many(ft, X, universe)
    return Dataset(universe, X, y, {'seed': seed, 'p': p_success})
