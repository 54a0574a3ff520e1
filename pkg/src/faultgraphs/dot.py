"""Reader for the small DOT dialect written by the BDD and DT exporters.

Only what the exporters emit is accepted: ``// key: value`` metadata
comments, ``nID [shape=circle|square, label="..."];`` nodes and
``nA -> nB [style=solid|dashed];`` edges (solid = 1-branch).
"""
import re
from dataclasses import dataclass, field

from faultgraphs.errors import ParseError

_NODE = re.compile(r'^n(\d+)\s*\[shape=(circle|square),\s*label="([^"]*)"\];$')
_EDGE = re.compile(r'^n(\d+)\s*->\s*n(\d+)\s*\[style=(solid|dashed)\];$')


@dataclass
class DotGraph:
    kind: str
    meta: dict = field(default_factory=dict)
    probs: dict = field(default_factory=dict)
    nodes: dict = field(default_factory=dict)  # id -> (shape, label)
    low: dict = field(default_factory=dict)
    high: dict = field(default_factory=dict)

    def root(self) -> int:
        if 'root' not in self.meta:
            raise ParseError('missing "// root:" comment')
        return int(self.meta['root'].lstrip('n'))

    def decision(self, u):
        """``(variable, low, high)`` for a circle node, or the 0/1 label for a square."""
        if u not in self.nodes:
            raise ParseError(f'node n{u} is referenced but not declared')
        shape, label = self.nodes[u]
        if shape == 'square':
            if label not in ('0', '1'):
                raise ParseError(f'terminal n{u} has label {label!r}')
            return int(label)
        if u not in self.low or u not in self.high:
            raise ParseError(f'node n{u} needs one solid and one dashed edge')
        return label, self.low[u], self.high[u]


def parse_dot(text: str) -> DotGraph:
    graph = None
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s == '}':
            continue
        m = re.match(r'^digraph\s+(\w+)\s*\{$', s)
        if m:
            graph = DotGraph(m.group(1))
            continue
        if graph is None:
            raise ParseError(f'line {lineno}: expected "digraph NAME {{"')
        if s.startswith('//'):
            body = s[2:].strip()
            if body.startswith('prob '):
                name, _, value = body[5:].partition('=')
                try:
                    graph.probs[name.strip()] = float(value)
                except ValueError:
                    raise ParseError(f'line {lineno}: bad probability {value!r}') from None
            else:
                key, _, value = body.partition(':')
                graph.meta[key.strip()] = value.strip()
            continue
        m = _NODE.match(s)
        if m:
            graph.nodes[int(m.group(1))] = (m.group(2), m.group(3))
            continue
        m = _EDGE.match(s)
        if m:
            side = graph.high if m.group(3) == 'solid' else graph.low
            u = int(m.group(1))
            if u in side:
                raise ParseError(f'line {lineno}: n{u} has two {m.group(3)} edges')
            side[u] = int(m.group(2))
            continue
        raise ParseError(f'line {lineno}: unrecognised DOT line {s!r}')
    if graph is None:
        raise ParseError('empty DOT input')
    return graph


def prob_comments(universe, probs) -> list:
    if not probs:
        return []
    return [f'  // prob {name}={probs[name]!r}' for name in universe if name in probs]
