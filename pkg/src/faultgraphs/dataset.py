"""Labelled binary datasets and their CSV form.

CSV layout::

    # seed=<seed> p=<p_success>
    B1,B2,...,top
    0,1,...,0
"""
from __future__ import annotations

import io
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from faultgraphs.boolean_core import check_universe, input_matrix, TruthTable
from faultgraphs.errors import ParseError

LABEL_COLUMN = 'top'


@dataclass(frozen=True, eq=False)
class Dataset:
    universe: tuple[str, ...]
    X: np.ndarray  # (rows, len(universe)) uint8
    y: np.ndarray  # (rows,) uint8
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'universe', check_universe(self.universe))
        X = np.asarray(self.X, dtype=np.uint8).reshape(-1, len(self.universe))
        y = np.asarray(self.y, dtype=np.uint8).reshape(-1)
        if X.shape[0] != y.shape[0]:
            raise ValueError(f'{X.shape[0]} input rows but {y.shape[0]} labels')
        if np.any(X > 1) or np.any(y > 1):
            raise ValueError('dataset values must be 0/1')
        object.__setattr__(self, 'X', X)
        object.__setattr__(self, 'y', y)

    def __len__(self):
        return self.y.shape[0]

    def rows(self) -> Iterator[tuple[dict[str, int], int]]:
        for xs, label in zip(self.X.tolist(), self.y.tolist()):
            yield dict(zip(self.universe, xs)), label

    @classmethod
    def from_truth_table(cls, t: TruthTable) -> Dataset:
        """One row per assignment, in table row order."""
        return cls(t.universe, input_matrix(t.n), t.outputs.copy(), {'exhaustive': True})

    def to_csv(self) -> str:
        out = io.StringIO()
        if 'seed' in self.meta:
            out.write(f"# seed={self.meta['seed']} p={self.meta['p']!r}\n")
        out.write(','.join(self.universe + (LABEL_COLUMN,)) + '\n')
        for xs, label in zip(self.X.tolist(), self.y.tolist()):
            out.write(','.join(map(str, xs)) + f',{label}\n')
        return out.getvalue()


def read_csv(text: str) -> Dataset:
    header = None
    meta = {}
    X, y = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith('#'):
            for item in line[1:].split():
                key, _, value = item.partition('=')
                if key in ('seed', 'p') and value:
                    meta[key] = int(value) if key == 'seed' else float(value)
            continue
        cells = [c.strip() for c in line.split(',')]
        if header is None:
            if cells[-1] != LABEL_COLUMN:
                raise ParseError(f'line {lineno}: last column must be {LABEL_COLUMN!r}')
            header = cells[:-1]
            continue
        if len(cells) != len(header) + 1 or any(c not in ('0', '1') for c in cells):
            raise ParseError(f'line {lineno}: expected {len(header) + 1} values of 0/1')
        X.append([int(c) for c in cells[:-1]])
        y.append(int(cells[-1]))
    if header is None:
        raise ParseError('missing CSV header')
    return Dataset(tuple(header), np.array(X, dtype=np.uint8).reshape(-1, len(header)),
                   np.array(y, dtype=np.uint8), meta)


def dataset_from_rows(universe: Sequence[str], rows) -> Dataset:
    """Build from ``(assignment_dict, label)`` pairs."""
    universe = tuple(universe)
    X = [[a[v] for v in universe] for a, _ in rows]
    y = [label for _, label in rows]
    return Dataset(universe, np.array(X, dtype=np.uint8).reshape(-1, len(universe)),
                   np.array(y, dtype=np.uint8))
