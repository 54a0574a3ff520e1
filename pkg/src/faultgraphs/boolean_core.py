"""Shared Boolean semantics: assignments, truth tables, and cut-set algebra.

Row convention for every truth table in the package: row ``i`` assigns to
variable ``j`` (0-based position in the universe) the bit
``(i >> (n - 1 - j)) & 1``, so variable 0 is the most significant bit.

The exhaustive routines here are the oracles the other modules are tested
against; they favour obvious correctness over speed and refuse universes
larger than `MAX_VARIABLES`.
"""
from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence

import numpy as np

from faultgraphs.errors import (
    NonMonotoneFunction,
    ProbabilityOutOfRange,
    TooManyVariables,
    TrivialFunction,
    UniverseMismatch,
)

MAX_VARIABLES = 24

# A variable is identified by its name; an order is a tuple of names.
Assignment = Mapping[str, int]
CutSet = frozenset
CutSetCollection = frozenset


def check_universe(universe: Sequence[str]) -> tuple[str, ...]:
    universe = tuple(universe)
    if len(set(universe)) != len(universe):
        raise UniverseMismatch(f'duplicate variable names in {universe}')
    for name in universe:
        if not isinstance(name, str) or not name:
            raise UniverseMismatch(f'bad variable name {name!r}')
    return universe


def check_size(n: int, limit: int = MAX_VARIABLES) -> None:
    if n > limit:
        raise TooManyVariables(
            f'{n} variables exceeds the exhaustive limit of {limit}')


def input_matrix(n: int) -> np.ndarray:
    """All ``2**n`` assignments as a ``(2**n, n)`` uint8 matrix, row order fixed."""
    check_size(n)
    rows = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((rows[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def assignment_vector(universe: Sequence[str], a: Assignment) -> list[int]:
    """Values of `a` in universe order; `a` must cover exactly the universe."""
    if set(a) != set(universe):
        missing = sorted(set(universe) - set(a))
        extra = sorted(set(a) - set(universe))
        raise UniverseMismatch(
            f'assignment does not match universe (missing {missing}, extra {extra})')
    values = []
    for name in universe:
        v = a[name]
        if v not in (0, 1):
            raise ValueError(f'{name} must be 0 or 1, got {v!r}')
        values.append(int(v))
    return values


class TruthTable:
    """Output column of a Boolean function over an ordered universe."""

    __slots__ = ('universe', 'outputs')

    def __init__(self, universe: Sequence[str], outputs):
        universe = check_universe(universe)
        check_size(len(universe))
        outputs = np.asarray(outputs, dtype=np.uint8).reshape(-1)
        if outputs.shape[0] != 1 << len(universe):
            raise ValueError(
                f'expected {1 << len(universe)} rows, got {outputs.shape[0]}')
        if np.any(outputs > 1):
            raise ValueError('outputs must be 0/1')
        outputs.flags.writeable = False
        self.universe = universe
        self.outputs = outputs

    @classmethod
    def constant(cls, universe: Sequence[str], value: int) -> TruthTable:
        return cls(universe, np.full(1 << len(universe), value, dtype=np.uint8))

    @classmethod
    def from_function(cls, universe: Sequence[str], fn) -> TruthTable:
        """Tabulate ``fn(assignment_dict)`` row by row (slow, obviously correct)."""
        universe = check_universe(universe)
        bits = input_matrix(len(universe))
        out = [int(bool(fn(dict(zip(universe, map(int, row)))))) for row in bits]
        return cls(universe, out)

    @property
    def n(self) -> int:
        return len(self.universe)

    def __len__(self):
        return self.outputs.shape[0]

    def __eq__(self, other):
        if not isinstance(other, TruthTable):
            return NotImplemented
        return (self.universe == other.universe
                and np.array_equal(self.outputs, other.outputs))

    def __hash__(self):
        return hash((self.universe, self.outputs.tobytes()))

    def __repr__(self):
        if self.n <= 4:
            body = ''.join(map(str, self.outputs.tolist()))
        else:
            body = f'{self.count_ones()}/{len(self)} ones'
        return f'TruthTable({list(self.universe)}, {body})'

    def count_ones(self) -> int:
        return int(self.outputs.sum())

    def row_index(self, a: Assignment) -> int:
        index = 0
        for v in assignment_vector(self.universe, a):
            index = (index << 1) | v
        return index

    def lift(self, universe: Sequence[str]) -> TruthTable:
        """Re-express the same function over `universe` (a superset, any order)."""
        universe = check_universe(universe)
        missing = set(self.universe) - set(universe)
        if missing:
            raise UniverseMismatch(f'target universe lacks {sorted(missing)}')
        if universe == self.universe:
            return self
        bits = input_matrix(len(universe))
        position = {name: i for i, name in enumerate(universe)}
        index = np.zeros(bits.shape[0], dtype=np.int64)
        for name in self.universe:
            index = (index << 1) | bits[:, position[name]]
        return TruthTable(universe, self.outputs[index])


def evaluate_table(t: TruthTable, a: Assignment) -> int:
    return int(t.outputs[t.row_index(a)])


def _bit(n: int, j: int) -> int:
    return 1 << (n - 1 - j)


def is_monotone(t: TruthTable) -> bool:
    """Exhaustive single-bit dominance scan; transitivity covers a <= a'."""
    rows = np.arange(len(t), dtype=np.int64)
    f = t.outputs
    for j in range(t.n):
        bit = _bit(t.n, j)
        low = rows[(rows & bit) == 0]
        if np.any(f[low] > f[low | bit]):
            return False
    return True


def minimal_cut_sets_bruteforce(t: TruthTable) -> CutSetCollection:
    """Minimal sets whose members at 1 (everything else 0) make `t` output 1."""
    if t.outputs[0]:
        raise TrivialFunction('function is 1 on the all-zero assignment')
    if not is_monotone(t):
        raise NonMonotoneFunction('truth table is not monotone')
    rows = np.arange(len(t), dtype=np.int64)
    f = t.outputs.astype(bool)
    minimal = f.copy()
    for j in range(t.n):
        bit = _bit(t.n, j)
        has = (rows & bit) != 0
        # for a monotone f, minimal iff every single-element removal gives 0
        minimal &= ~(has & f[rows ^ bit])
    result = set()
    for r in np.flatnonzero(minimal).tolist():
        result.add(frozenset(
            name for j, name in enumerate(t.universe) if r & _bit(t.n, j)))
    return frozenset(result)


def check_probabilities(universe: Iterable[str], p: Mapping[str, float]) -> None:
    missing = [v for v in universe if v not in p]
    if missing:
        raise UniverseMismatch(f'no probability for {missing}')
    for name, value in p.items():
        if not (0.0 <= value <= 1.0):
            raise ProbabilityOutOfRange(f'P({name}) = {value!r} not in [0, 1]')


def probability_bruteforce(t: TruthTable, p: Mapping[str, float]) -> float:
    """Sum over satisfying rows of the product of independent literal probabilities."""
    check_probabilities(t.universe, p)
    rows = np.arange(len(t), dtype=np.int64)
    weight = np.ones(len(t), dtype=np.float64)
    for j, name in enumerate(t.universe):
        has = (rows & _bit(t.n, j)) != 0
        weight *= np.where(has, float(p[name]), 1.0 - float(p[name]))
    return math.fsum(weight[t.outputs.astype(bool)].tolist())


def minimize(c: Iterable[Iterable[str]]) -> CutSetCollection:
    """Absorption: drop duplicates and every set that contains another member."""
    candidates = sorted({frozenset(s) for s in c}, key=len)
    kept: list[frozenset] = []
    for s in candidates:
        if not any(k <= s for k in kept):
            kept.append(s)
    return frozenset(kept)


def sorted_cut_sets(c: Iterable[Iterable[str]]) -> list[tuple[str, ...]]:
    """Members sorted within each set, sets sorted lexicographically."""
    return sorted(tuple(sorted(s)) for s in c)


def format_cut_sets(c: Iterable[Iterable[str]]) -> str:
    return ''.join(' '.join(s) + '\n' for s in sorted_cut_sets(c))


def table_from_cut_sets(c: Iterable[Iterable[str]], universe: Sequence[str]) -> TruthTable:
    """Truth table of the monotone function OR over sets of AND over members."""
    universe = check_universe(universe)
    bits = input_matrix(len(universe)).astype(bool)
    position = {name: i for i, name in enumerate(universe)}
    out = np.zeros(bits.shape[0], dtype=bool)
    for s in c:
        term = np.ones(bits.shape[0], dtype=bool)
        for name in s:
            if name not in position:
                raise UniverseMismatch(f'{name} not in universe')
            term &= bits[:, position[name]]
        out |= term
    return TruthTable(universe, out)
