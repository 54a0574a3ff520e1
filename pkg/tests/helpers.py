"""Random monotone fault trees for property tests."""
import random

from faultgraphs.fault_tree import BasicEvent, FaultTree, Gate, GateKind


def random_ft(rng: random.Random, n_events: int, shared: bool = False,
              probs: bool = True) -> FaultTree:
    """AND/OR/VOT tree over B1..Bn; with `shared`, gates may reuse consumed nodes."""
    assert n_events >= 2
    events = [f'B{i}' for i in range(1, n_events + 1)]
    nodes = {e: BasicEvent(e, round(rng.uniform(0.0, 1.0), 6) if probs else 0.5)
             for e in events}
    pool = list(events)
    rng.shuffle(pool)
    consumed = []
    count = 0
    while len(pool) > 1 or count == 0:
        arity = rng.randint(2, min(4, max(2, len(pool))))
        take = min(arity, len(pool))
        children = [pool.pop(rng.randrange(len(pool))) for _ in range(take)]
        if shared and consumed and (take < 2 or rng.random() < 0.3):
            extra = rng.choice(consumed)
            if extra not in children:
                children.append(extra)
        if len(children) < 2:
            pool.extend(children)
            continue
        consumed.extend(children)
        count += 1
        name = f'G{count}'
        kind = rng.choice([GateKind.AND, GateKind.OR, GateKind.VOT])
        k = rng.randint(1, len(children)) if kind is GateKind.VOT else None
        nodes[name] = Gate(name, kind, tuple(children), k)
        pool.append(name)
    return FaultTree(nodes, pool[0])


def python_eval(ft: FaultTree, a: dict) -> int:
    """Plain recursive reading of the gate rules; independent of the package evaluators."""
    def val(name):
        node = ft.nodes[name]
        if isinstance(node, BasicEvent):
            return a[name]
        fired = sum(val(c) for c in node.children)
        if node.kind is GateKind.AND:
            return int(fired == len(node.children))
        if node.kind is GateKind.OR:
            return int(fired >= 1)
        return int(fired >= node.k)

    return val(ft.top)
