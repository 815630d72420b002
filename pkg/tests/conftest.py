"""Shared builders for randomized tests.

Tests use seeded `random.Random` sweeps so failures reproduce exactly.
"""

from __future__ import annotations

import random
from fractions import Fraction

from flowlab.core import Flow, FlowNetwork, ResidualNetwork


def random_simple_digraph(rng: random.Random, node_count: int, edge_count: int):
    """Edge endpoint pairs with no self loops, duplicates, or antiparallel pairs."""
    pairs = [(a, b) for a in range(node_count) for b in range(a + 1, node_count)]
    edge_count = min(edge_count, len(pairs))
    chosen = rng.sample(pairs, edge_count)
    oriented = []
    for a, b in chosen:
        if rng.random() < 0.5:
            oriented.append((a, b))
        else:
            oriented.append((b, a))
    return oriented


def random_network(
    rng: random.Random,
    node_count: int,
    edge_count: int,
    max_capacity: int = 9,
    with_budgets: bool = False,
) -> FlowNetwork:
    edges = []
    for tail, head in random_simple_digraph(rng, node_count, edge_count):
        cap = Fraction(rng.randint(1, max_capacity))
        cost = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        edges.append((tail, head, cap, cost))
    budgets = [Fraction(0)] * node_count
    if with_budgets and node_count >= 2:
        for _ in range(max(1, node_count // 2)):
            a, b = rng.sample(range(node_count), 2)
            amount = Fraction(rng.randint(1, 3))
            budgets[a] += amount
            budgets[b] -= amount
    return FlowNetwork.from_data(node_count, edges, budgets)


def random_capacity_respecting_flow(rng: random.Random, net: FlowNetwork) -> Flow:
    """A flow inside the capacity box; conservation is not attempted."""
    values = []
    for e in net.edges:
        top = 6 if e.capacity is None else int(e.capacity)
        values.append(Fraction(rng.randint(0, top)))
    return Flow(tuple(values))


def find_any_cycle(r: ResidualNetwork):
    """Some simple cycle of the residual network, or None.

    Depth-first search; used by tests that need an arbitrary cycle
    without depending on the mincycle module.
    """
    out = {}
    for e in r.edges:
        out.setdefault(e.tail, []).append(e)
    color = {}

    def visit(v, path):
        color[v] = 1
        for e in out.get(v, ()):
            w = e.head
            if color.get(w, 0) == 1:
                for i, pe in enumerate(path):
                    if pe.tail == w:
                        return path[i:] + [e]
                return [e] if e.tail == w else None
            if color.get(w, 0) == 0:
                got = visit(w, path + [e])
                if got is not None:
                    return got
        color[v] = 2
        return None

    for v in range(r.node_count):
        if color.get(v, 0) == 0:
            got = visit(v, [])
            if got is not None:
                return got
    return None
