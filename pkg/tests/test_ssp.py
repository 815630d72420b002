"""Shortest-path augmentation order and tie-breaking."""

import random
from dataclasses import replace
from fractions import Fraction

import pytest

from flowlab import Flow, FlowNetwork, check_feasible, flow_cost, residual, verify_optimality
from flowlab.core import InfeasibleError
from flowlab.mmcc import mmcc_solve
from flowlab.ssp import (
    NegativeCycleError,
    cheapest_path,
    concentrate_budgets,
    distances_to_sink,
    ssp_solve,
)

from conftest import random_simple_digraph


def test_distances_to_sink_simple_chain():
    net = FlowNetwork.from_data(3, [(0, 1, 1, 2), (1, 2, 1, 3)])
    r = residual(net, Flow.zero(2))
    assert distances_to_sink(r, 2) == [Fraction(5), Fraction(3), Fraction(0)]


def test_distances_to_sink_unreachable_is_none():
    net = FlowNetwork.from_data(3, [(0, 1, 1, 2)])
    r = residual(net, Flow.zero(1))
    dist = distances_to_sink(r, 2)
    assert dist[0] is None and dist[1] is None and dist[2] == 0


def test_distances_to_sink_flags_negative_cycle():
    net = FlowNetwork.from_data(
        3, [(0, 1, 1, -1), (1, 2, 1, -1), (2, 0, 1, -1)]
    )
    r = residual(net, Flow.zero(3))
    with pytest.raises(NegativeCycleError):
        distances_to_sink(r, 0)


def test_cheapest_path_prefers_lexicographically_smaller_nodes():
    net = FlowNetwork.from_data(
        4,
        [(0, 1, 5, 1), (1, 3, 5, 1), (0, 2, 5, 1), (2, 3, 5, 1)],
    )
    r = residual(net, Flow.zero(4))
    path = cheapest_path(r, 0, 3)
    assert [e.tail for e in path] + [3] == [0, 1, 3]


def test_ssp_single_path():
    net = FlowNetwork.from_data(3, [(0, 1, 2, 1), (1, 2, 2, 1)])
    trace = ssp_solve(net, 0, 2, 2)
    assert trace.step_count == 1
    assert trace.steps[0].path == (0, 1, 2)
    assert trace.steps[0].cost == 2
    assert trace.steps[0].amount == 2
    assert trace.final_flow.values == (Fraction(2), Fraction(2))


def test_ssp_moves_to_pricier_route_when_cheap_one_fills():
    net = FlowNetwork.from_data(
        4,
        [(0, 1, 1, 0), (1, 3, 1, 0), (0, 2, 5, 3), (2, 3, 5, 3)],
    )
    trace = ssp_solve(net, 0, 3, 3)
    assert [s.path for s in trace.steps] == [(0, 1, 3), (0, 2, 3)]
    assert [s.cost for s in trace.steps] == [Fraction(0), Fraction(6)]
    assert [s.amount for s in trace.steps] == [Fraction(1), Fraction(2)]


def test_ssp_uses_backward_edges():
    net = FlowNetwork.from_data(
        4,
        [
            (0, 1, 1, 1),
            (1, 3, 1, 1),
            (1, 2, 1, 0),
            (0, 2, 1, 4),
            (2, 3, 1, 1),
        ],
    )
    trace = ssp_solve(net, 0, 3, 2)
    # the first unit takes the all-cheap zigzag, the second undoes the
    # middle edge from the other side
    assert trace.steps[0].path == (0, 1, 2, 3)
    assert trace.steps[0].cost == 2
    assert trace.steps[1].path == (0, 2, 1, 3)
    assert trace.steps[1].cost == 5
    shipped = replace(net, budgets=(Fraction(2), Fraction(0), Fraction(0), Fraction(-2)))
    assert check_feasible(shipped, trace.final_flow) is None
    assert flow_cost(net, trace.final_flow) == 7
    assert verify_optimality(net, trace.final_flow) is None


def test_ssp_path_costs_never_decrease():
    rng = random.Random(81)
    checked = 0
    for _ in range(60):
        n = rng.randint(3, 7)
        m = rng.randint(3, 10)
        pairs = random_simple_digraph(rng, n, m)
        net = FlowNetwork.from_data(
            n,
            [
                (t, h, rng.randint(1, 6), Fraction(rng.randint(0, 9), rng.randint(1, 4)))
                for t, h in pairs
            ],
        )
        source, sink = 0, n - 1
        try:
            trace = ssp_solve(net, source, sink, 3)
        except (InfeasibleError, ValueError):
            continue
        costs = trace.path_costs()
        for before, after in zip(costs, costs[1:]):
            assert before <= after
        for idx, e in enumerate(net.edges):
            assert 0 <= trace.final_flow[idx]
            assert e.capacity is None or trace.final_flow[idx] <= e.capacity
        checked += 1
    assert checked > 10


def test_ssp_zero_demand_returns_zero_flow():
    net = FlowNetwork.from_data(3, [(0, 1, 2, 1), (1, 2, 2, 1)])
    trace = ssp_solve(net, 0, 2, 0)
    assert trace.step_count == 0
    assert trace.final_flow == Flow.zero(2)


def test_ssp_infeasible_demand():
    net = FlowNetwork.from_data(3, [(0, 1, 2, 1), (1, 2, 2, 1)])
    with pytest.raises(InfeasibleError):
        ssp_solve(net, 0, 2, 5)


def test_ssp_rejects_nonzero_budgets_and_bad_endpoints():
    net = FlowNetwork.from_data(2, [(0, 1, 2, 1)], budgets=[1, -1])
    with pytest.raises(ValueError):
        ssp_solve(net, 0, 1, 1)
    clean = FlowNetwork.from_data(2, [(0, 1, 2, 1)])
    with pytest.raises(ValueError):
        ssp_solve(clean, 0, 0, 1)
    with pytest.raises(ValueError):
        ssp_solve(clean, 0, 5, 1)
    with pytest.raises(ValueError):
        ssp_solve(clean, 0, 1, -2)


def test_concentrate_budgets_layout():
    net = FlowNetwork.from_data(
        3,
        [(0, 1, 3, 1), (1, 2, 3, 1)],
        budgets=[2, 0, -2],
        node_names=["a", "b", "c"],
    )
    widened, source, sink, demand = concentrate_budgets(net)
    assert (source, sink, demand) == (3, 4, 2)
    assert widened.node_count == 5
    assert all(b == 0 for b in widened.budgets)
    added = widened.edges[2:]
    assert [(e.tail, e.head, e.capacity, e.cost) for e in added] == [
        (3, 0, Fraction(2), Fraction(0)),
        (2, 4, Fraction(2), Fraction(0)),
    ]
    assert widened.node_names[-2:] == ("super_source", "super_sink")


def test_ssp_on_concentrated_network_matches_cycle_canceling():
    rng = random.Random(82)
    solved = 0
    for _ in range(80):
        n = rng.randint(3, 6)
        m = rng.randint(3, 9)
        pairs = random_simple_digraph(rng, n, m)
        edges = [
            (t, h, rng.randint(1, 6), Fraction(rng.randint(0, 9), rng.randint(1, 4)))
            for t, h in pairs
        ]
        budgets = [Fraction(0)] * n
        for _ in range(max(1, n // 2)):
            a, b = rng.sample(range(n), 2)
            amt = rng.randint(1, 2)
            budgets[a] += amt
            budgets[b] -= amt
        net = FlowNetwork.from_data(n, edges, budgets=budgets)
        widened, source, sink, demand = concentrate_budgets(net)
        try:
            trace = ssp_solve(widened, source, sink, demand)
            reference = mmcc_solve(net)
        except InfeasibleError:
            continue
        restricted = Flow(trace.final_flow.values[: net.edge_count])
        assert check_feasible(net, restricted) is None
        assert flow_cost(net, restricted) == flow_cost(net, reference.final_flow)
        assert verify_optimality(net, restricted) is None
        solved += 1
    assert solved > 15
