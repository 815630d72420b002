"""Core type and operation tests."""

import random
from fractions import Fraction

import pytest

from flowlab.core import (
    CapacityViolation,
    CostInterval,
    Cycle,
    EmptyCycleError,
    Flow,
    FlowNetwork,
    ResidualEdge,
    SmoothedInstance,
    ZeroResidualCapacityError,
    augment_cycle,
    check_feasible,
    flow_cost,
    rational,
    residual,
    validate_instance,
    validate_network,
    verify_optimality,
)

from conftest import (
    find_any_cycle,
    random_capacity_respecting_flow,
    random_network,
)


def net_from(node_count, edges, budgets=None):
    return FlowNetwork.from_data(node_count, edges, budgets)


def test_rational_rejects_floats():
    with pytest.raises(TypeError):
        rational(0.1)
    assert rational("1/10") == Fraction(1, 10)
    assert rational(3) == 3


def test_validate_minimal_ok():
    net = net_from(2, [(0, 1, 1, 0)], [0, 0])
    assert validate_network(net) is None


def test_validate_antiparallel_pair():
    net = net_from(2, [(0, 1, 1, 0), (1, 0, 1, 0)], [0, 0])
    bad = validate_network(net)
    assert bad is not None and bad.kind == "antiparallel_pair"


def test_validate_self_loop():
    net = net_from(2, [(0, 0, 1, 0)], [0, 0])
    bad = validate_network(net)
    assert bad is not None and bad.kind == "self_loop"


def test_validate_duplicate_edge():
    net = net_from(3, [(0, 1, 1, 0), (0, 1, 2, 1)], [0, 0, 0])
    bad = validate_network(net)
    assert bad is not None and bad.kind == "duplicate_edge"


def test_validate_negative_capacity():
    net = net_from(2, [(0, 1, -1, 0)], [0, 0])
    bad = validate_network(net)
    assert bad is not None and bad.kind == "negative_capacity"


def test_validate_budget_imbalance():
    net = net_from(2, [(0, 1, 1, 0)], [1, -2])
    bad = validate_network(net)
    assert bad is not None and bad.kind == "budget_imbalance"


def test_validate_disconnected_warns_but_passes():
    net = net_from(4, [(0, 1, 1, 0), (2, 3, 1, 0)], [0, 0, 0, 0])
    with pytest.warns(UserWarning, match="weakly connected"):
        assert validate_network(net) is None


def test_validate_bad_endpoint():
    net = net_from(2, [(0, 5, 1, 0)], [0, 0])
    bad = validate_network(net)
    assert bad is not None and bad.kind == "bad_endpoint"


def test_residual_zero_flow_has_forward_edges_only():
    net = net_from(2, [(0, 1, 3, 5)], [0, 0])
    r = residual(net, Flow.zero(1))
    assert len(r.edges) == 1
    e = r.edges[0]
    assert (e.tail, e.head, e.capacity, e.cost, e.forward) == (0, 1, 3, 5, True)


def test_residual_saturated_flow_has_backward_edge_only():
    net = net_from(2, [(0, 1, 3, 5)], [0, 0])
    r = residual(net, Flow.from_values([3]))
    assert len(r.edges) == 1
    e = r.edges[0]
    assert (e.tail, e.head, e.capacity, e.cost, e.forward) == (1, 0, 3, -5, False)


def test_residual_interior_flow_has_both_directions():
    net = net_from(2, [(0, 1, 3, 5)], [0, 0])
    r = residual(net, Flow.from_values([1]))
    directions = {(e.tail, e.head): (e.capacity, e.cost) for e in r.edges}
    assert directions == {(0, 1): (2, 5), (1, 0): (1, -5)}


def test_residual_uncapacitated_edge():
    net = net_from(2, [(0, 1, None, 2)], [0, 0])
    r = residual(net, Flow.from_values([7]))
    caps = {(e.tail, e.head): e.capacity for e in r.edges}
    assert caps == {(0, 1): None, (1, 0): 7}


def test_residual_rejects_capacity_violation():
    net = net_from(2, [(0, 1, 3, 5)], [0, 0])
    with pytest.raises(CapacityViolation):
        residual(net, Flow.from_values([4]))
    with pytest.raises(CapacityViolation):
        residual(net, Flow.from_values([-1]))


def test_residual_edge_count_bounds():
    rng = random.Random(7)
    for _ in range(60):
        net = random_network(rng, rng.randint(2, 8), rng.randint(1, 12))
        flow = random_capacity_respecting_flow(rng, net)
        r = residual(net, flow)
        m = net.edge_count
        assert m <= 2 * m or m == 0
        assert len(r.edges) <= 2 * m
        if all(flow[i] > 0 for i in range(m)):
            assert len(r.edges) >= m
        # at most one residual edge per ordered pair
        pairs = [(e.tail, e.head) for e in r.edges]
        assert len(pairs) == len(set(pairs))


def test_flow_cost_zero_flow():
    net = net_from(2, [(0, 1, 1, 9)], [0, 0])
    assert flow_cost(net, Flow.zero(1)) == 0


def test_flow_cost_single_edge_exact():
    net = net_from(2, [(0, 1, 5, "3/7")], [0, 0])
    assert flow_cost(net, Flow.from_values([2])) == Fraction(6, 7)


def test_flow_cost_matches_naive_sum_any_order():
    rng = random.Random(11)
    for _ in range(40):
        net = random_network(rng, rng.randint(2, 7), rng.randint(1, 10))
        flow = random_capacity_respecting_flow(rng, net)
        order = list(range(net.edge_count))
        rng.shuffle(order)
        total = Fraction(0)
        for idx in order:
            total += net.edges[idx].cost * flow[idx]
        assert flow_cost(net, flow) == total


def test_check_feasible_zero_budgets_zero_flow():
    net = net_from(3, [(0, 1, 1, 0), (1, 2, 1, 0)], [0, 0, 0])
    assert check_feasible(net, Flow.zero(2)) is None


def test_check_feasible_reports_conservation_node():
    net = net_from(2, [(0, 1, 1, 0)], [1, -1])
    bad = check_feasible(net, Flow.zero(1))
    assert bad is not None and bad.kind == "conservation"
    assert "0" in bad.detail


def test_check_feasible_reports_capacity_edge():
    net = net_from(2, [(0, 1, 1, 0)], [0, 0])
    bad = check_feasible(net, Flow.from_values([2]))
    assert bad is not None and bad.kind == "capacity"


def test_augment_cycle_amount_is_min_residual():
    # triangle with residual capacities 3, 1, 2
    net = net_from(3, [(0, 1, 3, 1), (1, 2, 1, 1), (2, 0, 2, -3)], [0, 0, 0])
    r = residual(net, Flow.zero(3))
    cyc = Cycle.from_edges(r.edges)
    flow, delta = augment_cycle(net, Flow.zero(3), cyc)
    assert delta == 1
    assert flow.values == (1, 1, 1)
    r2 = residual(net, flow)
    pairs = {(e.tail, e.head) for e in r2.edges}
    assert (1, 2) not in pairs  # saturated
    assert (2, 1) in pairs


def test_augment_cycle_empty_rejected():
    net = net_from(2, [(0, 1, 1, 0)], [0, 0])
    with pytest.raises(EmptyCycleError):
        augment_cycle(net, Flow.zero(1), Cycle(edges=(), total_cost=Fraction(0), mean_cost=Fraction(0)))


def test_augment_cycle_stale_cycle_rejected():
    net = net_from(3, [(0, 1, 1, 1), (1, 2, 1, 1), (2, 0, 1, -3)], [0, 0, 0])
    r = residual(net, Flow.zero(3))
    cyc = Cycle.from_edges(r.edges)
    flow, _ = augment_cycle(net, Flow.zero(3), cyc)
    with pytest.raises(ZeroResidualCapacityError):
        augment_cycle(net, flow, cyc)


def test_augment_preserves_feasibility_and_cost_identity():
    rng = random.Random(23)
    done = 0
    while done < 100:
        net = random_network(rng, rng.randint(3, 8), rng.randint(3, 12))
        flow = random_capacity_respecting_flow(rng, net)
        r = residual(net, flow)
        found = find_any_cycle(r)
        if found is None:
            continue
        cyc = Cycle.from_edges(found)
        new_flow, delta = augment_cycle(net, flow, cyc)
        assert delta > 0
        # capacity bounds hold afterwards
        for idx, e in enumerate(net.edges):
            assert new_flow[idx] >= 0
            if e.capacity is not None:
                assert new_flow[idx] <= e.capacity
        # node balances unchanged by a cycle
        for v in range(net.node_count):
            before = sum(flow[i] for i, e in enumerate(net.edges) if e.head == v) - sum(
                flow[i] for i, e in enumerate(net.edges) if e.tail == v
            )
            after = sum(new_flow[i] for i, e in enumerate(net.edges) if e.head == v) - sum(
                new_flow[i] for i, e in enumerate(net.edges) if e.tail == v
            )
            assert before == after
        # cost moves exactly by delta * cycle cost; strict decrease iff negative
        assert flow_cost(net, new_flow) - flow_cost(net, flow) == delta * cyc.total_cost
        done += 1


def test_verify_optimality_negative_triangle():
    net = net_from(3, [(0, 1, 1, 1), (1, 2, 1, 1), (2, 0, 1, -3)], [0, 0, 0])
    witness = verify_optimality(net, Flow.zero(3))
    assert witness is not None
    assert witness.total_cost == -1
    assert witness.mean_cost == Fraction(-1, 3)


def test_verify_optimality_positive_costs_zero_flow():
    net = net_from(3, [(0, 1, 1, 1), (1, 2, 1, 2), (2, 0, 1, 3)], [0, 0, 0])
    assert verify_optimality(net, Flow.zero(3)) is None


def test_verify_optimality_witness_is_valid_cycle():
    rng = random.Random(31)
    witnesses = 0
    for _ in range(80):
        net = random_network(rng, rng.randint(3, 7), rng.randint(3, 10))
        flow = random_capacity_respecting_flow(rng, net)
        witness = verify_optimality(net, flow)
        if witness is None:
            continue
        witnesses += 1
        assert witness.total_cost < 0
        # every witness edge really has residual capacity
        _, delta = augment_cycle(net, flow, witness)
        assert delta > 0
    assert witnesses > 5


def test_cycle_from_edges_validates_closure():
    e1 = ResidualEdge(0, 1, Fraction(1), Fraction(1), 0, True)
    e2 = ResidualEdge(1, 2, Fraction(1), Fraction(1), 1, True)
    with pytest.raises(ValueError):
        Cycle.from_edges([e1, e2])


def test_cost_interval_bounds():
    iv = CostInterval(Fraction(1, 4), Fraction(1, 2))
    assert iv.hi == Fraction(3, 4)
    assert iv.contains(Fraction(1, 4)) and iv.contains(Fraction(3, 4))
    assert not iv.contains(Fraction(7, 8))
    with pytest.raises(ValueError):
        CostInterval(Fraction(0), Fraction(-1))
    assert CostInterval(Fraction(2), Fraction(0)).hi == 2


def test_smoothed_instance_realize_checks_containment():
    net = net_from(2, [(0, 1, 1, 0)], [0, 0])
    inst = SmoothedInstance(
        network=net,
        intervals=(CostInterval(Fraction(0), Fraction(1, 2)),),
        phi=Fraction(2),
    )
    realized = inst.realize([Fraction(1, 4)])
    assert realized.edges[0].cost == Fraction(1, 4)
    with pytest.raises(ValueError):
        inst.realize([Fraction(3, 4)])
    assert validate_instance(inst) is None


def test_validate_instance_flags_narrow_interval():
    net = net_from(2, [(0, 1, 1, 0)], [0, 0])
    inst = SmoothedInstance(
        network=net,
        intervals=(CostInterval(Fraction(0), Fraction(1, 8)),),
        phi=Fraction(4),
    )
    bad = validate_instance(inst)
    assert bad is not None and bad.kind == "interval_too_narrow"
