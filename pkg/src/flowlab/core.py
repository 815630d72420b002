"""Domain types for exact minimum-cost flow computation.

Every numeric quantity is a `fractions.Fraction`.  Capacities may be
unbounded, which is represented by ``None`` rather than a large sentinel
value.  Networks are simple directed graphs without antiparallel edge
pairs; this guarantees that a residual network never contains more than
one edge per ordered node pair, so cycles and paths are fully determined
by their node sequences.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

__all__ = [
    "FlowLabError",
    "CapacityViolation",
    "EmptyCycleError",
    "ZeroResidualCapacityError",
    "UnboundedCycleError",
    "InfeasibleError",
    "IterationCapExceeded",
    "rational",
    "Edge",
    "FlowNetwork",
    "CostInterval",
    "SmoothedInstance",
    "Flow",
    "ResidualEdge",
    "ResidualNetwork",
    "Cycle",
    "Violation",
    "validate_network",
    "validate_instance",
    "residual",
    "flow_cost",
    "check_feasible",
    "augment_cycle",
    "verify_optimality",
]

Capacity = Optional[Fraction]
RationalLike = Union[int, str, Fraction]


class FlowLabError(Exception):
    """Base class for every error raised by this package."""


class CapacityViolation(FlowLabError):
    """A flow value lies outside [0, capacity] on some edge."""


class EmptyCycleError(FlowLabError):
    """An augmenting cycle with no edges was supplied."""


class ZeroResidualCapacityError(FlowLabError):
    """A cycle edge has no residual capacity under the current flow."""


class UnboundedCycleError(FlowLabError):
    """Every edge of an augmenting cycle has unbounded headroom."""


class InfeasibleError(FlowLabError):
    """No flow satisfies the node budgets under the capacity bounds."""


class IterationCapExceeded(FlowLabError):
    """The safety iteration cap was hit before the solver terminated.

    The partial trace gathered so far is attached as ``trace`` so the
    run can be inspected; it is never silently truncated into a result.
    """

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace


def rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` to an exact Fraction.

    Floats are rejected: converting one would silently bake binary
    rounding error into what is meant to be exact arithmetic.  Pass a
    string such as ``"1/10"`` instead.
    """
    if isinstance(value, float):
        raise TypeError(
            "refusing to convert float %r; pass an int, Fraction, or string "
            "like '1/10' to keep arithmetic exact" % (value,)
        )
    return Fraction(value)


def _capacity(value) -> Capacity:
    return None if value is None else rational(value)


@dataclass(frozen=True)
class Edge:
    """Directed edge with capacity, cost, and a leaving-edge priority.

    ``capacity`` is ``None`` for an uncapacitated edge.  ``leaving_rank``
    is consulted only by the network simplex solver when several edges
    block a pivot simultaneously; lower rank is preferred.
    """

    tail: int
    head: int
    capacity: Capacity
    cost: Fraction
    leaving_rank: int = 1


@dataclass(frozen=True)
class FlowNetwork:
    """Simple digraph with capacities, costs, and node budgets.

    The conservation convention is ``budget(v) + inflow(v) = outflow(v)``,
    so a positive budget marks a supply node and a negative budget a
    demand node.  ``node_names`` and ``edge_labels`` are optional display
    metadata and never take part in equality comparisons.
    """

    node_count: int
    edges: tuple[Edge, ...]
    budgets: tuple[Fraction, ...]
    node_names: Optional[tuple[str, ...]] = field(default=None, compare=False)
    edge_labels: Optional[tuple[str, ...]] = field(default=None, compare=False)

    @classmethod
    def from_data(
        cls,
        node_count: int,
        edges: Iterable[tuple],
        budgets: Optional[Sequence[RationalLike]] = None,
        node_names: Optional[Sequence[str]] = None,
        edge_labels: Optional[Sequence[str]] = None,
    ) -> "FlowNetwork":
        """Build a network from plain tuples.

        Each edge tuple is ``(tail, head, capacity, cost)`` with an
        optional fifth ``leaving_rank`` entry.  Numbers may be ints,
        strings, or Fractions; capacity ``None`` means uncapacitated.
        """
        built = []
        for item in edges:
            if len(item) == 4:
                tail, head, cap, cost = item
                rank = 1
            else:
                tail, head, cap, cost, rank = item
            built.append(Edge(tail, head, _capacity(cap), rational(cost), rank))
        if budgets is None:
            budget_tuple = tuple(Fraction(0) for _ in range(node_count))
        else:
            budget_tuple = tuple(rational(b) for b in budgets)
        if len(budget_tuple) != node_count:
            raise ValueError(
                "expected %d budgets, got %d" % (node_count, len(budget_tuple))
            )
        return cls(
            node_count=node_count,
            edges=tuple(built),
            budgets=budget_tuple,
            node_names=tuple(node_names) if node_names is not None else None,
            edge_labels=tuple(edge_labels) if edge_labels is not None else None,
        )

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def name_of(self, node: int) -> str:
        if self.node_names is not None:
            return self.node_names[node]
        return str(node)


@dataclass(frozen=True)
class CostInterval:
    """Half-open cost range [lo, lo + width) an edge cost is drawn from.

    A zero width is allowed and denotes a degenerate interval whose only
    sample is ``lo``.  The smoothing constraint (width at least 1/phi)
    is a property of a whole instance, checked by ``validate_instance``.
    """

    lo: Fraction
    width: Fraction

    def __post_init__(self):
        if self.width < 0:
            raise ValueError("interval width must be nonnegative")

    @property
    def hi(self) -> Fraction:
        return self.lo + self.width

    def contains(self, cost: Fraction) -> bool:
        return self.lo <= cost <= self.hi


@dataclass(frozen=True)
class Flow:
    """Per-edge flow values, indexed like ``FlowNetwork.edges``."""

    values: tuple[Fraction, ...]

    @classmethod
    def zero(cls, edge_count: int) -> "Flow":
        return cls(tuple(Fraction(0) for _ in range(edge_count)))

    @classmethod
    def from_values(cls, values: Iterable[RationalLike]) -> "Flow":
        return cls(tuple(rational(v) for v in values))

    def __getitem__(self, index: int) -> Fraction:
        return self.values[index]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class SmoothedInstance:
    """A flow network whose edge costs are intervals, not fixed numbers.

    ``network`` carries a placeholder cost per edge (the interval lower
    bound); ``realize`` substitutes concrete sampled costs.  When
    ``starting_flow`` is present, solvers use it instead of computing an
    initial feasible flow; feasibility does not depend on the sampled
    costs, so one flow serves every realization.
    """

    network: FlowNetwork
    intervals: tuple[CostInterval, ...]
    phi: Fraction
    starting_flow: Optional[Flow] = None

    def __post_init__(self):
        if len(self.intervals) != self.network.edge_count:
            raise ValueError("one cost interval per edge is required")

    def realize(self, costs: Sequence[Fraction]) -> FlowNetwork:
        """Return a concrete network using ``costs`` for the edge costs."""
        if len(costs) != self.network.edge_count:
            raise ValueError("expected %d costs, got %d" % (self.network.edge_count, len(costs)))
        edges = []
        for edge, interval, cost in zip(self.network.edges, self.intervals, costs):
            cost = rational(cost)
            if not interval.contains(cost):
                raise ValueError(
                    "cost %s for edge (%d,%d) outside its interval [%s, %s]"
                    % (cost, edge.tail, edge.head, interval.lo, interval.hi)
                )
            edges.append(Edge(edge.tail, edge.head, edge.capacity, cost, edge.leaving_rank))
        return FlowNetwork(
            node_count=self.network.node_count,
            edges=tuple(edges),
            budgets=self.network.budgets,
            node_names=self.network.node_names,
            edge_labels=self.network.edge_labels,
        )


@dataclass(frozen=True)
class ResidualEdge:
    """Edge of a residual network, tagged with its origin.

    ``edge_id`` indexes the underlying network edge and ``forward`` tells
    whether this residual edge runs along it (spare capacity) or against
    it (cancellable flow).
    """

    tail: int
    head: int
    capacity: Capacity
    cost: Fraction
    edge_id: int
    forward: bool


@dataclass(frozen=True)
class ResidualNetwork:
    node_count: int
    edges: tuple[ResidualEdge, ...]

    @property
    def edge_count(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Cycle:
    """Simple directed cycle in a residual network."""

    edges: tuple[ResidualEdge, ...]
    total_cost: Fraction
    mean_cost: Fraction

    @classmethod
    def from_edges(cls, edges: Sequence[ResidualEdge]) -> "Cycle":
        edges = tuple(edges)
        if not edges:
            raise EmptyCycleError("a cycle needs at least one edge")
        nodes = [e.tail for e in edges]
        for here, after in zip(edges, edges[1:] + edges[:1]):
            if here.head != after.tail:
                raise ValueError("edges do not form a closed walk")
        if len(set(nodes)) != len(nodes):
            raise ValueError("cycle revisits a node")
        total = sum((e.cost for e in edges), Fraction(0))
        return cls(edges=edges, total_cost=total, mean_cost=Fraction(total, len(edges)))

    def nodes(self) -> tuple[int, ...]:
        return tuple(e.tail for e in self.edges)

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Violation:
    """First broken invariant found by a validation pass."""

    kind: str
    detail: str


def _weakly_connected(node_count: int, edges: Sequence[Edge]) -> bool:
    if node_count <= 1:
        return True
    parent = list(range(node_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        a, b = find(e.tail), find(e.head)
        if a != b:
            parent[a] = b
    roots = {find(v) for v in range(node_count)}
    return len(roots) == 1


def validate_network(net: FlowNetwork) -> Optional[Violation]:
    """Check the structural invariants of ``net``.

    Returns ``None`` when everything holds, otherwise a ``Violation``
    describing the first problem found.  A disconnected network is only
    warned about, since the solvers work per component.
    """
    seen: set[tuple[int, int]] = set()
    for idx, e in enumerate(net.edges):
        if not (0 <= e.tail < net.node_count and 0 <= e.head < net.node_count):
            return Violation("bad_endpoint", "edge %d references a missing node" % idx)
        if e.tail == e.head:
            return Violation("self_loop", "edge %d is a self loop at node %d" % (idx, e.tail))
        if (e.tail, e.head) in seen:
            return Violation("duplicate_edge", "edge %d duplicates (%d,%d)" % (idx, e.tail, e.head))
        if (e.head, e.tail) in seen:
            return Violation(
                "antiparallel_pair",
                "edge %d (%d,%d) is antiparallel to an earlier edge" % (idx, e.tail, e.head),
            )
        seen.add((e.tail, e.head))
    for idx, e in enumerate(net.edges):
        if e.capacity is not None and e.capacity < 0:
            return Violation("negative_capacity", "edge %d has capacity %s" % (idx, e.capacity))
    if len(net.budgets) != net.node_count:
        return Violation("budget_imbalance", "budget list length differs from node count")
    total = sum(net.budgets, Fraction(0))
    if total != 0:
        return Violation("budget_imbalance", "budgets sum to %s, not zero" % total)
    if not _weakly_connected(net.node_count, net.edges):
        warnings.warn("network is not weakly connected", stacklevel=2)
    return None


def validate_instance(inst: SmoothedInstance) -> Optional[Violation]:
    """Validate a smoothed instance: network invariants plus smoothing width."""
    bad = validate_network(inst.network)
    if bad is not None:
        return bad
    if inst.phi <= 0:
        return Violation("bad_phi", "phi must be positive, got %s" % inst.phi)
    floor = Fraction(1) / inst.phi
    for idx, interval in enumerate(inst.intervals):
        if interval.width < floor:
            return Violation(
                "interval_too_narrow",
                "edge %d has width %s below 1/phi = %s" % (idx, interval.width, floor),
            )
    if inst.starting_flow is not None:
        bad_flow = check_feasible(inst.network, inst.starting_flow)
        if bad_flow is not None:
            return bad_flow
    return None


def residual(net: FlowNetwork, flow: Flow) -> ResidualNetwork:
    """Residual network of ``flow``: forward edges with spare capacity,
    backward edges with cancellable flow at negated cost.

    Raises ``CapacityViolation`` if the flow breaks a capacity bound.
    """
    if len(flow) != net.edge_count:
        raise ValueError("flow has %d values for %d edges" % (len(flow), net.edge_count))
    out = []
    for idx, e in enumerate(net.edges):
        f = flow[idx]
        if f < 0:
            raise CapacityViolation("edge %d carries negative flow %s" % (idx, f))
        if e.capacity is not None and f > e.capacity:
            raise CapacityViolation(
                "edge %d carries %s above capacity %s" % (idx, f, e.capacity)
            )
        if e.capacity is None:
            out.append(ResidualEdge(e.tail, e.head, None, e.cost, idx, True))
        elif f < e.capacity:
            out.append(ResidualEdge(e.tail, e.head, e.capacity - f, e.cost, idx, True))
        if f > 0:
            out.append(ResidualEdge(e.head, e.tail, f, -e.cost, idx, False))
    return ResidualNetwork(node_count=net.node_count, edges=tuple(out))


def flow_cost(net: FlowNetwork, flow: Flow) -> Fraction:
    """Total cost sum(cost(e) * flow(e)), exact."""
    if len(flow) != net.edge_count:
        raise ValueError("flow has %d values for %d edges" % (len(flow), net.edge_count))
    return sum((e.cost * flow[idx] for idx, e in enumerate(net.edges)), Fraction(0))


def check_feasible(net: FlowNetwork, flow: Flow) -> Optional[Violation]:
    """Check capacity bounds and conservation; ``None`` means feasible."""
    if len(flow) != net.edge_count:
        raise ValueError("flow has %d values for %d edges" % (len(flow), net.edge_count))
    for idx, e in enumerate(net.edges):
        f = flow[idx]
        if f < 0 or (e.capacity is not None and f > e.capacity):
            return Violation("capacity", "edge %d carries %s" % (idx, f))
    balance = list(net.budgets)
    for idx, e in enumerate(net.edges):
        f = flow[idx]
        balance[e.tail] -= f
        balance[e.head] += f
    for v in range(net.node_count):
        if balance[v] != 0:
            return Violation(
                "conservation",
                "node %s is off by %s" % (net.name_of(v), balance[v]),
            )
    return None


def augment_cycle(net: FlowNetwork, flow: Flow, cycle: Cycle) -> tuple[Flow, Fraction]:
    """Push the maximum possible amount around ``cycle``.

    The amount is the minimum residual capacity over the cycle edges,
    recomputed from ``flow`` rather than trusted from the cycle object.
    Returns the new flow and the amount pushed.
    """
    if len(cycle.edges) == 0:
        raise EmptyCycleError("cannot augment along an empty cycle")
    delta: Capacity = None
    for re in cycle.edges:
        e = net.edges[re.edge_id]
        f = flow[re.edge_id]
        if re.forward:
            headroom = None if e.capacity is None else e.capacity - f
        else:
            headroom = f
        if headroom is not None and headroom <= 0:
            raise ZeroResidualCapacityError(
                "cycle edge over network edge %d has no residual capacity" % re.edge_id
            )
        if headroom is not None and (delta is None or headroom < delta):
            delta = headroom
    if delta is None:
        raise UnboundedCycleError("every cycle edge is uncapacitated; cost is unbounded")
    values = list(flow.values)
    for re in cycle.edges:
        if re.forward:
            values[re.edge_id] += delta
        else:
            values[re.edge_id] -= delta
    return Flow(tuple(values)), delta


def verify_optimality(net: FlowNetwork, flow: Flow) -> Optional[Cycle]:
    """Return ``None`` if ``flow`` is minimum-cost, else a witness.

    A feasible flow is optimal exactly when its residual network has no
    negative-cost cycle; the witness returned is such a cycle, found by
    label correcting from a virtual source attached to every node.
    """
    r = residual(net, flow)
    n = r.node_count
    if n == 0:
        return None
    dist = [Fraction(0)] * n
    pred: list[Optional[ResidualEdge]] = [None] * n
    touched = None
    for _ in range(n):
        changed = False
        for e in r.edges:
            candidate = dist[e.tail] + e.cost
            if candidate < dist[e.head]:
                dist[e.head] = candidate
                pred[e.head] = e
                changed = True
                touched = e.head
        if not changed:
            return None
    # Still relaxing after n passes: the predecessor chain from the last
    # touched node must contain a negative cycle.
    node = touched
    for _ in range(n):
        node = pred[node].tail
    edges = []
    cursor = node
    while True:
        e = pred[cursor]
        edges.append(e)
        cursor = e.tail
        if cursor == node:
            break
    edges.reverse()
    witness = Cycle.from_edges(edges)
    if witness.total_cost >= 0:
        raise FlowLabError("internal error: witness cycle is not negative")
    return witness
