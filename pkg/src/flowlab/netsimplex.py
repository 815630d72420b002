"""Network simplex over explicit spanning-tree structures.

A structure partitions the edges into a spanning tree T and two
off-tree sets L (flow pinned at zero) and U (flow pinned at capacity).
The tree determines the flow and the node potentials; pivots swap one
violating off-tree edge into the tree and record exactly which cycle
was used, so runs can be compared against other algorithms edge by
edge.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional

from .core import (
    Flow,
    FlowLabError,
    FlowNetwork,
    IterationCapExceeded,
    UnboundedCycleError,
    Violation,
)
from .mmcc import default_iteration_cap

__all__ = [
    "InfeasibleStructureError",
    "SpanningTreeStructure",
    "PivotResult",
    "NsPivot",
    "NsTrace",
    "validate_structure",
    "tree_flow",
    "compute_potentials",
    "entering_edge",
    "pivot",
    "ns_solve",
    "basic_structure_from_flow",
    "nondegenerate_cycle_paths",
]


class InfeasibleStructureError(FlowLabError):
    """The tree structure does not induce a feasible flow."""


@dataclass(frozen=True)
class SpanningTreeStructure:
    """Partition of the edge ids into tree, lower, and upper sets.

    ``potentials`` is derived data (cached after computation) and is
    excluded from equality.
    """

    tree_edges: frozenset[int]
    lower: frozenset[int]
    upper: frozenset[int]
    root: int = 0
    potentials: Optional[tuple[Fraction, ...]] = field(default=None, compare=False)


def validate_structure(net: FlowNetwork, s: SpanningTreeStructure) -> Optional[Violation]:
    """Partition and spanning checks; ``None`` when the structure is sound."""
    m = net.edge_count
    ids = set(range(m))
    if s.tree_edges & s.lower or s.tree_edges & s.upper or s.lower & s.upper:
        return Violation("structure_overlap", "tree, lower, and upper sets overlap")
    if (s.tree_edges | s.lower | s.upper) != ids:
        return Violation("structure_incomplete", "some edge belongs to no set")
    if not (0 <= s.root < net.node_count):
        return Violation("bad_root", "root %d is not a node" % s.root)
    if len(s.tree_edges) != net.node_count - 1:
        return Violation(
            "tree_size",
            "tree has %d edges for %d nodes" % (len(s.tree_edges), net.node_count),
        )
    parent = list(range(net.node_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for idx in s.tree_edges:
        e = net.edges[idx]
        a, b = find(e.tail), find(e.head)
        if a == b:
            return Violation("tree_cycle", "tree edges contain a cycle")
        parent[a] = b
    for idx in s.upper:
        if net.edges[idx].capacity is None:
            return Violation("uncapacitated_upper", "edge %d in upper set has no capacity" % idx)
    return None


def _tree_adjacency(net: FlowNetwork, tree_edges: Iterable[int]):
    adj: list[list[tuple[int, int]]] = [[] for _ in range(net.node_count)]
    for idx in tree_edges:
        e = net.edges[idx]
        adj[e.tail].append((idx, e.head))
        adj[e.head].append((idx, e.tail))
    return adj


def _bfs_order(net: FlowNetwork, adj, root: int):
    """Visit order and per-node parent edge id (None at the root)."""
    order = [root]
    parent_edge: list[Optional[int]] = [None] * net.node_count
    seen = [False] * net.node_count
    seen[root] = True
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for idx, w in adj[v]:
            if not seen[w]:
                seen[w] = True
                parent_edge[w] = idx
                order.append(w)
                queue.append(w)
    if len(order) != net.node_count:
        raise InfeasibleStructureError("tree edges do not span every node")
    return order, parent_edge


def tree_flow(net: FlowNetwork, s: SpanningTreeStructure) -> Flow:
    """The unique flow with lower edges at 0, upper edges at capacity,
    and conservation enforced through the tree.

    Raises ``InfeasibleStructureError`` when a tree edge would have to
    carry a negative amount or exceed its capacity.
    """
    adj = _tree_adjacency(net, s.tree_edges)
    order, parent_edge = _bfs_order(net, adj, s.root)
    values: list[Optional[Fraction]] = [None] * net.edge_count
    # surplus[v]: amount that must still leave v through unresolved edges
    surplus = list(net.budgets)
    for idx in s.lower:
        values[idx] = Fraction(0)
    for idx in s.upper:
        cap = net.edges[idx].capacity
        if cap is None:
            raise InfeasibleStructureError("edge %d in upper set has no capacity" % idx)
        values[idx] = cap
        surplus[net.edges[idx].tail] -= cap
        surplus[net.edges[idx].head] += cap
    for v in reversed(order):
        idx = parent_edge[v]
        if idx is None:
            continue
        e = net.edges[idx]
        if e.tail == v:
            f = surplus[v]
            surplus[e.head] += f
        else:
            f = -surplus[v]
            surplus[e.tail] -= f
        values[idx] = f
    if surplus[s.root] != 0:
        raise InfeasibleStructureError("budgets do not balance through the tree")
    for idx in s.tree_edges:
        f = values[idx]
        cap = net.edges[idx].capacity
        if f < 0 or (cap is not None and f > cap):
            raise InfeasibleStructureError(
                "tree edge %d needs flow %s outside [0, %s]" % (idx, f, cap)
            )
    return Flow(tuple(values))


def compute_potentials(net: FlowNetwork, s: SpanningTreeStructure) -> tuple[Fraction, ...]:
    """Node potentials making every tree edge's reduced cost zero, with
    the root pinned at zero."""
    adj = _tree_adjacency(net, s.tree_edges)
    pot: list[Optional[Fraction]] = [None] * net.node_count
    pot[s.root] = Fraction(0)
    queue = deque([s.root])
    while queue:
        v = queue.popleft()
        for idx, w in adj[v]:
            if pot[w] is None:
                e = net.edges[idx]
                pot[w] = pot[v] - e.cost if e.tail == v else pot[v] + e.cost
                queue.append(w)
    if any(p is None for p in pot):
        raise InfeasibleStructureError("tree edges do not span every node")
    return tuple(pot)


def reduced_cost(net: FlowNetwork, potentials, edge_id: int) -> Fraction:
    e = net.edges[edge_id]
    return e.cost - potentials[e.tail] + potentials[e.head]


def entering_edge(net: FlowNetwork, s: SpanningTreeStructure) -> Optional[int]:
    """The violating off-tree edge with the largest absolute reduced
    cost, ties to the lowest edge id; ``None`` when the structure is
    optimal.

    Lower edges violate with negative reduced cost, upper edges with
    positive reduced cost.
    """
    pot = s.potentials if s.potentials is not None else compute_potentials(net, s)
    best_id: Optional[int] = None
    best_mag: Optional[Fraction] = None
    for idx in range(net.edge_count):
        if idx in s.lower:
            rc = reduced_cost(net, pot, idx)
            if rc >= 0:
                continue
            mag = -rc
        elif idx in s.upper:
            rc = reduced_cost(net, pot, idx)
            if rc <= 0:
                continue
            mag = rc
        else:
            continue
        if best_mag is None or mag > best_mag:
            best_mag = mag
            best_id = idx
    return best_id


def _tree_path(net: FlowNetwork, adj, start: int, goal: int):
    """Tree path as (edge id, traversed-forward) steps from start to goal."""
    parent: dict[int, Optional[tuple[int, int]]] = {start: None}
    queue = deque([start])
    while queue and goal not in parent:
        v = queue.popleft()
        for idx, w in adj[v]:
            if w not in parent:
                parent[w] = (v, idx)
                queue.append(w)
    if goal not in parent:
        raise InfeasibleStructureError("tree edges do not connect the pivot endpoints")
    steps = []
    node = goal
    while parent[node] is not None:
        prev, idx = parent[node]
        steps.append((idx, net.edges[idx].tail == prev))
        node = prev
    steps.reverse()
    return steps


@dataclass(frozen=True)
class PivotResult:
    structure: SpanningTreeStructure
    flow: Flow
    leaving: int
    amount: Fraction
    degenerate: bool
    cycle: tuple[tuple[int, bool], ...]
    entering_reduced_cost: Fraction


def pivot(
    net: FlowNetwork,
    s: SpanningTreeStructure,
    entering: int,
    flow: Optional[Flow] = None,
    *,
    strongly_feasible: bool = False,
    full_potential_recompute: bool = False,
) -> PivotResult:
    """Execute one pivot on ``entering``.

    The cycle is the entering edge plus the tree path between its
    endpoints, traversed in the direction that increases a lower
    entering edge and decreases an upper one.  The pushed amount is the
    smallest headroom on the cycle; whichever blocking edge the leaving
    rule picks swaps places with the entering edge.

    The default leaving rule takes the blocking edge of minimum
    ``leaving_rank``, ties to the lowest edge id.  With
    ``strongly_feasible`` the rule instead takes the last blocking edge
    met when walking the cycle from its apex (the path node nearest the
    root) along the augmentation direction, which is the classic
    anti-cycling choice and overrides the ranks.

    Potentials are updated by shifting the subtree cut off by the
    leaving edge; ``full_potential_recompute`` recomputes them from
    scratch instead, as a cross-check mode.
    """
    if flow is None:
        flow = tree_flow(net, s)
    pot = s.potentials if s.potentials is not None else compute_potentials(net, s)
    ent = net.edges[entering]
    rc = ent.cost - pot[ent.tail] + pot[ent.head]
    adj = _tree_adjacency(net, s.tree_edges)
    if entering in s.lower:
        cycle = [(entering, True)] + _tree_path(net, adj, ent.head, ent.tail)
    elif entering in s.upper:
        cycle = [(entering, False)] + _tree_path(net, adj, ent.tail, ent.head)
    else:
        raise ValueError("entering edge %d is already in the tree" % entering)

    rooms: list[Optional[Fraction]] = []
    delta: Optional[Fraction] = None
    for idx, fwd in cycle:
        edge = net.edges[idx]
        if fwd:
            room = None if edge.capacity is None else edge.capacity - flow[idx]
        else:
            room = flow[idx]
        rooms.append(room)
        if room is not None and (delta is None or room < delta):
            delta = room
    if delta is None:
        raise UnboundedCycleError("pivot cycle has unlimited headroom; cost is unbounded")

    blocking = [pos for pos, room in enumerate(rooms) if room == delta]
    if strongly_feasible:
        order, parent_edge = _bfs_order(net, adj, s.root)
        depth = [0] * net.node_count
        for v in order:
            if parent_edge[v] is not None:
                e = net.edges[parent_edge[v]]
                other = e.head if e.tail == v else e.tail
                depth[v] = depth[other] + 1
        starts = [net.edges[idx].tail if fwd else net.edges[idx].head for idx, fwd in cycle]
        apex_pos = min(range(len(cycle)), key=lambda i: depth[starts[i]])
        rotation = list(range(apex_pos, len(cycle))) + list(range(apex_pos))
        blocking_set = set(blocking)
        leaving_pos = [pos for pos in rotation if pos in blocking_set][-1]
    else:
        leaving_pos = min(
            blocking, key=lambda pos: (net.edges[cycle[pos][0]].leaving_rank, cycle[pos][0])
        )
    leaving, leaving_fwd = cycle[leaving_pos]

    if delta != 0:
        new_values = list(flow.values)
        for idx, fwd in cycle:
            if fwd:
                new_values[idx] += delta
            else:
                new_values[idx] -= delta
        new_flow = Flow(tuple(new_values))
    else:
        new_flow = flow

    lower = set(s.lower)
    upper = set(s.upper)
    lower.discard(entering)
    upper.discard(entering)
    if leaving == entering:
        # bounced straight back out at its other bound
        if cycle[0][1]:
            upper.add(entering)
        else:
            lower.add(entering)
        new_structure = SpanningTreeStructure(
            tree_edges=s.tree_edges,
            lower=frozenset(lower),
            upper=frozenset(upper),
            root=s.root,
            potentials=pot,
        )
    else:
        tree = set(s.tree_edges)
        tree.remove(leaving)
        tree.add(entering)
        # a forward-traversed blocker filled up, a backward one drained
        if leaving_fwd:
            upper.add(leaving)
        else:
            lower.add(leaving)
        new_structure = SpanningTreeStructure(
            tree_edges=frozenset(tree),
            lower=frozenset(lower),
            upper=frozenset(upper),
            root=s.root,
        )
        if full_potential_recompute:
            new_pot = compute_potentials(net, new_structure)
        else:
            # removing the leaving edge splits the old tree; the side away
            # from the root shifts by a constant fixed by the entering edge
            far = _far_side(net, s.tree_edges, leaving, s.root)
            if far[ent.tail]:
                shift = (pot[ent.head] + ent.cost) - pot[ent.tail]
            else:
                shift = (pot[ent.tail] - ent.cost) - pot[ent.head]
            new_pot = tuple(
                pot[v] + shift if far[v] else pot[v] for v in range(net.node_count)
            )
        new_structure = replace(new_structure, potentials=new_pot)

    return PivotResult(
        structure=new_structure,
        flow=new_flow,
        leaving=leaving,
        amount=delta,
        degenerate=(delta == 0),
        cycle=tuple(cycle),
        entering_reduced_cost=rc,
    )


def _far_side(net: FlowNetwork, tree_edges, removed: int, root: int):
    """Membership mask of the component not containing the root after
    deleting ``removed`` from the tree."""
    adj = _tree_adjacency(net, (idx for idx in tree_edges if idx != removed))
    reachable = [False] * net.node_count
    reachable[root] = True
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for _, w in adj[v]:
            if not reachable[w]:
                reachable[w] = True
                queue.append(w)
    return [not r for r in reachable]


@dataclass(frozen=True)
class NsPivot:
    entering: int
    leaving: int
    amount: Fraction
    degenerate: bool
    entering_reduced_cost: Fraction
    cycle: tuple[tuple[int, bool], ...]


@dataclass
class NsTrace:
    pivots: list[NsPivot] = field(default_factory=list)
    final_flow: Optional[Flow] = None
    final_structure: Optional[SpanningTreeStructure] = None
    termination: str = "optimal"

    @property
    def pivot_count(self) -> int:
        return len(self.pivots)

    @property
    def nondegenerate_count(self) -> int:
        return sum(1 for p in self.pivots if not p.degenerate)

    @property
    def degenerate_count(self) -> int:
        return sum(1 for p in self.pivots if p.degenerate)


def ns_solve(
    net: FlowNetwork,
    structure: SpanningTreeStructure,
    *,
    iteration_cap: Optional[int] = None,
    strongly_feasible: bool = False,
    full_potential_recompute: bool = False,
) -> NsTrace:
    """Pivot until no off-tree edge violates its optimality condition.

    Every pivot is recorded with its cycle, so the sequence of
    augmentations can be replayed or compared.  Hitting the safety cap
    raises ``IterationCapExceeded`` with the partial trace attached.
    """
    bad = validate_structure(net, structure)
    if bad is not None:
        raise InfeasibleStructureError("%s: %s" % (bad.kind, bad.detail))
    flow = tree_flow(net, structure)
    if structure.potentials is None:
        structure = replace(structure, potentials=compute_potentials(net, structure))
    if iteration_cap is None:
        iteration_cap = default_iteration_cap(net.node_count, net.edge_count)

    trace = NsTrace()
    while True:
        candidate = entering_edge(net, structure)
        if candidate is None:
            break
        if len(trace.pivots) >= iteration_cap:
            trace.termination = "iteration_cap_hit"
            trace.final_flow = flow
            trace.final_structure = structure
            raise IterationCapExceeded(
                "no optimum after %d pivots" % iteration_cap, trace=trace
            )
        result = pivot(
            net,
            structure,
            candidate,
            flow,
            strongly_feasible=strongly_feasible,
            full_potential_recompute=full_potential_recompute,
        )
        trace.pivots.append(
            NsPivot(
                entering=candidate,
                leaving=result.leaving,
                amount=result.amount,
                degenerate=result.degenerate,
                entering_reduced_cost=result.entering_reduced_cost,
                cycle=result.cycle,
            )
        )
        structure = result.structure
        flow = result.flow
    trace.final_flow = flow
    trace.final_structure = structure
    trace.termination = "optimal"
    return trace


def basic_structure_from_flow(
    net: FlowNetwork, flow: Flow, root: int = 0
) -> tuple[SpanningTreeStructure, Flow]:
    """Turn a feasible flow into a tree structure inducing it.

    Cycles made of edges strictly between their bounds are pushed flat
    (choosing the direction that does not increase cost) until the
    strictly-interior edges form a forest; that forest is extended to a
    spanning tree and the remaining edges land in the lower or upper
    set according to their value.
    """
    values = list(flow.values)

    def is_free(idx):
        cap = net.edges[idx].capacity
        return values[idx] > 0 and (cap is None or values[idx] < cap)

    while True:
        cycle = _free_cycle(net, [idx for idx in range(net.edge_count) if is_free(idx)])
        if cycle is None:
            break
        cost = sum(
            (net.edges[idx].cost if fwd else -net.edges[idx].cost for idx, fwd in cycle),
            Fraction(0),
        )
        if cost > 0:
            cycle = [(idx, not fwd) for idx, fwd in cycle]
            cost = -cost
        delta = _cycle_headroom(net, values, cycle)
        if delta is None:
            if cost < 0:
                raise UnboundedCycleError("free cycle with negative cost and no cap")
            cycle = [(idx, not fwd) for idx, fwd in cycle]
            delta = _cycle_headroom(net, values, cycle)
        for idx, fwd in cycle:
            values[idx] += delta if fwd else -delta

    parent = list(range(net.node_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = []
    free_ids = [idx for idx in range(net.edge_count) if is_free(idx)]
    for idx in free_ids + [i for i in range(net.edge_count) if i not in set(free_ids)]:
        e = net.edges[idx]
        a, b = find(e.tail), find(e.head)
        if a != b:
            parent[a] = b
            tree.append(idx)
    if len(tree) != net.node_count - 1:
        raise InfeasibleStructureError(
            "network is not weakly connected; no spanning tree exists"
        )
    tree_set = frozenset(tree)
    lower, upper = set(), set()
    for idx in range(net.edge_count):
        if idx in tree_set:
            continue
        if values[idx] == 0:
            lower.add(idx)
        else:
            cap = net.edges[idx].capacity
            if cap is None or values[idx] != cap:
                raise FlowLabError("internal error: off-tree edge still strictly inside bounds")
            upper.add(idx)
    structure = SpanningTreeStructure(
        tree_edges=tree_set, lower=frozenset(lower), upper=frozenset(upper), root=root
    )
    structure = replace(structure, potentials=compute_potentials(net, structure))
    return structure, Flow(tuple(values))


def _cycle_headroom(net, values, cycle):
    delta = None
    for idx, fwd in cycle:
        cap = net.edges[idx].capacity
        room = (None if cap is None else cap - values[idx]) if fwd else values[idx]
        if room is not None and (delta is None or room < delta):
            delta = room
    return delta


def _free_cycle(net, free_ids):
    """Some undirected cycle among the given edges, or None.

    Returned as (edge id, forward) steps forming a directed traversal.
    """
    adj: dict[int, list[tuple[int, int]]] = {}
    for idx in free_ids:
        e = net.edges[idx]
        adj.setdefault(e.tail, []).append((idx, e.head))
        adj.setdefault(e.head, []).append((idx, e.tail))
    state: dict[int, int] = {}
    parent: dict[int, Optional[tuple[int, int]]] = {}

    def walk(v):
        state[v] = 1
        for idx, w in adj.get(v, ()):
            if parent.get(v) is not None and parent[v][1] == idx:
                continue
            if state.get(w, 0) == 1:
                # back edge closes a cycle through the parent chain
                steps = [(idx, net.edges[idx].tail == v)]
                node = v
                while node != w:
                    prev, pidx = parent[node]
                    steps.append((pidx, net.edges[pidx].head == node))
                    node = prev
                steps.reverse()
                return steps
            if state.get(w, 0) == 0:
                parent[w] = (v, idx)
                got = walk(w)
                if got is not None:
                    return got
        state[v] = 2
        return None

    for v in list(adj):
        if state.get(v, 0) == 0:
            parent[v] = None
            got = walk(v)
            if got is not None:
                return got
    return None


def nondegenerate_cycle_paths(
    net: FlowNetwork, trace: NsTrace, skip_nodes: Iterable[int] = ()
) -> list[tuple[tuple[int, ...], Fraction]]:
    """Directed node paths carved out of the non-degenerate pivot cycles.

    Arcs touching ``skip_nodes`` are dropped; the rest of each cycle
    must chain into a single path, which is returned with the pivot's
    augmentation amount.  With no skipped nodes the "path" is the full
    cycle starting at the entering edge's tail.
    """
    skip = set(skip_nodes)
    out = []
    for p in trace.pivots:
        if p.degenerate:
            continue
        arcs = []
        for idx, fwd in p.cycle:
            e = net.edges[idx]
            a, b = (e.tail, e.head) if fwd else (e.head, e.tail)
            if a in skip or b in skip:
                continue
            arcs.append((a, b))
        if not arcs:
            raise ValueError("pivot cycle vanished entirely after skipping nodes")
        successor = dict(arcs)
        if len(successor) != len(arcs):
            raise ValueError("pivot cycle arcs do not form a simple chain")
        heads = {b for _, b in arcs}
        start_candidates = [a for a, _ in arcs if a not in heads]
        if not start_candidates:
            start = arcs[0][0]  # unbroken cycle
        elif len(start_candidates) == 1:
            start = start_candidates[0]
        else:
            raise ValueError("pivot cycle splits into several chains after skipping nodes")
        path = [start]
        node = start
        for _ in range(len(arcs)):
            node = successor[node]
            path.append(node)
            if node == start:
                break
        if len(path) != len(arcs) + 1:
            raise ValueError("pivot cycle arcs do not chain into one path")
        out.append((tuple(path), p.amount))
    return out
