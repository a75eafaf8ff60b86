"""Integral maximum flow and feasible flow with edge demands.

Edmonds-Karp (BFS augmenting paths with deterministic tie-breaks) gives
integral maximum flows; demands are handled by the standard two-phase
reduction that adds one super-source, one super-sink and a circulation edge.
Infinite capacity is symbolic (``None``), never a large number.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .errors import InfeasibleDemands

__all__ = ["FlowNetwork", "IntegralFlow", "max_flow_integral", "feasible_flow_with_demands"]


@dataclass
class FlowNetwork:
    """Directed network; capacities are non-negative ints or None (infinity)."""

    num_nodes: int
    source: int
    sink: int
    edges: list[tuple[int, int, Optional[int], int]] = field(default_factory=list)

    def add_edge(self, u: int, v: int, capacity: Optional[int], demand: int = 0) -> int:
        if not (0 <= u < self.num_nodes and 0 <= v < self.num_nodes):
            raise ValueError("edge endpoint out of range")
        if capacity is not None and capacity < 0:
            raise ValueError("negative capacity")
        if demand < 0 or (capacity is not None and demand > capacity):
            raise ValueError("demand must satisfy 0 <= demand <= capacity")
        self.edges.append((u, v, capacity, demand))
        return len(self.edges) - 1


@dataclass(frozen=True)
class IntegralFlow:
    flows: tuple[int, ...]  # per edge id
    value: int


class _Residual:
    """Residual graph over original edges; supports lower bounds in phase 2."""

    def __init__(self, num_nodes: int, edges, flows, demands):
        self.edges = edges
        self.flows = flows
        self.demands = demands
        # adjacency sorted by (neighbor, edge id) for deterministic BFS
        adj: list[list[tuple[int, int, bool]]] = [[] for _ in range(num_nodes)]
        for e, (u, v, _cap, _d) in enumerate(edges):
            adj[u].append((v, e, True))   # forward residual
            adj[v].append((u, e, False))  # backward residual
        self.adj = [sorted(lst) for lst in adj]

    def residual(self, e: int, forward: bool) -> Optional[int]:
        u, v, cap, _d = self.edges[e]
        if forward:
            return None if cap is None else cap - self.flows[e]
        return self.flows[e] - self.demands[e]

    def augment(self, s: int, t: int) -> int:
        """One shortest augmenting path; returns the pushed amount (0 if none)."""
        parent: list[Optional[tuple[int, int, bool]]] = [None] * len(self.adj)
        seen = [False] * len(self.adj)
        seen[s] = True
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if u == t:
                break
            for v, e, fwd in self.adj[u]:
                if seen[v]:
                    continue
                r = self.residual(e, fwd)
                if r is None or r > 0:
                    seen[v] = True
                    parent[v] = (u, e, fwd)
                    queue.append(v)
        if not seen[t]:
            return 0
        # bottleneck
        bottleneck = None
        node = t
        while node != s:
            u, e, fwd = parent[node]
            r = self.residual(e, fwd)
            if r is not None and (bottleneck is None or r < bottleneck):
                bottleneck = r
            node = u
        if bottleneck is None:
            raise ValueError("augmenting path with unbounded capacity; flow is unbounded")
        node = t
        while node != s:
            u, e, fwd = parent[node]
            self.flows[e] += bottleneck if fwd else -bottleneck
            node = u
        return bottleneck

    def run(self, s: int, t: int) -> int:
        total = 0
        while True:
            pushed = self.augment(s, t)
            if pushed == 0:
                return total
            total += pushed


def max_flow_integral(net: FlowNetwork) -> IntegralFlow:
    """Integral maximum flow on a demand-free network.

    Requires every source-incident edge to have finite capacity so the
    maximum is finite.
    """
    for u, _v, cap, d in net.edges:
        if d != 0:
            raise ValueError("max_flow_integral requires all demands zero")
        if u == net.source and cap is None:
            raise ValueError("source-incident edges must have finite capacity")
    flows = [0] * len(net.edges)
    res = _Residual(net.num_nodes, net.edges, flows, [0] * len(net.edges))
    value = res.run(net.source, net.sink)
    return IntegralFlow(flows=tuple(flows), value=value)


def feasible_flow_with_demands(net: FlowNetwork) -> IntegralFlow:
    """Integral maximum flow respecting edge demands.

    Phase 1 finds a feasible flow via the standard reduction (super source
    and sink plus a sink-to-source circulation edge); phase 2 augments to a
    maximum source-to-sink flow whose backward residuals respect demands.
    Raises :class:`InfeasibleDemands` when no flow meets all demands.
    """
    n = net.num_nodes
    super_s, super_t = n, n + 1
    aux = FlowNetwork(num_nodes=n + 2, source=super_s, sink=super_t)
    excess = [0] * n  # demand in minus demand out
    for u, v, cap, d in net.edges:
        aux.add_edge(u, v, None if cap is None else cap - d, 0)
        if d:
            excess[v] += d
            excess[u] -= d
    circ = aux.add_edge(net.sink, net.source, None, 0)
    need = 0
    for node, ex in enumerate(excess):
        if ex > 0:
            aux.add_edge(super_s, node, ex, 0)
            need += ex
        elif ex < 0:
            aux.add_edge(node, super_t, -ex, 0)

    flows_aux = [0] * len(aux.edges)
    res = _Residual(aux.num_nodes, aux.edges, flows_aux, [0] * len(aux.edges))
    got = res.run(super_s, super_t)
    if got < need:
        raise InfeasibleDemands(f"demands require {need} units, only {got} routable")

    flows = [flows_aux[e] + net.edges[e][3] for e in range(len(net.edges))]
    value = flows_aux[circ]

    # phase 2: augment source -> sink keeping every flow above its demand
    res2 = _Residual(n, net.edges, flows, [d for (_u, _v, _c, d) in net.edges])
    value += res2.run(net.source, net.sink)
    return IntegralFlow(flows=tuple(flows), value=value)
