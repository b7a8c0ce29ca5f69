"""Exact minimum node cuts and iterative graph dissection.

The cut is computed by vertex splitting: each node v becomes an arc
v_in -> v_out of capacity one, each undirected edge becomes two
infinite-capacity arcs, and a BFS augmenting-path max flow between
candidate terminal pairs yields the vertex connectivity exactly.  The
candidate schedule (a fixed minimum-degree node against its non-neighbors,
plus its pairwise non-adjacent neighbors) is the standard exactness
argument: some minimum cut either excludes that node or separates two of
its neighbors.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .depgraph import Graph, connected_components, is_complete, is_connected

_INF = 1 << 30

BRUTE_FORCE_NODE_LIMIT = 14


class CompleteGraphError(ValueError):
    """Raised when a node cut is requested for a complete graph (none exists)."""


@dataclass(frozen=True)
class Removal:
    """One dissection step: the cut removed and the component it came from."""

    step: int
    nodes: frozenset[int]
    from_component: frozenset[int]


@dataclass(frozen=True)
class DissectionResult:
    complete_subgraphs: tuple[frozenset[int], ...]
    removals: tuple[Removal, ...]

    @property
    def surviving_nodes(self) -> frozenset[int]:
        return frozenset().union(*self.complete_subgraphs) if self.complete_subgraphs else frozenset()

    @property
    def removed_nodes(self) -> frozenset[int]:
        return frozenset().union(*(r.nodes for r in self.removals)) if self.removals else frozenset()


def _node_ranking(nodes, rng: random.Random | None) -> dict[int, int]:
    """Deterministic iteration rank; a tie seed permutes ids first."""
    ordered = sorted(nodes)
    if rng is not None:
        rng.shuffle(ordered)
    return {node: pos for pos, node in enumerate(ordered)}


class _FlowNetwork:
    """Unit-capacity vertex-split network for one source/sink query."""

    def __init__(self, g: Graph, order: dict[int, int]):
        # v -> (2r, 2r+1) with r the node's rank; in->out carries capacity 1
        self.order = order
        n = g.n_nodes
        self.size = 2 * n
        self.base_cap = [dict() for _ in range(self.size)]
        for v in g.nodes:
            r = order[v]
            self.base_cap[2 * r][2 * r + 1] = 1
        for u, v in g.edges():
            ru, rv = order[u], order[v]
            self.base_cap[2 * ru + 1][2 * rv] = _INF
            self.base_cap[2 * rv + 1][2 * ru] = _INF

    def min_vertex_cut(self, s: int, t: int) -> set[int]:
        """Smallest vertex set separating non-adjacent s and t, as ranks."""
        source, sink = 2 * self.order[s] + 1, 2 * self.order[t]
        cap = [dict(row) for row in self.base_cap]
        # ensure reverse arcs exist for residual updates
        for u in range(self.size):
            for v in self.base_cap[u]:
                cap[v].setdefault(u, 0)

        def bfs_path():
            parent = {source: None}
            queue = deque([source])
            while queue:
                u = queue.popleft()
                if u == sink:
                    break
                for v, c in cap[u].items():
                    if c > 0 and v not in parent:
                        parent[v] = u
                        queue.append(v)
            if sink not in parent:
                return None
            path = []
            v = sink
            while parent[v] is not None:
                path.append((parent[v], v))
                v = parent[v]
            return path

        while True:
            path = bfs_path()
            if path is None:
                break
            bottleneck = min(cap[u][v] for u, v in path)
            for u, v in path:
                cap[u][v] -= bottleneck
                cap[v][u] += bottleneck

        # residual reachability from the source; saturated internal arcs
        # crossing the frontier are the cut vertices
        reach = {source}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v, c in cap[u].items():
                if c > 0 and v not in reach:
                    reach.add(v)
                    queue.append(v)
        cut_ranks = set()
        for rank in range(self.size // 2):
            if 2 * rank in reach and 2 * rank + 1 not in reach:
                cut_ranks.add(rank)
        return cut_ranks


def min_node_cut(g: Graph, tie_seed: int | None = None) -> frozenset[int]:
    """A cardinality-minimal vertex set whose removal disconnects g.

    Returns the empty set for an already-disconnected graph.  Ties between
    equal-size cuts are resolved by a fixed candidate schedule; a tie seed
    permutes the node ordering to surface alternative valid cuts.
    """
    if g.n_nodes < 2:
        raise ValueError("min_node_cut needs at least 2 nodes")
    if is_complete(g):
        raise CompleteGraphError("complete graphs have no vertex cut")
    if not is_connected(g):
        return frozenset()

    rng = random.Random(tie_seed) if tie_seed is not None else None
    order = _node_ranking(g.nodes, rng)
    rank_to_node = {r: v for v, r in order.items()}
    network = _FlowNetwork(g, order)

    pivot = min(g.nodes, key=lambda v: (g.degree(v), order[v]))
    candidates: list[tuple[int, int]] = []
    non_neighbors = [
        v for v in g.nodes if v != pivot and not g.has_edge(pivot, v)
    ]
    candidates.extend((pivot, t) for t in sorted(non_neighbors, key=order.get))
    neighbors = sorted(g.adjacency[pivot], key=order.get)
    candidates.extend(
        (u, w) for u, w in combinations(neighbors, 2) if not g.has_edge(u, w)
    )
    if rng is not None:
        # the residual cut always hugs the source side; flipping terminals
        # per candidate exposes the equally valid sink-side cuts
        candidates = [
            (t, s) if rng.random() < 0.5 else (s, t) for s, t in candidates
        ]

    best: set[int] | None = None
    for s, t in candidates:
        cut = network.min_vertex_cut(s, t)
        if best is None or len(cut) < len(best):
            best = cut
            if len(best) == 1:
                break
    assert best is not None  # g is connected and incomplete
    return frozenset(rank_to_node[r] for r in best)


def brute_force_min_node_cut(g: Graph) -> frozenset[int]:
    """Oracle: enumerate subsets by ascending cardinality, lexicographic order."""
    if g.n_nodes > BRUTE_FORCE_NODE_LIMIT:
        raise ValueError(
            f"brute force limited to {BRUTE_FORCE_NODE_LIMIT} nodes, got {g.n_nodes}"
        )
    if g.n_nodes < 2:
        raise ValueError("min_node_cut needs at least 2 nodes")
    if is_complete(g):
        raise CompleteGraphError("complete graphs have no vertex cut")
    if not is_connected(g):
        return frozenset()
    nodes = sorted(g.nodes)
    for size in range(1, g.n_nodes - 1):
        for subset in combinations(nodes, size):
            remaining = g.induced(set(nodes) - set(subset))
            if not is_connected(remaining):
                return frozenset(subset)
    raise AssertionError("connected incomplete graph must have a cut")


def dissect(g: Graph, tie_seed: int | None = None) -> DissectionResult:
    """Iteratively remove minimal cuts until only complete subgraphs remain.

    Incomplete components are processed in ascending order of their
    smallest member id.  Splitting an already-disconnected component counts
    as removing the empty cut and is not logged.
    """
    complete: list[frozenset[int]] = []
    removals: list[Removal] = []
    pending = connected_components(g)
    step = 0
    while pending:
        pending.sort(key=lambda comp: comp.nodes[0])
        component = pending.pop(0)
        if is_complete(component):
            complete.append(frozenset(component.nodes))
            continue
        cut = min_node_cut(component, tie_seed)
        step += 1
        removals.append(Removal(step, cut, frozenset(component.nodes)))
        rest = component.induced(set(component.nodes) - cut)
        pending.extend(connected_components(rest))
    complete.sort(key=min)
    return DissectionResult(tuple(complete), tuple(removals))
