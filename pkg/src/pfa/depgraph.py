"""Dependency graph over variables: edge <=> the pair failed the independence test.

Nodes are 1-based variable ids.  Verdicts are memoized per unordered pair in
a shared cache so no pair is ever tested twice across batches, relevance
filtering and follow-up queries.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .binning import DiscretizedFeature
from .stats import DEFAULT_MIN_EXPECTED, IndependenceVerdict, is_independent


class IndependenceCache:
    """Memoized pairwise independence verdicts over a fixed discretization."""

    def __init__(
        self,
        features: dict[int, DiscretizedFeature],
        alpha: float,
        min_expected: float = DEFAULT_MIN_EXPECTED,
        dof_mode: str = "independence",
    ):
        self.features = features
        self.alpha = alpha
        self.min_expected = min_expected
        self.dof_mode = dof_mode
        self.verdicts: dict[tuple[int, int], IndependenceVerdict] = {}
        self.test_calls = 0

    @staticmethod
    def _key(i: int, j: int) -> tuple[int, int]:
        return (i, j) if i < j else (j, i)

    def cached(self, i: int, j: int) -> IndependenceVerdict | None:
        return self.verdicts.get(self._key(i, j))

    def _compute(self, key: tuple[int, int]) -> IndependenceVerdict:
        self.test_calls += 1
        i, j = key
        return is_independent(
            self.features[i],
            self.features[j],
            self.alpha,
            self.min_expected,
            self.dof_mode,
        )

    def verdict(self, i: int, j: int) -> IndependenceVerdict:
        if i == j:
            raise ValueError(f"no self-test for variable {i}")
        key = self._key(i, j)
        found = self.verdicts.get(key)
        if found is None:
            found = self.verdicts[key] = self._compute(key)
        return found

    def compute_pairs(self, pairs: list[tuple[int, int]], threads: int = 1) -> None:
        """Fill the cache for the given pairs, optionally in parallel.

        Results are inserted in the submitted order regardless of thread
        scheduling, so the cache contents are deterministic.
        """
        missing = []
        seen = set()
        for i, j in pairs:
            key = self._key(i, j)
            if key not in self.verdicts and key not in seen:
                seen.add(key)
                missing.append(key)
        if not missing:
            return
        if threads > 1:
            self.test_calls += len(missing)
            with ThreadPoolExecutor(max_workers=threads) as pool:
                chunk = max(1, len(missing) // (threads * 4))
                results = pool.map(
                    lambda key: is_independent(
                        self.features[key[0]],
                        self.features[key[1]],
                        self.alpha,
                        self.min_expected,
                        self.dof_mode,
                    ),
                    missing,
                    chunksize=chunk,
                )
                for key, verdict in zip(missing, results):
                    self.verdicts[key] = verdict
        else:
            for key in missing:
                self.verdicts[key] = self._compute(key)


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph with induced-subgraph semantics."""

    nodes: tuple[int, ...]
    adjacency: dict[int, frozenset[int]] = field(compare=False)

    @classmethod
    def from_edges(cls, nodes, edges) -> "Graph":
        nodes = tuple(sorted(nodes))
        node_set = set(nodes)
        neighbors: dict[int, set[int]] = {n: set() for n in nodes}
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if u not in node_set or v not in node_set:
                raise ValueError(f"edge ({u}, {v}) references an unknown node")
            neighbors[u].add(v)
            neighbors[v].add(u)
        return cls(nodes, {n: frozenset(s) for n, s in neighbors.items()})

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in self.nodes for v in sorted(self.adjacency[u]) if u < v]

    def degree(self, node: int) -> int:
        return len(self.adjacency[node])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def induced(self, members) -> "Graph":
        members = frozenset(members)
        unknown = members - set(self.nodes)
        if unknown:
            raise ValueError(f"nodes {sorted(unknown)} not in graph")
        return Graph(
            tuple(sorted(members)),
            {n: self.adjacency[n] & members for n in members},
        )


def is_complete(g: Graph) -> bool:
    """True iff every pair of distinct nodes is adjacent; singletons qualify."""
    n = g.n_nodes
    return all(len(g.adjacency[v]) == n - 1 for v in g.nodes)


def connected_components(g: Graph) -> list[Graph]:
    """Maximal connected induced subgraphs, ordered by smallest member id."""
    unvisited = set(g.nodes)
    components = []
    for start in g.nodes:  # nodes are sorted, so components come out ordered
        if start not in unvisited:
            continue
        stack = [start]
        unvisited.discard(start)
        members = {start}
        while stack:
            u = stack.pop()
            for v in g.adjacency[u]:
                if v in unvisited:
                    unvisited.discard(v)
                    members.add(v)
                    stack.append(v)
        components.append(g.induced(members))
    return components


def is_connected(g: Graph) -> bool:
    if g.n_nodes <= 1:
        return True
    return len(connected_components(g)) == 1


def build_graph(cache: IndependenceCache, nodes, threads: int = 1) -> Graph:
    """Dependency graph over the given nodes; edge <=> not independent."""
    nodes = tuple(sorted(nodes))
    for n in nodes:
        if not cache.features[n].testable:
            raise ValueError(f"node {n} refers to a constant (untestable) variable")
    pairs = [(u, v) for idx, u in enumerate(nodes) for v in nodes[idx + 1 :]]
    cache.compute_pairs(pairs, threads)
    edges = [(u, v) for u, v in pairs if not cache.verdict(u, v).independent]
    return Graph.from_edges(nodes, edges)
