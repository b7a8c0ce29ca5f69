"""Shared verification helpers for dissection results."""

from itertools import combinations

from pfa.depgraph import Graph, connected_components, is_complete, is_connected
from pfa.dissect import DissectionResult


def assert_dissection_invariants(g: Graph, result: DissectionResult) -> None:
    """Check every structural guarantee a dissection must satisfy."""
    survivors = result.surviving_nodes
    removed = result.removed_nodes

    # partition: disjoint complete subgraphs plus removed nodes cover g
    assert survivors | removed == set(g.nodes)
    assert not survivors & removed
    total = sum(len(s) for s in result.complete_subgraphs)
    assert total == len(survivors), "complete subgraphs overlap"

    for subgraph in result.complete_subgraphs:
        assert is_complete(g.induced(subgraph))

    # no edge of g connects two distinct surviving subgraphs
    membership = {}
    for index, subgraph in enumerate(result.complete_subgraphs):
        for node in subgraph:
            membership[node] = index
    for u, v in g.edges():
        if u in membership and v in membership:
            assert membership[u] == membership[v], f"edge {u}-{v} crosses subgraphs"

    # each removed node separated at least two of the parts it disconnected
    for removal in result.removals:
        component = g.induced(removal.from_component)
        assert is_connected(component)
        rest = component.induced(set(component.nodes) - removal.nodes)
        parts = connected_components(rest)
        assert len(parts) >= 2, "cut removal must disconnect its component"
        part_of = {}
        for index, part in enumerate(parts):
            for node in part.nodes:
                part_of[node] = index
        for node in removal.nodes:
            touched = {part_of[n] for n in component.adjacency[node] if n in part_of}
            assert len(touched) >= 2, f"removed node {node} is not a linker"

    # reachability: every removed node has a path in g from a survivor
    if removed:
        assert survivors, "nodes removed but nothing survived"
        seen = set(survivors)
        stack = list(survivors)
        while stack:
            u = stack.pop()
            for v in g.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        assert removed <= seen, "removed node unreachable from the survivors"


def assert_cut_minimality(g: Graph, result: DissectionResult, max_size: int = 3) -> None:
    """No proper subset of a removed cut disconnects its component."""
    for removal in result.removals:
        if len(removal.nodes) > max_size:
            continue
        component = g.induced(removal.from_component)
        for smaller in range(len(removal.nodes)):
            for subset in combinations(sorted(removal.nodes), smaller):
                rest = component.induced(set(component.nodes) - set(subset))
                assert is_connected(rest), (
                    f"subset {subset} of cut {sorted(removal.nodes)} already disconnects"
                )
