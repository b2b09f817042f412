"""Decomposition of a graph's edges into linear forests."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import InputError
from .sources import Graph

__all__ = [
    "LinearForestDecomposition",
    "DecompositionError",
    "decompose_linear_forests",
    "forest_paths",
    "linear_arboricity_bounds",
]


class DecompositionError(RuntimeError):
    pass


@dataclass(frozen=True)
class LinearForestDecomposition:
    forests: tuple[frozenset[tuple[int, int]], ...]
    paths: tuple[tuple[tuple[int, ...], ...], ...]

    @classmethod
    def from_edge_sets(
        cls, graph: Graph, edge_sets: Sequence[Iterable[tuple[int, int]]], pad_to: int = 0
    ) -> "LinearForestDecomposition":
        """Validate ``edge_sets`` against ``graph`` and derive canonical paths."""
        forests = [frozenset((min(u, v), max(u, v)) for u, v in es) for es in edge_sets]
        while len(forests) < pad_to:
            forests.append(frozenset())
        seen: set[tuple[int, int]] = set()
        for t, f in enumerate(forests, start=1):
            overlap = seen & f
            if overlap:
                raise InputError(f"forest {t} repeats edges {sorted(overlap)}")
            seen |= f
        if seen != set(graph.edges):
            missing = sorted(set(graph.edges) - seen)
            extra = sorted(seen - set(graph.edges))
            raise InputError(f"forests do not partition the edges (missing {missing}, extra {extra})")
        return cls(tuple(forests), tuple(forest_paths(f) for f in forests))

    def uncovered(self, graph: Graph, t: int) -> tuple[int, ...]:
        """Vertices not incident to any edge of forest ``t`` (0-based), ascending."""
        touched = {v for e in self.forests[t] for v in e}
        return tuple(v for v in range(1, graph.n_vertices + 1) if v not in touched)


def forest_paths(edges: Iterable[tuple[int, int]]) -> tuple[tuple[int, ...], ...]:
    """Paths of a linear forest, ordered by minimum vertex and starting at the
    smaller endpoint.  Raises InputError if the edge set is not a linear forest."""
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if any(len(nb) > 2 for nb in adj.values()):
        raise InputError("a vertex has degree above 2 in a linear forest")
    visited: set[int] = set()
    paths = []
    for start in sorted(adj):
        if start in visited:
            continue
        # collect the component, then walk it from its smaller endpoint
        comp, stack = set(), [start]
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(adj[x])
        ends = sorted(x for x in comp if len(adj[x]) == 1)
        if len(ends) != 2:
            raise InputError(f"component {sorted(comp)} is a cycle, not a path")
        path, prev = [ends[0]], None
        while len(path) < len(comp):
            nxt = next(y for y in adj[path[-1]] if y != prev)
            prev = path[-1]
            path.append(nxt)
        visited |= comp
        paths.append(tuple(path))
    paths.sort(key=min)
    return tuple(paths)


def linear_arboricity_bounds(max_degree: int) -> tuple[int, int]:
    """Lower and upper bounds on forests needed at a given maximum degree."""
    lower = math.ceil((max_degree + 1) / 2)
    upper = math.ceil(3 * math.ceil(max_degree / 2) / 2)
    return lower, upper


def decompose_linear_forests(
    graph: Graph, max_forests: int | None = None, budget: int = 2_000_000
) -> LinearForestDecomposition:
    """Backtracking assignment of edges to at most ``max_forests`` linear forests.

    The default limit is ceil((max_degree + 1) / 2).
    """
    if max_forests is None:
        max_forests = max(1, math.ceil((graph.max_degree + 1) / 2))
    edges = list(graph.edges)
    if not edges:
        return LinearForestDecomposition.from_edge_sets(graph, [])
    n = graph.n_vertices
    deg = [[0] * (n + 1) for _ in range(max_forests)]
    # end[t][v]: other endpoint of the path through endpoint v in forest t
    end = [list(range(n + 1)) for _ in range(max_forests)]
    assign = [-1] * len(edges)
    nodes = 0

    def place(k: int, used: int) -> bool:
        nonlocal nodes
        if k == len(edges):
            return True
        nodes += 1
        if nodes > budget:
            raise DecompositionError(
                f"no decomposition into {max_forests} linear forests within {budget} steps"
            )
        u, v = edges[k]
        for t in range(min(used + 1, max_forests)):
            d, e = deg[t], end[t]
            if d[u] >= 2 or d[v] >= 2 or e[u] == v:
                continue
            a, b = e[u], e[v]
            saved = (e[a], e[b])
            d[u] += 1
            d[v] += 1
            e[a], e[b] = b, a
            assign[k] = t
            if place(k + 1, max(used, t + 1)):
                return True
            e[a], e[b] = saved
            d[u] -= 1
            d[v] -= 1
        assign[k] = -1
        return False

    if not place(0, 0):
        raise DecompositionError(f"graph has no decomposition into {max_forests} linear forests")
    sets = [[e for e, t in zip(edges, assign) if t == f] for f in range(max_forests)]
    return LinearForestDecomposition.from_edge_sets(graph, sets)
