"""Source problems of the gadget reductions and brute-force oracles for them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .model import InputError

__all__ = [
    "Graph",
    "CnfInstance",
    "DdmInstance",
    "OracleSizeError",
    "ORACLE_LIMIT",
    "mis_oracle",
    "vc_oracle",
    "sat_oracle",
    "ddm_oracle",
    "is_independent",
    "is_vertex_cover",
    "satisfied_clauses",
    "is_matching",
]

ORACLE_LIMIT = 20


class OracleSizeError(InputError):
    pass


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..n_vertices."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    adjacency: dict[int, frozenset[int]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        seen = set()
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise InputError(f"loop at vertex {u}")
            if not (1 <= u <= self.n_vertices and 1 <= v <= self.n_vertices):
                raise InputError(f"edge ({u}, {v}) outside 1..{self.n_vertices}")
            e = (min(u, v), max(u, v))
            if e in seen:
                raise InputError(f"duplicate edge {e}")
            seen.add(e)
            norm.append(e)
        object.__setattr__(self, "edges", tuple(norm))
        adj: dict[int, set[int]] = {v: set() for v in range(1, self.n_vertices + 1)}
        for u, v in norm:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "adjacency", {v: frozenset(s) for v, s in adj.items()})

    @property
    def max_degree(self) -> int:
        return max((len(s) for s in self.adjacency.values()), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency.get(u, ())


@dataclass(frozen=True)
class CnfInstance:
    """MAX-3SAT(q) formula: every variable occurs exactly three times.

    Clauses are tuples of signed variable ids (negative = negated literal).
    """

    n_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        clauses = tuple(tuple(int(x) for x in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if not clauses:
            raise InputError("formula has no clauses")
        q = len(clauses[0])
        if q < 2:
            raise InputError("clauses need at least two literals")
        counts = {v: [] for v in range(1, self.n_vars + 1)}
        for j, c in enumerate(clauses, start=1):
            if len(c) != q:
                raise InputError(f"clause {j} has {len(c)} literals, expected {q}")
            vs = [abs(x) for x in c]
            if len(set(vs)) != q:
                raise InputError(f"clause {j} repeats a variable")
            for x in c:
                if abs(x) not in counts:
                    raise InputError(f"clause {j} uses unknown variable {abs(x)}")
                counts[abs(x)].append(x > 0)
        for v, signs in counts.items():
            if len(signs) != 3:
                raise InputError(f"variable {v} occurs {len(signs)} times, expected 3")
            if all(signs) or not any(signs):
                raise InputError(f"variable {v} has all literals of the same sign")

    @property
    def q(self) -> int:
        return len(self.clauses[0])

    @property
    def p(self) -> int:
        return 3

    @property
    def m(self) -> int:
        return len(self.clauses)


@dataclass(frozen=True)
class DdmInstance:
    """d-dimensional matching; hyper-edge coordinates are 1-based per set."""

    sizes: tuple[int, ...]
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.sizes)
        edges = tuple(tuple(int(x) for x in e) for e in self.edges)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "edges", edges)
        if len(sizes) < 1:
            raise InputError("need at least one vertex set")
        for k, e in enumerate(edges, start=1):
            if len(e) != len(sizes):
                raise InputError(f"hyper-edge {k} has {len(e)} coordinates, expected {len(sizes)}")
            for i, (x, s) in enumerate(zip(e, sizes), start=1):
                if not 1 <= x <= s:
                    raise InputError(f"hyper-edge {k} coordinate {i} = {x} outside 1..{s}")

    @property
    def d(self) -> int:
        return len(self.sizes)

    def intersect(self, a: int, b: int) -> bool:
        """Whether hyper-edges a and b (1-based) share a vertex."""
        return any(x == y for x, y in zip(self.edges[a - 1], self.edges[b - 1]))


def is_independent(graph: Graph, vertices) -> bool:
    vs = list(vertices)
    return all(not graph.has_edge(u, v) for u, v in itertools.combinations(vs, 2))


def is_vertex_cover(graph: Graph, vertices) -> bool:
    vs = set(vertices)
    return all(u in vs or v in vs for u, v in graph.edges)


def satisfied_clauses(cnf: CnfInstance, assignment) -> int:
    """Clauses satisfied by ``assignment`` (sequence of bools, index 0 = x1)."""
    return sum(any(assignment[abs(x) - 1] == (x > 0) for x in c) for c in cnf.clauses)


def is_matching(ddm: DdmInstance, edges) -> bool:
    es = list(edges)
    return all(not ddm.intersect(a, b) for a, b in itertools.combinations(es, 2))


def _guard(size: int, what: str) -> None:
    if size > ORACLE_LIMIT:
        raise OracleSizeError(f"{what} = {size} exceeds the oracle limit {ORACLE_LIMIT}")


def mis_oracle(graph: Graph) -> tuple[int, tuple[int, ...]]:
    """Maximum independent set; witness is lexicographically smallest."""
    _guard(graph.n_vertices, "vertex count")
    vertices = range(1, graph.n_vertices + 1)
    for k in range(graph.n_vertices, -1, -1):
        for combo in itertools.combinations(vertices, k):
            if is_independent(graph, combo):
                return k, combo
    raise AssertionError("unreachable")


def vc_oracle(graph: Graph) -> tuple[int, tuple[int, ...]]:
    _guard(graph.n_vertices, "vertex count")
    vertices = range(1, graph.n_vertices + 1)
    for k in range(graph.n_vertices + 1):
        for combo in itertools.combinations(vertices, k):
            if is_vertex_cover(graph, combo):
                return k, combo
    raise AssertionError("unreachable")


def sat_oracle(cnf: CnfInstance) -> tuple[int, tuple[bool, ...]]:
    """Max satisfied clauses; witness is the first optimum with False < True."""
    _guard(cnf.n_vars, "variable count")
    best, witness = -1, ()
    for assignment in itertools.product((False, True), repeat=cnf.n_vars):
        k = satisfied_clauses(cnf, assignment)
        if k > best:
            best, witness = k, assignment
    return best, witness


def ddm_oracle(ddm: DdmInstance) -> tuple[int, tuple[int, ...]]:
    _guard(len(ddm.edges), "hyper-edge count")
    ids = range(1, len(ddm.edges) + 1)
    for k in range(len(ddm.edges), -1, -1):
        for combo in itertools.combinations(ids, k):
            if is_matching(ddm, combo):
                return k, combo
    raise AssertionError("unreachable")
