"""Gadget constructions from MIS, MAX-3SAT(q) and d-DM to MSR instances.

Every construction produces an all-positive Instance whose marker ids follow
the order of the first map, together with a legend naming each marker's role.
``embed_source_solution`` builds the MSR solution that corresponds to a source
solution; ``extract_source_solution`` maps an MSR solution back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, Union

from .forests import LinearForestDecomposition, decompose_linear_forests
from .model import InputError, Instance, Solution, evaluate, verify
from .sources import (
    CnfInstance,
    DdmInstance,
    Graph,
    is_independent,
    is_matching,
    is_vertex_cover,
    satisfied_clauses,
)

__all__ = [
    "MarkerRole",
    "ReductionArtifact",
    "ExtractResult",
    "KINDS",
    "reduce_mis_msr4",
    "reduce_mis_msr3",
    "reduce_sat_msr2",
    "reduce_ddm_msr",
    "embed_source_solution",
    "extract_source_solution",
    "pairs_intersect",
]

KINDS = ("mis_msr4", "mis_msr3", "sat_msr2", "ddm_msr")

_LETTER = {
    "vertex": "z",
    "edge": "z",
    "literal": "z",
    "dummy": "x",
    "true": "t",
    "false": "f",
    "variable": "v",
    "clause": "y",
}


@dataclass(frozen=True, order=True)
class MarkerRole:
    kind: str
    index: tuple[int, ...]
    side: str  # "l" or "r"

    @property
    def pair(self) -> tuple[str, tuple[int, ...]]:
        return (self.kind, self.index)

    @property
    def label(self) -> str:
        return _LETTER[self.kind] + ",".join(map(str, self.index)) + self.side


Source = Union[Graph, CnfInstance, DdmInstance]


@dataclass(frozen=True)
class ReductionArtifact:
    kind: str
    instance: Instance
    legend: dict[int, MarkerRole]
    source: Source
    map_names: tuple[str, ...]
    forests: LinearForestDecomposition | None = None
    # sat_msr2 only: (clause j, variable i) -> literal index t within clause j
    literal_index: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if sorted(self.legend) != list(range(1, self.instance.n + 1)):
            raise AssertionError("legend must cover every marker exactly once")

    def pair_ids(self, kind: str, index: tuple[int, ...]) -> tuple[int, int]:
        return self._pairs[(kind, tuple(index))]

    @cached_property
    def _pairs(self) -> dict[tuple[str, tuple[int, ...]], tuple[int, int]]:
        pairs: dict = {}
        for mid, role in self.legend.items():
            pairs.setdefault(role.pair, [0, 0])[0 if role.side == "l" else 1] = mid
        return {k: tuple(v) for k, v in pairs.items()}

    def role(self, marker: int) -> MarkerRole:
        return self.legend[abs(marker)]

    def pairs(self, kind: str) -> list[tuple[tuple[int, ...], tuple[int, int]]]:
        """(index, (left id, right id)) for every pair of one kind, by index."""
        return sorted((idx, ids) for (k, idx), ids in self._pairs.items() if k == kind)

    def labels(self, ids: Iterable[int]) -> list[str]:
        return [self.legend[abs(v)].label for v in ids]

    def map_labels(self) -> list[list[str]]:
        return [self.labels(m) for m in self.instance.maps]


def _number(maps: Sequence[Sequence[MarkerRole]]) -> tuple[Instance, dict[int, MarkerRole]]:
    """Assign ids 1..N in the order of the first map."""
    ids = {role: k for k, role in enumerate(maps[0], start=1)}
    for m in maps[1:]:
        if sorted(m) != sorted(maps[0]):
            raise AssertionError("construction produced maps over different markers")
    instance = Instance.positive(tuple(ids[r] for r in m) for m in maps)
    return instance, {k: r for r, k in ids.items()}


def _pair(kind: str, *index: int) -> list[MarkerRole]:
    return [MarkerRole(kind, tuple(index), "l"), MarkerRole(kind, tuple(index), "r")]


def _path_tokens(path: Sequence[int]) -> list[MarkerRole]:
    out = [MarkerRole("vertex", (path[0],), "l")]
    for a, b in zip(path, path[1:]):
        out += [MarkerRole("vertex", (b,), "l"), MarkerRole("vertex", (a,), "r")]
    out.append(MarkerRole("vertex", (path[-1],), "r"))
    return out


def _forest_block(dec: LinearForestDecomposition, t: int) -> list[MarkerRole]:
    return [tok for path in dec.paths[t] for tok in _path_tokens(path)]


def _untouched_block(graph: Graph, dec: LinearForestDecomposition, t: int) -> list[MarkerRole]:
    return [tok for v in dec.uncovered(graph, t) for tok in _pair("vertex", v)]


def _two_forests(graph: Graph, forests) -> LinearForestDecomposition:
    if forests is None:
        dec = decompose_linear_forests(graph, max_forests=2)
    elif isinstance(forests, LinearForestDecomposition):
        dec = LinearForestDecomposition.from_edge_sets(graph, forests.forests, pad_to=2)
    else:
        dec = LinearForestDecomposition.from_edge_sets(graph, forests, pad_to=2)
    if len(dec.forests) > 2:
        raise InputError("the construction needs at most two linear forests")
    if len(dec.forests) < 2:
        dec = LinearForestDecomposition.from_edge_sets(graph, dec.forests, pad_to=2)
    return dec


def reduce_mis_msr4(graph: Graph, forests=None) -> ReductionArtifact:
    """Four maps G->, G<-, G1, G2 over 2n vertex markers."""
    dec = _two_forests(graph, forests)
    n = graph.n_vertices
    fwd = [tok for i in range(1, n + 1) for tok in _pair("vertex", i)]
    bwd = [tok for i in range(n, 0, -1) for tok in _pair("vertex", i)]
    g1 = _forest_block(dec, 0) + _untouched_block(graph, dec, 0)
    g2 = _forest_block(dec, 1) + _untouched_block(graph, dec, 1)
    instance, legend = _number([fwd, bwd, g1, g2])
    return ReductionArtifact("mis_msr4", instance, legend, graph, ("G->", "G<-", "G1", "G2"), dec)


def reduce_mis_msr3(graph: Graph, forests=None) -> ReductionArtifact:
    """Three maps G0, G1, G2 over 2n vertex markers and 2n dummy markers."""
    dec = _two_forests(graph, forests)
    n = graph.n_vertices
    g0 = [tok for i in range(1, n + 1) for tok in _pair("vertex", i) + _pair("dummy", i)]
    dummies = [tok for i in range(n, 0, -1) for tok in _pair("dummy", i)]
    g1 = _untouched_block(graph, dec, 0) + _forest_block(dec, 0) + dummies
    g2 = dummies + _forest_block(dec, 1) + _untouched_block(graph, dec, 1)
    instance, legend = _number([g0, g1, g2])
    return ReductionArtifact("mis_msr3", instance, legend, graph, ("G0", "G1", "G2"), dec)


def reduce_sat_msr2(cnf: CnfInstance) -> ReductionArtifact:
    """Two maps over 2(5n + m + qm + 2) markers."""
    n, m, q = cnf.n_vars, cnf.m, cnf.q

    def tf(kind: str, i: int, s: int, side: str) -> MarkerRole:
        return MarkerRole(kind, (i, s), side)

    # literal occurrences per variable in clause order; slots wrapped in G1
    occurrences: dict[int, list[tuple[int, bool]]] = {i: [] for i in range(1, n + 1)}
    for j, clause in enumerate(cnf.clauses, start=1):
        for lit in clause:
            occurrences[abs(lit)].append((j, lit > 0))
    g1_tokens: list = []
    for i in range(1, n + 1):
        pos_slots = [tf("false", i, 1, "l"), tf("false", i, 2, "l")]
        neg_slots = [tf("true", i, 2, "r"), tf("true", i, 1, "r")]
        wrap = {}
        for j, positive in occurrences[i]:
            slot = (pos_slots if positive else neg_slots).pop(0)
            wrap[slot] = (j, i)
        block = [
            tf("false", i, 1, "l"), tf("true", i, 2, "l"), tf("false", i, 1, "r"), tf("true", i, 2, "r"),
            tf("false", i, 2, "l"), tf("true", i, 1, "l"), tf("false", i, 2, "r"), tf("true", i, 1, "r"),
        ]
        for tok in block:
            if tok in wrap:
                g1_tokens += [("lit", wrap[tok], "l"), tok, ("lit", wrap[tok], "r")]
            else:
                g1_tokens.append(tok)
    # literal index t of (clause, variable) = order of appearance in G1
    literal_index: dict[tuple[int, int], int] = {}
    per_clause = [0] * (m + 1)
    for tok in g1_tokens:
        if isinstance(tok, tuple) and tok[0] == "lit" and tok[2] == "l":
            j, _ = tok[1]
            per_clause[j] += 1
            literal_index[tok[1]] = per_clause[j]
    g1 = [
        MarkerRole("literal", (tok[1][0], literal_index[tok[1]]), tok[2])
        if isinstance(tok, tuple) and tok[0] == "lit"
        else tok
        for tok in g1_tokens
    ]
    g1 += _pair("dummy", 1) + _pair("dummy", 2)
    g1 += [tok for j in range(1, m + 1) for tok in _pair("clause", j)]
    g1 += [tok for i in range(1, n + 1) for tok in _pair("variable", i)]

    g2: list[MarkerRole] = []
    for i in range(n, 0, -1):
        g2 += [
            tf("true", i, 1, "l"), tf("false", i, 1, "l"), tf("true", i, 1, "r"), tf("false", i, 1, "r"),
            *_pair("variable", i),
            tf("false", i, 2, "l"), tf("true", i, 2, "l"), tf("false", i, 2, "r"), tf("true", i, 2, "r"),
        ]
    for j in range(m, 0, -1):
        g2 += _pair("clause", j)
        g2 += [MarkerRole("literal", (j, t), "l") for t in range(q, 0, -1)]
        g2 += [MarkerRole("literal", (j, t), "r") for t in range(q, 0, -1)]
    g2 += _pair("dummy", 2) + _pair("dummy", 1)

    instance, legend = _number([g1, g2])
    expected = 2 * (5 * n + m + q * m + 2)
    if instance.n != expected:
        raise AssertionError(f"sat construction has {instance.n} markers, expected {expected}")
    return ReductionArtifact(
        "sat_msr2", instance, legend, cnf, ("G1", "G2"), literal_index=literal_index
    )


def reduce_ddm_msr(ddm: DdmInstance) -> ReductionArtifact:
    """d + 2 maps over 2|E| edge markers."""
    k = len(ddm.edges)
    fwd = [tok for e in range(1, k + 1) for tok in _pair("edge", e)]
    bwd = [tok for e in range(k, 0, -1) for tok in _pair("edge", e)]
    maps = [fwd, bwd]
    for i, size in enumerate(ddm.sizes):
        g: list[MarkerRole] = []
        for vertex in range(1, size + 1):
            group = [e for e in range(1, k + 1) if ddm.edges[e - 1][i] == vertex]
            g += [MarkerRole("edge", (e,), "l") for e in group]
            g += [MarkerRole("edge", (e,), "r") for e in group]
        maps.append(g)
    if k == 0:
        raise InputError("d-DM instance has no hyper-edges")
    instance, legend = _number(maps)
    names = ("G->", "G<-") + tuple(f"G{i}" for i in range(1, ddm.d + 1))
    return ReductionArtifact("ddm_msr", instance, legend, ddm, names)


def pairs_intersect(instance: Instance, a: tuple[int, int], b: tuple[int, int], maps=None) -> bool:
    """Whether a marker of one pair lies between the markers of the other in
    some map (restricted to the map indices in ``maps`` if given)."""
    for k in maps if maps is not None else range(instance.d):
        pos = instance.pos[k]
        for x, y in ((a, b), (b, a)):
            lo, hi = sorted((pos[x[0]], pos[x[1]]))
            if any(lo < pos[z] < hi for z in y):
                return True
    return False


# ---------------------------------------------------------------- embedding


def _solution(artifact: ReductionArtifact, kept: set[int]) -> Solution:
    sol = evaluate(artifact.instance, kept)
    if sol is None:
        raise AssertionError(f"embedded kept set is infeasible for {artifact.kind}")
    return sol


def embed_source_solution(artifact: ReductionArtifact, source_solution) -> Solution:
    """MSR solution built from an independent set, assignment, or matching."""
    kind, src = artifact.kind, artifact.source
    kept: set[int] = set()
    if kind in ("mis_msr4", "mis_msr3"):
        vs = sorted(set(int(v) for v in source_solution))
        if any(not 1 <= v <= src.n_vertices for v in vs) or not is_independent(src, vs):
            raise InputError(f"{vs} is not an independent set of the graph")
        for v in vs:
            kept.update(artifact.pair_ids("vertex", (v,)))
        if kind == "mis_msr3":
            for _, ids in artifact.pairs("dummy"):
                kept.update(ids)
    elif kind == "ddm_msr":
        es = sorted(set(int(e) for e in source_solution))
        if any(not 1 <= e <= len(src.edges) for e in es) or not is_matching(src, es):
            raise InputError(f"{es} is not a set of pairwise-disjoint hyper-edges")
        for e in es:
            kept.update(artifact.pair_ids("edge", (e,)))
    elif kind == "sat_msr2":
        assignment = tuple(bool(x) for x in source_solution)
        if len(assignment) != src.n_vars:
            raise InputError(f"assignment has {len(assignment)} values, expected {src.n_vars}")
        for i, value in enumerate(assignment, start=1):
            for s in (1, 2):
                kept.update(artifact.pair_ids("true" if value else "false", (i, s)))
        index = artifact.literal_index
        for j, clause in enumerate(src.clauses, start=1):
            true_lits = [index[(j, abs(x))] for x in clause if assignment[abs(x) - 1] == (x > 0)]
            if true_lits:
                kept.update(artifact.pair_ids("literal", (j, min(true_lits))))
        for kind_ in ("clause", "variable", "dummy"):
            for _, ids in artifact.pairs(kind_):
                kept.update(ids)
    else:
        raise InputError(f"unknown artifact kind {kind!r}")
    return _solution(artifact, kept)


# --------------------------------------------------------------- extraction


@dataclass(frozen=True)
class ExtractResult:
    witness: tuple  # vertices, matching edges, or assignment
    value: int  # k (independent set / matching size / satisfied clauses) or c
    input_length: int
    bound: float  # guaranteed lower bound on value (upper bound for cmsr)
    bound_holds: bool
    canonical: Solution | None = None


def _fully_kept(artifact: ReductionArtifact, kept, kind: str) -> list[int]:
    return [idx[0] for idx, (l, r) in artifact.pairs(kind) if l in kept and r in kept]


def extract_source_solution(
    artifact: ReductionArtifact, solution: Solution, variant: str = "msr"
) -> ExtractResult:
    """Back-map an MSR solution to a source solution.

    Guarantees: k >= l/2 (mis_msr4, ddm_msr), k >= l/2 - n (mis_msr3),
    k >= l/2 - 3n - m - 2 (sat_msr2) and, for variant "cmsr" on mis_msr3,
    a vertex cover of size c <= x/2.
    """
    from .canonical import canonicalize_msr2, canonicalize_msr3

    report = verify(artifact.instance, solution)
    if not report.ok:
        raise InputError("solution does not verify: " + "; ".join(report.messages))
    if variant not in ("msr", "cmsr"):
        raise InputError(f"unknown variant {variant!r}")
    if variant == "cmsr" and artifact.kind != "mis_msr3":
        raise InputError("the cmsr back-map is defined for mis_msr3 artifacts")
    kind, src, l = artifact.kind, artifact.source, solution.length
    if kind == "mis_msr4":
        vs = tuple(_fully_kept(artifact, solution.kept, "vertex"))
        if not is_independent(src, vs):
            raise AssertionError("kept vertex pairs are not independent")
        return ExtractResult(vs, len(vs), l, l / 2, len(vs) >= l / 2)
    if kind == "ddm_msr":
        es = tuple(_fully_kept(artifact, solution.kept, "edge"))
        if not is_matching(src, es):
            raise AssertionError("kept edge pairs intersect")
        return ExtractResult(es, len(es), l, l / 2, len(es) >= l / 2)
    if kind == "mis_msr3":
        canon, _ = canonicalize_msr3(artifact, solution)
        vs = tuple(_fully_kept(artifact, canon.kept, "vertex"))
        if not is_independent(src, vs):
            raise AssertionError("kept vertex pairs are not independent")
        n = src.n_vertices
        if variant == "cmsr":
            cover = tuple(v for v in range(1, n + 1) if v not in set(vs))
            if not is_vertex_cover(src, cover):
                raise AssertionError("deleted vertex pairs do not form a vertex cover")
            x = solution.deleted
            return ExtractResult(cover, len(cover), l, x / 2, len(cover) <= x / 2, canon)
        return ExtractResult(vs, len(vs), l, l / 2 - n, len(vs) >= l / 2 - n, canon)
    if kind == "sat_msr2":
        canon, _ = canonicalize_msr2(artifact, solution)
        assignment = []
        for i in range(1, src.n_vars + 1):
            t1, t2 = artifact.pair_ids("true", (i, 1)), artifact.pair_ids("true", (i, 2))
            assignment.append(all(x in canon.kept for x in t1 + t2))
        k = satisfied_clauses(src, assignment)
        bound = l / 2 - 3 * src.n_vars - src.m - 2
        return ExtractResult(tuple(assignment), k, l, bound, k >= bound, canon)
    raise InputError(f"unknown artifact kind {kind!r}")
