"""Text and JSON formats for instances, solutions and source problems.

Instance file::

    # comment
    MSR <d> <n> [delta=<k>]
    <d lines of n signed ids>

Solution file::

    KEEP <ids...>
    STRIP <signed ids...>      (one line per strip, map-1 order)
    VALUE length=<l> adjacency=<a> deleted=<x>

Source files start with ``GRAPH <n> <m>`` (edge lines ``u v [forest]``),
``SAT32 <n> <m>`` (clause lines of signed variable ids) or
``DDM <d> <n1> ... <nd> <m>`` (hyper-edge lines).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Union

from .forests import LinearForestDecomposition
from .model import InputError, Instance, Solution, Strip
from .sources import CnfInstance, DdmInstance, Graph

__all__ = [
    "ParseError",
    "SourceSpec",
    "parse_instance",
    "format_instance",
    "parse_solution",
    "format_solution",
    "parse_source",
    "format_source",
    "instance_to_json",
    "instance_from_json",
    "solution_to_json",
    "solution_from_json",
    "source_to_json",
    "source_from_json",
    "read_text",
]


class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int


def _lines(text: str) -> Iterator[tuple[int, list[_Token]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        tokens, col = [], 0
        for part in body.split():
            col = body.index(part, col)
            tokens.append(_Token(part, lineno, col + 1))
            col += len(part)
        yield lineno, tokens


def _int(tok: _Token, what: str = "integer") -> int:
    try:
        return int(tok.text)
    except ValueError:
        raise ParseError(f"expected {what}, got {tok.text!r}", tok.line, tok.column) from None


def _keyword(tok: _Token, key: str) -> int:
    name, sep, value = tok.text.partition("=")
    if name != key or not sep:
        raise ParseError(f"expected {key}=<int>, got {tok.text!r}", tok.line, tok.column)
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"expected integer after {key}=", tok.line, tok.column) from None


def _expect_count(tokens: list[_Token], count: int, lineno: int, what: str) -> None:
    if len(tokens) != count:
        col = tokens[count].column if len(tokens) > count else None
        raise ParseError(f"{what}: expected {count} values, got {len(tokens)}", lineno, col)


# ----------------------------------------------------------- instances


def parse_instance(text: str) -> Instance:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty instance file")
    lineno, head = lines[0]
    if head[0].text != "MSR" or len(head) not in (3, 4):
        raise ParseError("header must be 'MSR <d> <n> [delta=<k>]'", lineno, head[0].column)
    d, n = _int(head[1], "map count"), _int(head[2], "marker count")
    delta = _keyword(head[3], "delta") if len(head) == 4 else None
    if d < 2:
        raise ParseError("need at least two maps", lineno, head[1].column)
    body = lines[1:]
    if len(body) != d:
        where = body[d][0] if len(body) > d else None
        raise ParseError(
            f"expected {d} map lines, got {len(body)}",
            where.line if where else lineno,
            where.column if where else None,
        )
    maps = []
    for lineno, tokens in body:
        _expect_count(tokens, n, lineno, "map line")
        seen: dict[int, int] = {}
        row = []
        for tok in tokens:
            v = _int(tok, "signed marker id")
            if not 1 <= abs(v) <= n:
                raise ParseError(f"marker {v} outside 1..{n}", tok.line, tok.column)
            if abs(v) in seen:
                raise ParseError(
                    f"duplicate marker {abs(v)} (first at column {seen[abs(v)]})", tok.line, tok.column
                )
            seen[abs(v)] = tok.column
            row.append(v)
        maps.append(tuple(row))
    try:
        return _instance(tuple(maps), delta)
    except InputError as e:
        raise ParseError(str(e)) from None


def _instance(maps: tuple[tuple[int, ...], ...], delta: int | None) -> Instance:
    # with no negative marker the signed and unsigned readings coincide
    positive = all(v > 0 for m in maps for v in m)
    return Instance(maps, delta=delta, all_positive=positive)


def format_instance(instance: Instance) -> str:
    head = f"MSR {instance.d} {instance.n}"
    if instance.delta is not None:
        head += f" delta={instance.delta}"
    return "\n".join([head] + [" ".join(map(str, m)) for m in instance.maps]) + "\n"


def instance_to_json(instance: Instance) -> dict:
    return {"d": instance.d, "n": instance.n, "delta": instance.delta, "maps": [list(m) for m in instance.maps]}


def instance_from_json(data: dict) -> Instance:
    try:
        maps = tuple(tuple(int(v) for v in m) for m in data["maps"])
        inst = _instance(maps, data.get("delta"))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed instance document: {e}") from None
    if "d" in data and data["d"] != inst.d or "n" in data and data["n"] != inst.n:
        raise InputError("instance document header disagrees with its maps")
    return inst


# ----------------------------------------------------------- solutions


def parse_solution(text: str) -> Solution:
    """The claimed solution exactly as written; check it with ``verify``."""
    kept = None
    strips: list[Strip] = []
    value = None
    for lineno, tokens in _lines(text):
        key = tokens[0]
        if key.text == "KEEP":
            if kept is not None:
                raise ParseError("repeated KEEP line", lineno, key.column)
            ids = [_int(t, "marker id") for t in tokens[1:]]
            for t, v in zip(tokens[1:], ids):
                if v < 1:
                    raise ParseError(f"marker id {v} must be positive", lineno, t.column)
            if len(set(ids)) != len(ids):
                raise ParseError("duplicate ids in KEEP line", lineno, key.column)
            kept = frozenset(ids)
        elif key.text == "STRIP":
            if len(tokens) < 3:
                raise ParseError("a strip needs at least two markers", lineno, key.column)
            strips.append(Strip(tuple(_int(t, "signed marker id") for t in tokens[1:])))
        elif key.text == "VALUE":
            if value is not None:
                raise ParseError("repeated VALUE line", lineno, key.column)
            _expect_count(tokens, 4, lineno, "VALUE line")
            value = tuple(_keyword(t, k) for t, k in zip(tokens[1:], ("length", "adjacency", "deleted")))
        else:
            raise ParseError(f"unknown line type {key.text!r}", lineno, key.column)
    if kept is None:
        raise ParseError("missing KEEP line")
    if value is None:
        raise ParseError("missing VALUE line")
    length, adjacency, deleted = value
    return Solution(kept, tuple(strips), length, len(strips), adjacency, deleted)


def format_solution(solution: Solution) -> str:
    lines = ["KEEP " + " ".join(map(str, sorted(solution.kept))) if solution.kept else "KEEP"]
    lines += ["STRIP " + " ".join(map(str, s.signed_ids)) for s in solution.strips]
    lines.append(
        f"VALUE length={solution.length} adjacency={solution.adjacency} deleted={solution.deleted}"
    )
    return "\n".join(lines) + "\n"


def solution_to_json(solution: Solution) -> dict:
    return {
        "kept": sorted(solution.kept),
        "strips": [list(s.signed_ids) for s in solution.strips],
        "length": solution.length,
        "strip_count": solution.strip_count,
        "adjacency": solution.adjacency,
        "deleted": solution.deleted,
    }


def solution_from_json(data: dict) -> Solution:
    try:
        strips = tuple(Strip(tuple(int(v) for v in s)) for s in data["strips"])
        return Solution(
            frozenset(int(v) for v in data["kept"]),
            strips,
            int(data["length"]),
            int(data.get("strip_count", len(strips))),
            int(data["adjacency"]),
            int(data["deleted"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed solution document: {e}") from None


# ------------------------------------------------------------- sources

Source = Union[Graph, CnfInstance, DdmInstance]


@dataclass(frozen=True)
class SourceSpec:
    source: Source
    forests: tuple[tuple[tuple[int, int], ...], ...] | None = None  # graph only

    def decomposition(self) -> LinearForestDecomposition | None:
        if self.forests is None or not isinstance(self.source, Graph):
            return None
        return LinearForestDecomposition.from_edge_sets(self.source, self.forests)


def _body(lines, count: int, lineno: int, what: str):
    body = lines[1:]
    if len(body) != count:
        extra = body[count][1][0] if len(body) > count else None
        raise ParseError(
            f"expected {count} {what} lines, got {len(body)}",
            extra.line if extra else lineno,
            extra.column if extra else None,
        )
    return body


def parse_source(text: str) -> SourceSpec:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty source file")
    lineno, head = lines[0]
    kind = head[0].text
    try:
        if kind == "GRAPH":
            _expect_count(head, 3, lineno, "GRAPH header")
            n, m = _int(head[1]), _int(head[2])
            edges, tags = [], []
            for ln, toks in _body(lines, m, lineno, "edge"):
                if len(toks) not in (2, 3):
                    raise ParseError("edge line must be 'u v [forest]'", ln, toks[0].column)
                edges.append((_int(toks[0]), _int(toks[1])))
                tags.append(_int(toks[2], "forest index") if len(toks) == 3 else None)
            graph = Graph(n, tuple(edges))
            forests = None
            if any(t is not None for t in tags):
                if any(t is None for t in tags) or min(tags) < 1:
                    raise ParseError("forest tags must be given on every edge line, starting at 1")
                forests = tuple(
                    tuple(graph.edges[i] for i, t in enumerate(tags) if t == f) for f in range(1, max(tags) + 1)
                )
            return SourceSpec(graph, forests)
        if kind == "SAT32":
            _expect_count(head, 3, lineno, "SAT32 header")
            n, m = _int(head[1]), _int(head[2])
            clauses = []
            for ln, toks in _body(lines, m, lineno, "clause"):
                lits = [_int(t, "literal") for t in toks]
                for t, v in zip(toks, lits):
                    if v == 0 or abs(v) > n:
                        raise ParseError(f"literal {v} outside ±1..{n}", ln, t.column)
                clauses.append(tuple(lits))
            return SourceSpec(CnfInstance(n, tuple(clauses)))
        if kind == "DDM":
            if len(head) < 3:
                raise ParseError("header must be 'DDM <d> <n1..nd> <m>'", lineno, head[0].column)
            d = _int(head[1])
            _expect_count(head, d + 3, lineno, "DDM header")
            sizes = tuple(_int(t) for t in head[2 : 2 + d])
            m = _int(head[-1])
            edges = []
            for ln, toks in _body(lines, m, lineno, "hyper-edge"):
                _expect_count(toks, d, ln, "hyper-edge line")
                edges.append(tuple(_int(t) for t in toks))
            return SourceSpec(DdmInstance(sizes, tuple(edges)))
    except ParseError:
        raise
    except InputError as e:
        raise ParseError(str(e)) from None
    raise ParseError(f"unknown source kind {kind!r}", lineno, head[0].column)


def format_source(spec: SourceSpec | Source) -> str:
    if not isinstance(spec, SourceSpec):
        spec = SourceSpec(spec)
    src = spec.source
    if isinstance(src, Graph):
        tag = {}
        for f, es in enumerate(spec.forests or (), start=1):
            for e in es:
                tag[(min(e), max(e))] = f
        lines = [f"GRAPH {src.n_vertices} {len(src.edges)}"]
        for u, v in src.edges:
            lines.append(f"{u} {v} {tag[(u, v)]}" if tag else f"{u} {v}")
    elif isinstance(src, CnfInstance):
        lines = [f"SAT32 {src.n_vars} {src.m}"] + [" ".join(map(str, c)) for c in src.clauses]
    elif isinstance(src, DdmInstance):
        lines = [f"DDM {src.d} {' '.join(map(str, src.sizes))} {len(src.edges)}"]
        lines += [" ".join(map(str, e)) for e in src.edges]
    else:
        raise InputError(f"cannot format {type(src).__name__}")
    return "\n".join(lines) + "\n"


def source_to_json(spec: SourceSpec | Source) -> dict:
    if not isinstance(spec, SourceSpec):
        spec = SourceSpec(spec)
    src = spec.source
    if isinstance(src, Graph):
        doc = {"kind": "graph", "n": src.n_vertices, "edges": [list(e) for e in src.edges]}
        if spec.forests is not None:
            doc["forests"] = [[list(e) for e in f] for f in spec.forests]
        return doc
    if isinstance(src, CnfInstance):
        return {"kind": "sat32", "n": src.n_vars, "clauses": [list(c) for c in src.clauses]}
    if isinstance(src, DdmInstance):
        return {"kind": "ddm", "sizes": list(src.sizes), "edges": [list(e) for e in src.edges]}
    raise InputError(f"cannot serialize {type(src).__name__}")


def source_from_json(data: dict) -> SourceSpec:
    try:
        kind = data["kind"]
        if kind == "graph":
            graph = Graph(int(data["n"]), tuple(tuple(e) for e in data["edges"]))
            forests = data.get("forests")
            if forests is not None:
                forests = tuple(tuple((min(e), max(e)) for e in f) for f in forests)
            return SourceSpec(graph, forests)
        if kind == "sat32":
            return SourceSpec(CnfInstance(int(data["n"]), tuple(tuple(c) for c in data["clauses"])))
        if kind == "ddm":
            return SourceSpec(DdmInstance(tuple(data["sizes"]), tuple(tuple(e) for e in data["edges"])))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed source document: {e}") from None
    raise InputError(f"unknown source kind {data.get('kind')!r}")


def read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def load_json(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None
