"""Canonical forms of solutions on gadget instances.

A canonicalizer rewrites a feasible solution of a reduction artifact into one
whose strips are all index-matched marker pairs, with certain mandatory pairs
present, without losing strip length.  Edits are expressed on the kept set;
markers left without a strip partner after an edit are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .model import InputError, Solution, evaluate, induced_subsequences, strip_partition, verify
from .reductions import ReductionArtifact

__all__ = [
    "CanonicalizationError",
    "Operation",
    "CanonicalReport",
    "canonicalize_msr3",
    "canonicalize_msr2",
    "canonicalize",
    "check_canonical",
]


class CanonicalizationError(RuntimeError):
    """A canonicalizer step found a configuration it cannot handle."""


@dataclass(frozen=True)
class Operation:
    kind: str  # cut | delete-lone | insert-pair | delete-pair | shift
    markers: tuple[int, ...]
    length_after: int


@dataclass
class CanonicalReport:
    input_length: int
    output_length: int = 0
    operations_applied: list[Operation] = field(default_factory=list)
    conditions_satisfied: dict[str, bool] = field(default_factory=dict)
    rounds: int = 0

    @property
    def changed(self) -> bool:
        return bool(self.operations_applied)


class _Editor:
    """Mutable kept set with an operation log."""

    def __init__(self, artifact: ReductionArtifact, solution: Solution):
        self.artifact = artifact
        self.instance = artifact.instance
        self.kept = set(solution.kept)
        self.report = CanonicalReport(solution.length)
        self.solution = solution

    def _log(self, kind: str, markers: Iterable[int]) -> None:
        self.report.operations_applied.append(Operation(kind, tuple(sorted(markers)), self.length))

    @property
    def length(self) -> int:
        return self.solution.length

    def strips(self) -> list[tuple[int, ...]]:
        return [s.ids for s in self.solution.strips]

    def _settle(self) -> None:
        while True:
            part = strip_partition(induced_subsequences(self.instance, self.kept))
            if part.feasible:
                break
            self.kept -= set(part.lone)
            self.solution = _evaluate(self.artifact, self.kept, allow_lone=True)
            self._log("delete-lone", part.lone)
        self.solution = _evaluate(self.artifact, self.kept)

    def insert(self, ids: Iterable[int]) -> None:
        ids = set(ids) - self.kept
        if not ids:
            return
        self.kept |= ids
        self.solution = _evaluate(self.artifact, self.kept, allow_lone=True)
        self._log("insert-pair", ids)
        self._settle()

    def delete(self, ids: Iterable[int]) -> None:
        ids = set(ids) & self.kept
        if not ids:
            return
        self.kept -= ids
        self.solution = _evaluate(self.artifact, self.kept, allow_lone=True)
        self._log("delete-pair", ids)
        self._settle()

    def shift(self, old: int, new: int) -> None:
        self.kept.discard(old)
        self.kept.add(new)
        self.solution = _evaluate(self.artifact, self.kept, allow_lone=True)
        self._log("shift", (old, new))
        self._settle()

    def cut(self, a: int, b: int) -> None:
        self._log("cut", (a, b))


def _evaluate(artifact: ReductionArtifact, kept, allow_lone: bool = False) -> Solution:
    sol = evaluate(artifact.instance, kept)
    if sol is not None:
        return sol
    if not allow_lone:
        raise CanonicalizationError("kept set is infeasible after removing lone markers")
    # length bookkeeping while lone markers are still present
    part = strip_partition(induced_subsequences(artifact.instance, kept))
    lone = set(part.lone)
    sol = evaluate(artifact.instance, set(kept) - lone)
    if sol is None:
        raise CanonicalizationError("kept set is infeasible after removing lone markers")
    return sol


def _start(artifact: ReductionArtifact, solution: Solution, kind: str) -> _Editor:
    if artifact.kind != kind:
        raise InputError(f"expected a {kind} artifact, got {artifact.kind}")
    report = verify(artifact.instance, solution)
    if not report.ok:
        raise InputError("solution does not verify: " + "; ".join(report.messages))
    return _Editor(artifact, solution)


def _finish(ed: _Editor, rounds: int) -> tuple[Solution, CanonicalReport]:
    rep = ed.report
    rep.output_length = ed.length
    rep.rounds = rounds
    rep.conditions_satisfied = check_canonical(ed.artifact, ed.solution)
    if rep.output_length < rep.input_length:
        raise CanonicalizationError(
            f"strip length dropped from {rep.input_length} to {rep.output_length}"
        )
    if not all(rep.conditions_satisfied.values()):
        bad = [k for k, v in rep.conditions_satisfied.items() if not v]
        raise CanonicalizationError(f"conditions still violated: {bad}")
    return ed.solution, rep


def _missing(ed: _Editor, kind: str) -> list[tuple[int, int]]:
    return [ids for _, ids in ed.artifact.pairs(kind) if not set(ids) <= ed.kept]


def _between(instance, k: int, a: int, b: int, z: int) -> bool:
    pos = instance.pos[k]
    lo, hi = sorted((pos[a], pos[b]))
    return lo < pos[z] < hi


# ------------------------------------------------------------ MIS -> MSR-3


def canonicalize_msr3(artifact: ReductionArtifact, solution: Solution) -> tuple[Solution, CanonicalReport]:
    """Every strip becomes a vertex pair or a dummy pair, and every dummy pair
    is kept.  A strip joining vertex markers of indices i < j is cut by
    inserting dummy pair i, which sits between them in the first map."""
    ed = _start(artifact, solution, "mis_msr3")
    role = artifact.role
    n = artifact.source.n_vertices
    rounds = 0
    while True:
        rounds += 1
        if rounds > 4 * n + 4:
            raise CanonicalizationError("msr3 canonicalization did not converge")
        mixed = None
        for strip in ed.strips():
            for a, b in zip(strip, strip[1:]):
                ra, rb = role(a), role(b)
                if ra.kind != "vertex" or rb.kind != "vertex":
                    if ra.pair != rb.pair:
                        raise CanonicalizationError(f"strip mixes {ra.label} and {rb.label}")
                    continue
                if ra.index != rb.index:
                    mixed = (a, b)
                    break
            if mixed:
                break
        if mixed:
            a, b = mixed
            i = min(role(a).index[0], role(b).index[0])
            ed.cut(a, b)
            ed.insert(artifact.pair_ids("dummy", (i,)))
            continue
        missing = _missing(ed, "dummy")
        if not missing:
            break
        ed.insert(missing[0])
    return _finish(ed, rounds)


# ------------------------------------------------------- 3SAT-2 -> MSR-2


def _consecutive(ed: _Editor):
    for strip in ed.strips():
        for a, b in zip(strip, strip[1:]):
            yield strip, a, b


def _pass_dummy_mixing(ed: _Editor) -> bool:
    art, role, inst = ed.artifact, ed.artifact.role, ed.instance
    for _, a, b in _consecutive(ed):
        da, db = role(a).kind == "dummy", role(b).kind == "dummy"
        if da == db:
            continue
        for ids in _missing(ed, "dummy"):
            if any(_between(inst, k, a, b, z) for k in range(inst.d) for z in ids):
                ed.cut(a, b)
                ed.insert(ids)
                return True
        raise CanonicalizationError(
            f"no missing dummy pair separates {role(a).label} and {role(b).label}"
        )
    return False


def _pass_insert_pairs(ed: _Editor, kinds: tuple[str, ...], together: bool) -> bool:
    missing = [ids for kind in kinds for ids in _missing(ed, kind)]
    if not missing:
        return False
    for kind in kinds:
        for ids in _missing(ed, kind):
            if any(z in ed.kept for z in ids):
                raise CanonicalizationError(f"{kind} pair {ids} is only half kept")
    if together:
        ed.insert(z for ids in missing for z in ids)
    else:
        for ids in missing:
            ed.insert(ids)
    return True


def _pass_literal_shift(ed: _Editor) -> bool:
    art, role = ed.artifact, ed.artifact.role
    for _, a, b in _consecutive(ed):
        ra, rb = role(a), role(b)
        if "literal" not in (ra.kind, rb.kind) or ra.pair == rb.pair:
            continue
        if ra.kind != rb.kind or ra.index[0] != rb.index[0]:
            raise CanonicalizationError(f"strip mixes {ra.label} and {rb.label}")
        if not (ra.side == "l" and rb.side == "r" and ra.index[1] < rb.index[1]):
            raise CanonicalizationError(f"unexpected literal adjacency {ra.label} {rb.label}")
        # z^l_{j,s} z^r_{j,t}  ->  z^l_{j,t} z^r_{j,t}
        ed.shift(a, art.pair_ids("literal", rb.index)[0])
        return True
    return False


_TF_SHIFTS = {
    # (left role, right role) -> (marker to drop, replacement) as (kind, s, side)
    (("false", 1, "l"), ("true", 1, "r")): (("true", 1, "r"), ("false", 1, "r")),
    (("true", 2, "l"), ("false", 2, "r")): (("false", 2, "r"), ("true", 2, "r")),
}


def _pass_truth_shift(ed: _Editor) -> bool:
    art, role = ed.artifact, ed.artifact.role
    for _, a, b in _consecutive(ed):
        ra, rb = role(a), role(b)
        if ra.kind not in ("true", "false") and rb.kind not in ("true", "false"):
            continue
        if ra.pair == rb.pair:
            continue
        key = ((ra.kind, ra.index[1], ra.side), (rb.kind, rb.index[1], rb.side))
        if ra.index[0] != rb.index[0] or key not in _TF_SHIFTS:
            raise CanonicalizationError(f"unexpected truth-marker adjacency {ra.label} {rb.label}")
        (dk, ds, dside), (nk, ns, nside) = _TF_SHIFTS[key]
        i = ra.index[0]
        drop = art.pair_ids(dk, (i, ds))[0 if dside == "l" else 1]
        new = art.pair_ids(nk, (i, ns))[0 if nside == "l" else 1]
        ed.shift(drop, new)
        return True
    return False


def _minority_literal(art: ReductionArtifact, i: int) -> tuple[tuple[int, int], bool]:
    """(literal pair index, positive?) of the variable's lone-sign occurrence."""
    occ = [(j, lit > 0) for j, clause in enumerate(art.source.clauses, start=1) for lit in clause if abs(lit) == i]
    positives = [o for o in occ if o[1]]
    negatives = [o for o in occ if not o[1]]
    j, positive = positives[0] if len(positives) == 1 else negatives[0]
    return (j, art.literal_index[(j, i)]), positive


def _pass_truth_replace(ed: _Editor) -> bool:
    art = ed.artifact
    for i in range(1, art.source.n_vars + 1):
        t = [art.pair_ids("true", (i, s)) for s in (1, 2)]
        f = [art.pair_ids("false", (i, s)) for s in (1, 2)]
        if all(set(p) <= ed.kept for p in t) or all(set(p) <= ed.kept for p in f):
            continue
        present = [p for p in t + f if set(p) <= ed.kept]
        if len(present) > 1:
            raise CanonicalizationError(f"variable {i} keeps conflicting truth pairs")
        for p in present:
            ed.delete(p)
        lit, positive = _minority_literal(art, i)
        ed.delete(art.pair_ids("literal", lit))
        ed.insert(z for p in (f if positive else t) for z in p)
        return True
    return False


def canonicalize_msr2(artifact: ReductionArtifact, solution: Solution) -> tuple[Solution, CanonicalReport]:
    """Staged passes: dummy strips, clause and variable strips, literal
    shifts, truth-marker shifts, then per-variable replacement so that each
    variable keeps both true pairs or both false pairs."""
    ed = _start(artifact, solution, "sat_msr2")
    cnf = artifact.source
    passes = (
        _pass_dummy_mixing,
        lambda e: _pass_insert_pairs(e, ("dummy",), together=True),
        lambda e: _pass_insert_pairs(e, ("clause", "variable"), together=False),
        _pass_literal_shift,
        _pass_truth_shift,
        _pass_truth_replace,
    )
    limit = 8 * (cnf.n_vars + cnf.m) + 16
    rounds = 0
    while True:
        rounds += 1
        if rounds > limit:
            raise CanonicalizationError("msr2 canonicalization did not converge")
        # restart from the first pass whenever any pass edits the solution
        if not any(p(ed) for p in passes):
            break
    return _finish(ed, rounds)


def canonicalize(artifact: ReductionArtifact, solution: Solution) -> tuple[Solution, CanonicalReport]:
    """Dispatch by artifact kind; msr4 and ddm solutions are returned as-is."""
    if artifact.kind == "mis_msr3":
        return canonicalize_msr3(artifact, solution)
    if artifact.kind == "sat_msr2":
        return canonicalize_msr2(artifact, solution)
    ed = _start(artifact, solution, artifact.kind)
    return _finish(ed, 0)


# ------------------------------------------------------------- checking


def _is_pair(art: ReductionArtifact, strip) -> bool:
    if len(strip) != 2:
        return False
    a, b = art.role(strip[0]), art.role(strip[1])
    return a.pair == b.pair


def check_canonical(artifact: ReductionArtifact, solution: Solution) -> dict[str, bool]:
    """Per-condition booleans for the canonical form of the artifact's kind."""
    strips = [s.ids for s in solution.strips]
    kept = solution.kept
    art = artifact

    def all_kept(kind: str) -> bool:
        return all(set(ids) <= kept for _, ids in art.pairs(kind))

    pairs = all(_is_pair(art, s) for s in strips)
    if art.kind in ("mis_msr4", "ddm_msr"):
        return {"strips_are_index_pairs": pairs}
    if art.kind == "mis_msr3":
        return {"strips_are_vertex_or_dummy_pairs": pairs, "dummy_pairs_are_strips": all_kept("dummy")}
    if art.kind == "sat_msr2":
        per_clause: dict[int, int] = {}
        for s in strips:
            r = art.role(s[0])
            if r.kind == "literal":
                per_clause[r.index[0]] = per_clause.get(r.index[0], 0) + 1
        uniform = True
        for i in range(1, art.source.n_vars + 1):
            t = all(set(art.pair_ids("true", (i, s))) <= kept for s in (1, 2))
            f = all(set(art.pair_ids("false", (i, s))) <= kept for s in (1, 2))
            uniform = uniform and (t or f)
        return {
            "strips_are_pairs": pairs,
            "dummy_pairs_are_strips": all_kept("dummy"),
            "clause_and_variable_pairs_are_strips": all_kept("clause") and all_kept("variable"),
            "at_most_one_literal_pair_per_clause": all(c <= 1 for c in per_clause.values()),
            "truth_pairs_uniform": uniform,
        }
    raise InputError(f"unknown artifact kind {art.kind!r}")
