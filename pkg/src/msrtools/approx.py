"""2d-approximation for MSR-d through short strip candidates.

Every strip longer than three splits into pieces of length two and three, so
it is enough to pack candidate strips of length 2..L.  Each candidate occupies
the minimal window holding its markers in every map (a d-interval); packing
non-overlapping d-intervals is a weighted independent set problem, solved
approximately by LP relaxation plus fractional local ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .lp import LpProblem, LpSolution, solve_lp
from .model import Instance, ObjectiveSpec, Solution, evaluate, max_gap, strip_partition, induced_subsequences

__all__ = [
    "StripCandidate",
    "ConflictStructure",
    "SelectionLemmaError",
    "ApproxResult",
    "enumerate_candidates",
    "build_conflicts",
    "build_relaxation",
    "local_ratio_select",
    "approximate",
    "run_approximation",
    "SUPPORT_THRESHOLD",
]

SUPPORT_THRESHOLD = 1e-9


@dataclass(frozen=True)
class StripCandidate:
    ids: tuple[int, ...]  # map-1 order
    windows: tuple[tuple[int, int], ...]  # 1-based inclusive, one per map
    weight: int
    pattern_ok: bool = True

    def overlaps(self, other: "StripCandidate") -> bool:
        return any(a0 <= b1 and b0 <= a1 for (a0, a1), (b0, b1) in zip(self.windows, other.windows))


class SelectionLemmaError(AssertionError):
    """No candidate had fractional closed-neighbourhood mass <= 2d."""

    def __init__(self, message: str, x: np.ndarray):
        super().__init__(message)
        self.x = x


def enumerate_candidates(instance: Instance, L: int = 3, mode: str = "length") -> list[StripCandidate]:
    """All marker sets of size 2..L that read as a strip in every map.

    Within one map the markers must appear in map-1 order with map-1 signs, or
    reversed with every sign flipped; with a gap bound, consecutive candidate
    markers may be separated by at most delta other markers in each map.
    """
    L = min(L, instance.n)
    first = instance.maps[0]
    n, d = instance.n, instance.d
    delta = instance.delta
    rel = [
        [instance.sign[k][abs(v)] * (1 if v > 0 else -1) for v in first] for k in range(d)
    ]
    pos = [[instance.pos[k][abs(v)] for v in first] for k in range(d)]
    out: list[StripCandidate] = []

    def fits(chosen: list[int], j: int) -> bool:
        last = chosen[-1]
        for k in range(d):
            orient = rel[k][chosen[0]]
            if rel[k][j] != orient:
                return False
            step = (pos[k][j] - pos[k][last]) * orient
            if step <= 0:
                return False
        return True

    def gap_ok(chosen: list[int]) -> bool:
        for k in range(d):
            ps = sorted(pos[k][p] for p in chosen)
            if any(b - a - 1 > delta for a, b in zip(ps, ps[1:])):
                return False
        return True

    def grow(chosen: list[int]) -> None:
        if len(chosen) >= 2 and (delta is None or gap_ok(chosen)):
            windows = tuple(
                (min(pos[k][p] for p in chosen) + 1, max(pos[k][p] for p in chosen) + 1)
                for k in range(d)
            )
            size = len(chosen)
            weight = size if mode == "length" else size - 1
            out.append(StripCandidate(tuple(abs(first[p]) for p in chosen), windows, weight))
        if len(chosen) == L:
            return
        for j in range(chosen[-1] + 1, n):
            if fits(chosen, j):
                grow(chosen + [j])

    for i in range(n):
        grow([i])
    return out


@dataclass(frozen=True)
class ConflictStructure:
    """Which candidates overlap in some map or share a marker.

    ``incidence`` has one row per covered (map, position) and per shared
    marker id; two candidates conflict when some row holds both.
    """

    covering: tuple[dict[int, tuple[int, ...]], ...]  # per map: 1-based position -> candidates
    incidence: np.ndarray

    def among(self, indices: Sequence[int]) -> np.ndarray:
        """Boolean conflict matrix of the given candidates, true on the diagonal."""
        sub = self.incidence[:, list(indices)].astype(float)
        out = (sub.T @ sub) > 0.5
        np.fill_diagonal(out, True)
        return out

    def conflict(self, u: int, v: int) -> bool:
        return u == v or bool(np.any(self.incidence[:, u] & self.incidence[:, v]))


def build_conflicts(candidates: Sequence[StripCandidate], instance: Instance) -> ConflictStructure:
    K = len(candidates)
    covering = []
    rows = []
    for k in range(instance.d):
        cover: dict[int, list[int]] = {}
        for c, cand in enumerate(candidates):
            lo, hi = cand.windows[k]
            for p in range(lo, hi + 1):
                cover.setdefault(p, []).append(c)
        covering.append({p: tuple(cs) for p, cs in sorted(cover.items())})
        rows.extend(cs for _, cs in sorted(cover.items()))
    rows.extend(_id_rows(candidates).values())
    incidence = np.zeros((len(rows), K), dtype=bool)
    for r, cs in enumerate(rows):
        incidence[r, cs] = True
    return ConflictStructure(tuple(covering), incidence)


def _id_rows(candidates: Sequence[StripCandidate]) -> dict[int, list[int]]:
    by_id: dict[int, list[int]] = {}
    for c, cand in enumerate(candidates):
        for v in cand.ids:
            by_id.setdefault(v, []).append(c)
    return {v: cs for v, cs in sorted(by_id.items()) if len(cs) >= 2}


def build_relaxation(
    candidates: Sequence[StripCandidate], instance: Instance, drop_implied: bool = True
) -> LpProblem:
    """Point-capacity LP: every map position and every shared marker id holds
    at most one unit of candidate mass.

    With ``drop_implied`` a row whose candidate set lies inside another row's
    set is left out; all right-hand sides are 1, so it is implied and the
    feasible region does not change.
    """
    K = len(candidates)
    rows = []
    for k in range(instance.d):
        cover: dict[int, list[int]] = {}
        for c, cand in enumerate(candidates):
            lo, hi = cand.windows[k]
            for p in range(lo, hi + 1):
                cover.setdefault(p, []).append(c)
        for p in sorted(cover):
            row = np.zeros(K)
            row[cover[p]] = 1.0
            rows.append(row)
    for cs in _id_rows(candidates).values():
        row = np.zeros(K)
        row[cs] = 1.0
        rows.append(row)
    A = np.array(rows) if rows else np.zeros((0, K))
    if drop_implied and len(A):
        A = A[_maximal_rows(A)]
    c = np.array([cand.weight for cand in candidates], dtype=float)
    return LpProblem(c, A, np.ones(A.shape[0]))


def _maximal_rows(A: np.ndarray) -> list[int]:
    overlap = A @ A.T
    size = A.sum(axis=1)
    index = np.arange(len(A))
    keep = []
    for i in range(len(A)):
        inside = overlap[i] == size[i]
        dominated = inside & ((size > size[i]) | ((size == size[i]) & (index < i)))
        if not dominated.any():
            keep.append(i)
    return keep


def local_ratio_select(
    candidates: Sequence[StripCandidate],
    weights: Sequence[float],
    x: np.ndarray,
    conflicts: ConflictStructure,
    d: int,
    threshold: float = SUPPORT_THRESHOLD,
) -> list[int]:
    """Fractional local ratio on the support of ``x``.

    Repeatedly picks the candidate whose closed neighbourhood carries the
    least fractional mass (at most 2d for a feasible x on d-intervals),
    subtracts its weight from that neighbourhood and drops candidates whose
    weight reaches zero; the picks are then unwound in reverse order, keeping
    each one that does not conflict with those already kept.
    """
    x = np.asarray(x, dtype=float)
    w = np.array(weights, dtype=float)
    support = [v for v in range(len(candidates)) if x[v] >= threshold and w[v] > 0]
    # work in support coordinates: conf[i, j] for support[i], support[j]
    conf = conflicts.among(support)
    xs = x[support]
    ws = w[support]
    active = np.arange(len(support))
    stack: list[int] = []
    while active.size:
        sub = conf[np.ix_(active, active)]
        mass = sub.astype(float) @ xs[active]
        best = int(np.argmin(mass))  # argmin returns the first (smallest index) minimum
        if mass[best] > 2 * d + 1e-9:
            raise SelectionLemmaError(
                f"smallest closed-neighbourhood mass {mass[best]:.6f} exceeds 2d = {2 * d}", x.copy()
            )
        v = int(active[best])
        stack.append(v)
        ws[active[sub[best]]] -= ws[v]
        active = active[ws[active] > 1e-12]
    chosen: list[int] = []
    for v in reversed(stack):
        if not any(conf[v, u] for u in chosen):
            chosen.append(v)
    return sorted(support[v] for v in chosen)


@dataclass(frozen=True)
class ApproxResult:
    solution: Solution
    candidates: tuple[StripCandidate, ...]
    lp: LpSolution | None
    selected: tuple[int, ...]
    dropped: tuple[int, ...]  # selected candidates removed to restore the gap bound

    @property
    def lp_value(self) -> float:
        return 0.0 if self.lp is None else self.lp.value

    @property
    def selected_weight(self) -> int:
        return sum(self.candidates[i].weight for i in self.selected)


def _empty(instance: Instance) -> Solution:
    sol = evaluate(instance, ())
    assert sol is not None
    return sol


def run_approximation(
    instance: Instance, objective: ObjectiveSpec | None = None, L: int = 3
) -> ApproxResult:
    objective = objective or ObjectiveSpec()
    if instance.n < 2:
        return ApproxResult(_empty(instance), (), None, (), ())
    candidates = tuple(enumerate_candidates(instance, L, objective.mode))
    if not candidates:
        return ApproxResult(_empty(instance), (), None, (), ())
    problem = build_relaxation(candidates, instance)
    lp = solve_lp(problem)
    conflicts = build_conflicts(candidates, instance)
    weights = [cand.weight for cand in candidates]
    selected = local_ratio_select(candidates, weights, lp.x, conflicts, instance.d)

    keep = list(selected)
    dropped: list[int] = []
    while True:
        kept = {v for i in keep for v in candidates[i].ids}
        solution = evaluate(instance, kept)
        if solution is not None:
            break
        # selected candidates always form a feasible packing; only a merged
        # strip whose junction exceeds the gap bound can fail here
        victim = _gap_victim(instance, kept, [candidates[i] for i in keep])
        dropped.append(keep.pop(victim))
    return ApproxResult(solution, candidates, lp, tuple(selected), tuple(dropped))


def _gap_victim(instance: Instance, kept: set[int], chosen: list[StripCandidate]) -> int:
    part = strip_partition(induced_subsequences(instance, kept))
    if not part.feasible or instance.delta is None:
        raise AssertionError("candidate packing produced an infeasible kept set")
    owner = {v: i for i, cand in enumerate(chosen) for v in cand.ids}
    for block in part.blocks:
        for a, b in zip(block, block[1:]):
            if owner[abs(a)] == owner[abs(b)]:
                continue
            gap = max(abs(pos[abs(a)] - pos[abs(b)]) - 1 for pos in instance.pos)
            if gap > instance.delta:
                i, j = owner[abs(a)], owner[abs(b)]
                # drop the lighter piece; ties drop the later one
                return i if chosen[i].weight < chosen[j].weight else j
    raise AssertionError(f"no gap violation found although max gap is {max_gap(instance, kept, part)}")


def approximate(instance: Instance, objective: ObjectiveSpec | None = None, L: int = 3) -> Solution:
    """Feasible solution of length at least OPT / (2d) (length mode, no gap bound)."""
    return run_approximation(instance, objective, L).solution


def ratio_bound(optimum: int, d: int) -> float:
    return optimum / (2 * d)


def ceil_ratio_bound(optimum: int, d: int) -> int:
    return math.ceil(optimum / (2 * d))
