"""Exact MSR optimisation by depth-first search over kept-marker subsets.

Markers are decided in map-1 order.  Keeping a marker right after the previous
kept one either links the two into one strip (which forces every marker lying
between them in the other maps to be deleted) or closes the current block.  A
close is only allowed when the pair cannot end up adjacent in every
subsequence, so the blocks built by the search are exactly the maximal strips.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .model import Instance, InputError, ObjectiveSpec, Solution, evaluate

__all__ = [
    "ExactConfig",
    "ExactTimeout",
    "solve_exact",
    "incumbent_upper_bound",
    "should_prune",
]

ENUMERATION_ORDER = "descending size, then lexicographic deleted set"


@dataclass(frozen=True)
class ExactConfig:
    time_limit: float | None = None
    pruning: bool = True
    enumeration_order: str = ENUMERATION_ORDER


class ExactTimeout(RuntimeError):
    def __init__(self, message: str, incumbent: Solution | None):
        super().__init__(message)
        self.incumbent = incumbent


def incumbent_upper_bound(decided_kept: int, undecided: int) -> int:
    """Upper bound on the final strip length below a search node."""
    return decided_kept + undecided


def should_prune(bound: int, incumbent: int) -> bool:
    # ties are still explored so the lexicographic tie-break stays exact
    return bound < incumbent


class _Search:
    def __init__(self, instance: Instance, objective: ObjectiveSpec, config: ExactConfig):
        self.instance = instance
        self.adjacency = objective.mode == "adjacency"
        self.config = config
        self.deadline = None if config.time_limit is None else time.monotonic() + config.time_limit
        first = instance.maps[0]
        n = len(first)
        self.n = n
        self.order = [abs(v) for v in first]
        at = {abs(v): p for p, v in enumerate(first)}
        others = instance.maps[1:]
        delta = instance.delta
        # static link data for map-1 positions i < j
        # link_ok: i and j may sit side by side in one strip.  aligned: they
        # would merge into one strip whenever nothing between them is kept,
        # even if the gap bound then makes the kept set infeasible.
        self.link_ok = [[False] * n for _ in range(n)]
        self.aligned = [[False] * n for _ in range(n)]
        self.between = [[0] * n for _ in range(n)]
        for i in range(n):
            a = first[i]
            for j in range(i + 1, n):
                b = first[j]
                aligned = True
                gap_ok = delta is None or j - i - 1 <= delta
                mask = 0
                for k, m in enumerate(others, start=1):
                    pos, sign = instance.pos[k], instance.sign[k]
                    pa, pb = pos[abs(a)], pos[abs(b)]
                    rel_a = sign[abs(a)] * (1 if a > 0 else -1)
                    rel_b = sign[abs(b)] * (1 if b > 0 else -1)
                    if rel_a != rel_b or (pb - pa) * rel_a <= 0:
                        aligned = False
                        break
                    if delta is not None and abs(pb - pa) - 1 > delta:
                        gap_ok = False
                    lo, hi = sorted((pa, pb))
                    for q in range(lo + 1, hi):
                        mask |= 1 << at[abs(m[q])]
                self.aligned[i][j] = aligned
                self.link_ok[i][j] = aligned and gap_ok
                self.between[i][j] = mask
        self.suffix = [0] * (n + 1)
        for p in range(n - 1, -1, -1):
            self.suffix[p] = self.suffix[p + 1] | (1 << p)
        self.nodes = 0
        self.best_key: tuple[int, int] | None = None
        self.best_deleted: tuple[int, ...] | None = None

    @property
    def best_ids(self) -> tuple[int, ...] | None:
        if self.best_deleted is None:
            return None
        gone = set(self.best_deleted)
        return tuple(v for v in range(1, self.n + 1) if v not in gone)

    def _deleted(self, kept: int) -> tuple[int, ...]:
        return tuple(sorted(self.order[p] for p in range(self.n) if not kept >> p & 1))

    def _offer(self, kept: int, kcount: int, blocks: int) -> None:
        key = (kcount - blocks, kcount) if self.adjacency else (kcount, kcount)
        if self.best_key is None or key > self.best_key:
            self.best_key, self.best_deleted = key, self._deleted(kept)
        elif key == self.best_key:
            deleted = self._deleted(kept)
            if deleted < self.best_deleted:
                self.best_deleted = deleted

    def _tick(self) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes & 0xFFF == 0 and time.monotonic() > self.deadline:
            incumbent = None if self.best_ids is None else evaluate(self.instance, self.best_ids)
            raise ExactTimeout(
                f"exact search exceeded {self.config.time_limit}s after {self.nodes} nodes",
                incumbent,
            )

    def run(self) -> tuple[int, ...]:
        self._dfs(0, 0, 0, -1, 0, 0, 0, ())
        return self.best_ids if self.best_ids is not None else ()

    def _dfs(
        self,
        p: int,
        kept: int,
        forced: int,
        last: int,
        blen: int,
        kcount: int,
        blocks: int,
        pending: tuple[int, ...],
    ) -> None:
        self._tick()
        alive = self.suffix[p] & ~forced
        for mask in pending:
            if not mask & (kept | alive):
                return
        if self.config.pruning and self.best_key is not None:
            undecided = alive.bit_count()
            size_bound = incumbent_upper_bound(kcount, undecided)
            if self.adjacency:
                adj_bound = kcount - blocks + undecided
                if adj_bound < self.best_key[0] or (
                    adj_bound == self.best_key[0] and should_prune(size_bound, self.best_key[1])
                ):
                    return
            elif should_prune(size_bound, self.best_key[0]):
                return
        if p == self.n:
            if last >= 0 and blen < 2:
                return
            if all(mask & kept for mask in pending):
                self._offer(kept, kcount, blocks)
            return
        bit = 1 << p
        if not forced & bit:
            if last < 0:
                self._dfs(p + 1, kept | bit, forced, p, 1, kcount + 1, blocks + 1, pending)
            else:
                between = self.between[last][p]
                if self.link_ok[last][p] and not between & kept:
                    self._dfs(p + 1, kept | bit, forced | between, p, blen + 1, kcount + 1, blocks, pending)
                if blen >= 2:
                    if not self.aligned[last][p] or between & kept:
                        self._dfs(p + 1, kept | bit, forced, p, 1, kcount + 1, blocks + 1, pending)
                    elif between:
                        self._dfs(
                            p + 1, kept | bit, forced, p, 1, kcount + 1, blocks + 1, pending + (between,)
                        )
        self._dfs(p + 1, kept, forced, last, blen, kcount, blocks, pending)


def solve_exact(
    instance: Instance, objective: ObjectiveSpec | None = None, config: ExactConfig | None = None
) -> Solution:
    """Optimal solution; ties go to the lexicographically smallest deleted set.

    For cmsr the optimum is the same kept set (fewest deletions = longest
    strips).  In adjacency mode larger kept sets win ties on adjacency.
    Raises ExactTimeout (carrying the incumbent) when the time limit is hit.
    """
    objective = objective or ObjectiveSpec()
    config = config or ExactConfig()
    if instance.n > 64:
        raise InputError(f"exact search is limited to 64 markers, got {instance.n}")
    ids = _Search(instance, objective, config).run()
    solution = evaluate(instance, ids)
    if solution is None:
        raise AssertionError(f"exact search produced an infeasible kept set {ids}")
    return solution
