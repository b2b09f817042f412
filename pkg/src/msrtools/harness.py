"""Desk-scale checks of the reduction identities on random source instances.

For each trial a source instance is drawn, reduced, and both optima are
computed exhaustively (source by oracle, MSR by the exact solver):

* msr4, ddm:  l* = 2 k*
* msr3:       l* = 2 (n + k*)
* cmsr:       x* = 4n - l* = 2 c*  and  k* + c* = n  (on msr3 gadgets)
* sat:        the gadget is too large for exhaustive search, so the check is
              constructive instead: embedding an optimal assignment reaches
              2 (3n + m + k* + 2), and extraction from the exact-length
              canonical solution and from approximate solutions meets its bound.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .approx import approximate
from .exact import ExactConfig, solve_exact
from .generators import random_ddm, random_graph, random_sat32
from .io import SourceSpec, format_source
from .model import InputError, ObjectiveSpec
from .reductions import (
    ReductionArtifact,
    embed_source_solution,
    extract_source_solution,
    reduce_ddm_msr,
    reduce_mis_msr3,
    reduce_mis_msr4,
    reduce_sat_msr2,
)
from .sources import ddm_oracle, mis_oracle, sat_oracle, vc_oracle

__all__ = [
    "TrialResult",
    "LemmaReport",
    "LEMMA_KINDS",
    "harness_sources",
    "check_source",
    "lemma_check",
    "DEFAULT_SIZES",
]

LEMMA_KINDS = ("msr4", "msr3", "ddm", "sat", "cmsr")

# largest source size drawn per kind (vertices, vertices, hyper-edges, variables, vertices)
DEFAULT_SIZES = {"msr4": 8, "msr3": 5, "ddm": 7, "sat": 4, "cmsr": 5}

SAT_NOTE = (
    "sat: exhaustive search on the gadget is out of reach; checked the embedded optimum "
    "and the extraction bound instead"
)


@dataclass(frozen=True)
class TrialResult:
    index: int
    source: str  # serialized source instance
    lhs: float
    rhs: float
    ok: bool
    seconds: float
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class LemmaReport:
    kind: str
    trials: tuple[TrialResult, ...]
    note: str = ""

    @property
    def passed(self) -> int:
        return sum(t.ok for t in self.trials)

    @property
    def failed(self) -> int:
        return len(self.trials) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def counterexamples(self) -> list[TrialResult]:
        return [t for t in self.trials if not t.ok]


def harness_sources(kind: str, trials: int, seed: int = 0, size: int | None = None) -> list:
    """The deterministic list of source instances used by ``lemma_check``."""
    if kind not in LEMMA_KINDS:
        raise InputError(f"unknown lemma kind {kind!r}; expected one of {LEMMA_KINDS}")
    size = DEFAULT_SIZES[kind] if size is None else size
    rng = random.Random(seed)
    out = []
    for _ in range(trials):
        sub = rng.randrange(2**31)
        if kind in ("msr4", "msr3", "cmsr"):
            out.append(random_graph(rng.randint(1, size), 3, seed=sub, density=rng.choice((0.4, 0.7, 1.0))))
        elif kind == "ddm":
            d = rng.choice((2, 3))
            sizes = tuple(rng.randint(1, 3) for _ in range(d))
            total = 1
            for s in sizes:
                total *= s
            m = rng.randint(1, min(size, total))
            out.append(random_ddm(sizes, m, seed=sub))
        else:
            n = rng.choice([v for v in range(2, size + 1, 2)])
            out.append(random_sat32(n, seed=sub))
    return out


def reduce_for(kind: str, source) -> ReductionArtifact:
    if kind == "msr4":
        return reduce_mis_msr4(source)
    if kind in ("msr3", "cmsr"):
        return reduce_mis_msr3(source)
    if kind == "ddm":
        return reduce_ddm_msr(source)
    return reduce_sat_msr2(source)


def _trial(kind: str, index: int, source, config: ExactConfig) -> TrialResult:
    start = time.perf_counter()
    art = reduce_for(kind, source)
    text = format_source(SourceSpec(source, art.forests.forests if art.forests else None))
    detail: dict = {}
    if kind == "sat":
        k, assignment = sat_oracle(source)
        n, m = source.n_vars, source.m
        target = 2 * (3 * n + m + k + 2)
        embedded = embed_source_solution(art, assignment)
        ok = embedded.length == target
        for sol in (embedded, approximate(art.instance)):
            ext = extract_source_solution(art, sol)
            ok = ok and ext.bound_holds
            detail.setdefault("extracted", []).append((sol.length, ext.value, ext.bound))
        detail["k*"] = k
        return TrialResult(index, text, embedded.length, target, ok, time.perf_counter() - start, detail)

    sol = solve_exact(art.instance, None, config)
    lstar = sol.length
    if kind == "msr4":
        k, _ = mis_oracle(source)
        lhs, rhs = lstar, 2 * k
    elif kind == "msr3":
        k, _ = mis_oracle(source)
        lhs, rhs = lstar, 2 * (source.n_vertices + k)
    elif kind == "ddm":
        k, _ = ddm_oracle(source)
        lhs, rhs = lstar, 2 * k
    else:
        n = source.n_vertices
        k, _ = mis_oracle(source)
        c, _ = vc_oracle(source)
        cmsr = solve_exact(art.instance, ObjectiveSpec("length", "cmsr"), config)
        x = cmsr.deleted
        detail.update({"x*": x, "c*": c, "k*": k, "l*": lstar})
        ok = x == 4 * n - lstar == 2 * c and k + c == n
        return TrialResult(index, text, x, 2 * c, ok, time.perf_counter() - start, detail)
    detail.update({"l*": lstar, "k*": k})
    return TrialResult(index, text, lhs, rhs, lhs == rhs, time.perf_counter() - start, detail)


def check_source(kind: str, source, time_limit: float | None = 300.0) -> TrialResult:
    """Run one lemma check on a given source instance."""
    if kind not in LEMMA_KINDS:
        raise InputError(f"unknown lemma kind {kind!r}; expected one of {LEMMA_KINDS}")
    return _trial(kind, 0, source, ExactConfig(time_limit=time_limit))


def lemma_check(
    kind: str,
    trials: int = 20,
    seed: int = 0,
    size: int | None = None,
    time_limit: float | None = 300.0,
) -> LemmaReport:
    config = ExactConfig(time_limit=time_limit)
    results = tuple(
        _trial(kind, i, src, config) for i, src in enumerate(harness_sources(kind, trials, seed, size))
    )
    return LemmaReport(kind, results, SAT_NOTE if kind == "sat" else "")
