"""One test per acceptance criterion; the terminal summary prints a
PASS/FAIL line for each (see conftest.py)."""

import functools
import random
import time

import pytest

from msrtools.approx import enumerate_candidates, run_approximation
from msrtools.canonical import canonicalize, check_canonical
from msrtools.exact import ExactConfig, ExactTimeout, solve_exact
from msrtools.generators import random_instance
from msrtools.harness import check_source, harness_sources, lemma_check, reduce_for
from msrtools.lp import TOL
from msrtools.model import Instance, ObjectiveSpec, evaluate, induced_subsequences, verify
from msrtools.reductions import (
    embed_source_solution,
    extract_source_solution,
    reduce_ddm_msr,
    reduce_mis_msr3,
    reduce_mis_msr4,
    reduce_sat_msr2,
)
from msrtools.sources import ddm_oracle, mis_oracle

from conftest import kept_from_rows, random_feasible, random_packing
from golden import (
    CNF,
    CNF_ASSIGNMENT,
    DDM,
    DDM_MAPS,
    GRAPH,
    GRAPH_FORESTS,
    GRAPH_INDEPENDENT_SET,
    INTRO_MAPS,
    INTRO_STRIPS,
    MSR3_INDEPENDENT_SET_ROWS,
    MSR3_MAPS,
    MSR4_MAPS,
    SAT_CANONICAL_ALT_ROWS,
    SAT_CANONICAL_ROWS,
    SAT_MAPS,
)

LENGTH = ObjectiveSpec()
ADJACENCY = ObjectiveSpec("adjacency")


def _rows(art):
    return [" ".join(row) for row in art.map_labels()]


def _solution_rows(art, sol):
    return [" ".join(art.labels(m)) for m in induced_subsequences(art.instance, sol.kept)]


@functools.lru_cache(maxsize=None)
def _harness_artifacts(kind, trials):
    return tuple(reduce_for(kind, src) for src in harness_sources(kind, trials))


@functools.lru_cache(maxsize=None)
def _solvable_instances():
    """Every harness gadget the exact solver finishes on, plus 50 random instances."""
    instances = []
    for kind, trials in (("msr4", 50), ("msr3", 20), ("ddm", 30), ("sat", 10)):
        for art in _harness_artifacts(kind, trials):
            instances.append(art.instance)
    rng = random.Random(2024)
    for _ in range(50):
        instances.append(
            random_instance(rng.randint(2, 4), rng.randint(2, 12), seed=rng.randrange(10**6), signed=rng.random() < 0.7)
        )
    solved = []
    for inst in instances:
        if inst.n > 64:
            continue
        try:
            solved.append((inst, solve_exact(inst, LENGTH, ExactConfig(time_limit=30.0))))
        except ExactTimeout:
            continue
    return tuple(solved)


def test_criterion_01_intro_example():
    start = time.perf_counter()
    sol = solve_exact(Instance(INTRO_MAPS))
    assert sol.length == 8
    assert [s.signed_ids for s in sol.strips] == INTRO_STRIPS
    assert time.perf_counter() - start < 1.0


def test_criterion_02_four_map_gadget():
    start = time.perf_counter()
    art = reduce_mis_msr4(GRAPH, GRAPH_FORESTS)
    assert _rows(art) == MSR4_MAPS
    lstar = solve_exact(art.instance).length
    kstar, _ = mis_oracle(GRAPH)
    assert lstar == 8 and kstar == 4 and lstar == 2 * kstar
    assert time.perf_counter() - start <= 60.0


def test_criterion_03_three_map_gadget():
    start = time.perf_counter()
    art = reduce_mis_msr3(GRAPH, GRAPH_FORESTS)
    assert _rows(art) == MSR3_MAPS
    sol = embed_source_solution(art, GRAPH_INDEPENDENT_SET)
    assert verify(art.instance, sol).ok
    assert sol.length == 26 == 2 * (9 + 4)
    assert _solution_rows(art, sol) == MSR3_INDEPENDENT_SET_ROWS
    assert all(check_canonical(art, sol).values())
    assert time.perf_counter() - start < 1.0


def test_criterion_04_sat_gadget():
    start = time.perf_counter()
    art = reduce_sat_msr2(CNF)
    assert _rows(art) == SAT_MAPS
    n, m, q = CNF.n_vars, CNF.m, CNF.q
    assert art.instance.n == 42 == 2 * (5 * n + m + q * m + 2)
    sol = embed_source_solution(art, CNF_ASSIGNMENT)
    assert sol.length == 28 == 2 * (3 * n + m + 3 + 2)
    for rows in (SAT_CANONICAL_ROWS, SAT_CANONICAL_ALT_ROWS):
        ref = evaluate(art.instance, kept_from_rows(art, rows))
        assert ref is not None and verify(art.instance, ref).ok and ref.length == 28
        assert all(check_canonical(art, ref).values())
    assert time.perf_counter() - start < 1.0


def test_criterion_05_matching_gadget():
    start = time.perf_counter()
    art = reduce_ddm_msr(DDM)
    assert _rows(art) == DDM_MAPS
    kstar, _ = ddm_oracle(DDM)
    assert kstar == 2
    assert solve_exact(art.instance).length == 4 == 2 * kstar
    assert time.perf_counter() - start < 1.0


def test_criterion_06_four_map_lemma_harness():
    start = time.perf_counter()
    report = lemma_check("msr4", trials=50, size=8)
    assert all(g.n_vertices <= 8 and g.max_degree <= 3 for g in harness_sources("msr4", 50, size=8))
    assert report.ok, report.counterexamples()
    assert time.perf_counter() - start <= 600.0


def test_criterion_07_three_map_lemma_harness():
    report = lemma_check("msr3", trials=20, size=5, time_limit=300.0)
    assert all(g.n_vertices <= 5 and g.max_degree <= 3 for g in harness_sources("msr3", 20, size=5))
    assert report.ok, report.counterexamples()
    assert all(t.seconds <= 300.0 for t in report.trials)


def test_criterion_08_matching_lemma_harness():
    start = time.perf_counter()
    report = lemma_check("ddm", trials=30, size=7)
    for ddm in harness_sources("ddm", 30, size=7):
        assert ddm.d in (2, 3) and len(ddm.edges) <= 7
    assert report.ok, report.counterexamples()
    assert time.perf_counter() - start <= 300.0


def test_criterion_09_approximation_ratio():
    violations = []
    solved = _solvable_instances()
    assert len(solved) >= 150
    for inst, opt in solved:
        res = run_approximation(inst, LENGTH, 3)
        sol = res.solution
        ok = verify(inst, sol).ok and sol.length * 2 * inst.d >= opt.length and res.lp_value >= opt.length - TOL
        if not ok:
            violations.append((inst.maps, opt.length, sol.length, res.lp_value))
    assert violations == []


def _fuzz(art, rng, count):
    cands = enumerate_candidates(art.instance, 3)
    for k in range(count):
        yield random_feasible(art.instance, rng) if k % 2 else random_packing(art.instance, rng, cands)


def test_criterion_10_canonicalizer_properties():
    rng = random.Random(10)
    per_kind = {"msr4": 0, "msr3": 0, "sat": 0, "ddm": 0}
    for kind in per_kind:
        arts = _harness_artifacts(kind, 10)
        for art in arts:
            for sol in _fuzz(art, rng, 20):
                out, report = canonicalize(art, sol)
                assert out.length >= sol.length
                again, second = canonicalize(art, out)
                assert again.kept == out.kept and not second.changed
                assert all(check_canonical(art, out).values())
                ext = extract_source_solution(art, sol)
                l = sol.length
                src = art.source
                if kind in ("msr4", "ddm"):
                    assert ext.value >= l / 2
                elif kind == "msr3":
                    assert ext.value >= l / 2 - src.n_vertices
                    cover = extract_source_solution(art, sol, "cmsr")
                    assert cover.value <= sol.deleted / 2
                else:
                    assert ext.value >= l / 2 - 3 * src.n_vars - src.m - 2
                per_kind[kind] += 1
    assert all(count >= 200 for count in per_kind.values()), per_kind


def test_criterion_11_gap_two_keeps_the_optimum():
    instances = [art.instance for art in _harness_artifacts("msr4", 50)]
    instances += [art.instance for art in _harness_artifacts("msr3", 20)]
    instances += [
        reduce_mis_msr4(GRAPH, GRAPH_FORESTS).instance,
        reduce_mis_msr3(GRAPH, GRAPH_FORESTS).instance,
        reduce_sat_msr2(CNF).instance,
    ]
    violations = [
        inst.maps
        for inst in instances
        if solve_exact(inst.with_delta(2)).length != solve_exact(inst).length
    ]
    assert violations == []


def test_criterion_12_cmsr_identities():
    for src in harness_sources("msr3", 20):
        t = check_source("cmsr", src)
        n = src.n_vertices
        assert t.detail["x*"] == 4 * n - t.detail["l*"] == 2 * t.detail["c*"]
        assert t.detail["k*"] + t.detail["c*"] == n


def test_criterion_13_adjacency_objective():
    for inst, opt in _solvable_instances():
        assert opt.adjacency == opt.length - opt.strip_count
        adj = solve_exact(inst, ADJACENCY, ExactConfig(time_limit=30.0))
        assert adj.value(ADJACENCY) == adj.length - adj.strip_count
        if inst.n <= 42:
            lp3 = run_approximation(inst, LENGTH, 3).lp_value
            lp4 = run_approximation(inst, LENGTH, 4).lp_value
            assert lp4 >= lp3 - TOL
