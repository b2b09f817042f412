"""Seeded random generators for source problems and MSR instances."""

from __future__ import annotations

import itertools
import random

from .model import InputError, Instance
from .sources import CnfInstance, DdmInstance, Graph

__all__ = ["random_graph", "random_sat32", "random_ddm", "random_instance", "GENERATOR_KINDS"]

GENERATOR_KINDS = ("graph-maxdeg", "sat32", "ddm", "random-permutation-instance")


def random_graph(n: int, max_degree: int = 3, seed: int = 0, density: float = 0.7) -> Graph:
    """Simple graph on 1..n with maximum degree at most ``max_degree``.

    Vertex pairs are visited in random order and each is added with
    probability ``density`` when both endpoints still have spare degree.
    """
    if n < 1:
        raise InputError("graph needs at least one vertex")
    if not 0 <= max_degree <= 4:
        raise InputError("max degree must be between 0 and 4")
    if not 0.0 <= density <= 1.0:
        raise InputError("density must lie in [0, 1]")
    rng = random.Random(seed)
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    rng.shuffle(pairs)
    deg = [0] * (n + 1)
    edges = []
    for u, v in pairs:
        if deg[u] < max_degree and deg[v] < max_degree and rng.random() < density:
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
    return Graph(n, tuple(sorted(edges)))


def random_sat32(n: int, seed: int = 0, max_tries: int = 10_000) -> CnfInstance:
    """Two-literal clauses where each of the n variables occurs three times
    with both signs present; n must be even, giving m = 3n/2 clauses."""
    if n < 2 or n % 2:
        raise InputError("sat32 needs an even number of variables, at least 2")
    rng = random.Random(seed)
    slots = [v for v in range(1, n + 1) for _ in range(3)]
    for _ in range(max_tries):
        rng.shuffle(slots)
        clauses = [tuple(slots[k : k + 2]) for k in range(0, len(slots), 2)]
        if all(a != b for a, b in clauses):
            break
    else:
        raise InputError(f"no valid clause layout found in {max_tries} tries")
    # one occurrence per variable carries the minority sign
    minority = {v: (rng.randrange(3), rng.random() < 0.5) for v in range(1, n + 1)}
    seen = {v: 0 for v in range(1, n + 1)}
    signed = []
    for clause in clauses:
        lits = []
        for v in clause:
            k, minority_positive = minority[v]
            positive = minority_positive if seen[v] == k else not minority_positive
            seen[v] += 1
            lits.append(v if positive else -v)
        signed.append(tuple(lits))
    return CnfInstance(n, tuple(signed))


def random_ddm(sizes: tuple[int, ...], m: int, seed: int = 0) -> DdmInstance:
    """``m`` distinct hyper-edges drawn uniformly from the product of the sets."""
    if not sizes or any(s < 1 for s in sizes):
        raise InputError("every vertex set needs at least one element")
    total = 1
    for s in sizes:
        total *= s
    if not 1 <= m <= total:
        raise InputError(f"cannot draw {m} distinct hyper-edges from {total}")
    rng = random.Random(seed)
    chosen: set[tuple[int, ...]] = set()
    edges = []
    while len(edges) < m:
        e = tuple(rng.randint(1, s) for s in sizes)
        if e not in chosen:
            chosen.add(e)
            edges.append(e)
    return DdmInstance(tuple(sizes), tuple(edges))


def random_instance(d: int, n: int, seed: int = 0, signed: bool = True, delta: int | None = None) -> Instance:
    """``d`` uniformly random (signed) permutations of 1..n; the first map is
    kept as the identity so ids follow map-1 order."""
    if d < 2 or n < 1:
        raise InputError("need d >= 2 maps and n >= 1 markers")
    rng = random.Random(seed)
    maps = [tuple(range(1, n + 1))]
    for _ in range(d - 1):
        perm = list(range(1, n + 1))
        rng.shuffle(perm)
        if signed:
            perm = [v if rng.random() < 0.5 else -v for v in perm]
        maps.append(tuple(perm))
    if signed:
        return Instance(tuple(maps), delta=delta)
    return Instance.positive(tuple(maps), delta=delta)
