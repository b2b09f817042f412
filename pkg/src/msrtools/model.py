"""Genomic maps, strips and the MSR objective family.

Markers are non-zero integers: the absolute value is the marker id (1-based)
and the sign is the orientation.  A map is a tuple of such integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "InputError",
    "Instance",
    "Strip",
    "StripPartition",
    "Solution",
    "ObjectiveSpec",
    "VerificationReport",
    "induced_subsequences",
    "strip_partition",
    "max_gap",
    "evaluate",
    "verify",
]


class InputError(ValueError):
    """Malformed instance, kept set, or source object."""


@dataclass(frozen=True)
class Instance:
    maps: tuple[tuple[int, ...], ...]
    delta: int | None = None
    # validation annotation only: it never changes which kept sets are feasible
    all_positive: bool = field(default=False, compare=False)
    # derived lookup tables; position is 0-based inside the original map
    pos: tuple[dict[int, int], ...] = field(init=False, repr=False, compare=False)
    sign: tuple[dict[int, int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        maps = tuple(tuple(int(v) for v in m) for m in self.maps)
        object.__setattr__(self, "maps", maps)
        if len(maps) < 2:
            raise InputError(f"need at least two maps, got {len(maps)}")
        n = len(maps[0])
        universe = set(range(1, n + 1))
        for i, m in enumerate(maps):
            if len(m) != n:
                raise InputError(f"map {i + 1} has {len(m)} markers, expected {n}")
            ids = [abs(v) for v in m]
            if 0 in ids:
                raise InputError(f"map {i + 1} contains marker 0")
            if len(set(ids)) != n:
                raise InputError(f"map {i + 1} contains duplicate markers")
            if set(ids) != universe:
                raise InputError(f"map {i + 1} is not a permutation of 1..{n}")
            if self.all_positive and any(v < 0 for v in m):
                raise InputError(f"map {i + 1} has a negative marker but all_positive is set")
        if self.delta is not None and self.delta < 0:
            raise InputError("delta must be non-negative")
        object.__setattr__(self, "pos", tuple({abs(v): p for p, v in enumerate(m)} for m in maps))
        object.__setattr__(
            self, "sign", tuple({abs(v): (1 if v > 0 else -1) for v in m} for m in maps)
        )

    @property
    def d(self) -> int:
        return len(self.maps)

    @property
    def n(self) -> int:
        return len(self.maps[0])

    def with_delta(self, delta: int | None) -> "Instance":
        return Instance(self.maps, delta=delta, all_positive=self.all_positive)

    @classmethod
    def positive(cls, maps: Iterable[Sequence[int]], delta: int | None = None) -> "Instance":
        return cls(tuple(tuple(m) for m in maps), delta=delta, all_positive=True)


@dataclass(frozen=True)
class Strip:
    """A strip in map-1 orientation."""

    signed_ids: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.signed_ids) < 2:
            raise InputError("a strip has at least two markers")

    def __len__(self) -> int:
        return len(self.signed_ids)

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(abs(v) for v in self.signed_ids)


@dataclass(frozen=True)
class StripPartition:
    """Left-greedy maximal blocks of subsequence 1.

    ``blocks`` includes length-1 blocks; ``lone`` lists their markers.  The
    partition is feasible when there are none.
    """

    blocks: tuple[tuple[int, ...], ...]

    @property
    def lone(self) -> tuple[int, ...]:
        return tuple(abs(b[0]) for b in self.blocks if len(b) == 1)

    @property
    def feasible(self) -> bool:
        return all(len(b) >= 2 for b in self.blocks)

    @property
    def strips(self) -> tuple[Strip, ...]:
        return tuple(Strip(b) for b in self.blocks if len(b) >= 2)


@dataclass(frozen=True)
class ObjectiveSpec:
    mode: str = "length"
    variant: str = "msr"

    def __post_init__(self) -> None:
        if self.mode not in ("length", "adjacency"):
            raise InputError(f"unknown objective mode {self.mode!r}")
        if self.variant not in ("msr", "cmsr"):
            raise InputError(f"unknown variant {self.variant!r}")
        if self.variant == "cmsr" and self.mode != "length":
            raise InputError("cmsr is only defined for the length objective")


@dataclass(frozen=True)
class Solution:
    kept: frozenset[int]
    strips: tuple[Strip, ...]
    length: int
    strip_count: int
    adjacency: int
    deleted: int

    def value(self, objective: ObjectiveSpec) -> int:
        """Objective value; for cmsr this is the (minimised) deletion count."""
        if objective.variant == "cmsr":
            return self.deleted
        return self.adjacency if objective.mode == "adjacency" else self.length


def _check_kept(instance: Instance, kept: Iterable[int]) -> frozenset[int]:
    kept = frozenset(int(v) for v in kept)
    bad = sorted(v for v in kept if not 1 <= v <= instance.n)
    if bad:
        raise InputError(f"unknown marker ids in kept set: {bad}")
    return kept


def induced_subsequences(instance: Instance, kept: Iterable[int]) -> list[tuple[int, ...]]:
    kept = _check_kept(instance, kept)
    return [tuple(v for v in m if abs(v) in kept) for m in instance.maps]


def strip_partition(subsequences: Sequence[Sequence[int]]) -> StripPartition:
    if not subsequences:
        raise InputError("no subsequences given")
    first = list(subsequences[0])
    ids = {abs(v) for v in first}
    others = []
    for i, s in enumerate(subsequences[1:], start=2):
        if {abs(v) for v in s} != ids or len(s) != len(first):
            raise InputError(f"subsequence {i} has a different marker set")
        others.append(({abs(v): p for p, v in enumerate(s)}, {abs(v): v for v in s}))

    def linked(a: int, b: int) -> bool:
        # a, b consecutive in subsequence 1 (signed as there)
        for pos, signed in others:
            pa, pb = pos[abs(a)], pos[abs(b)]
            sa, sb = signed[abs(a)], signed[abs(b)]
            if sa == a and sb == b:
                if pb != pa + 1:
                    return False
            elif sa == -a and sb == -b:
                if pb != pa - 1:
                    return False
            else:
                return False
        return True

    blocks: list[tuple[int, ...]] = []
    current: list[int] = []
    for v in first:
        if current and linked(current[-1], v):
            current.append(v)
        else:
            if current:
                blocks.append(tuple(current))
            current = [v]
    if current:
        blocks.append(tuple(current))
    return StripPartition(tuple(blocks))


def max_gap(instance: Instance, kept: Iterable[int], partition: StripPartition) -> int:
    _check_kept(instance, kept)
    worst = 0
    # strip neighbours are adjacent in every subsequence, so every marker
    # between them in an original map is a deleted one
    for pos in instance.pos:
        for block in partition.blocks:
            for a, b in zip(block, block[1:]):
                worst = max(worst, abs(pos[abs(a)] - pos[abs(b)]) - 1)
    return worst


def evaluate(
    instance: Instance, kept: Iterable[int], objective: ObjectiveSpec | None = None
) -> Solution | None:
    """Solution for ``kept``, or None when the kept set is infeasible."""
    kept = _check_kept(instance, kept)
    part = strip_partition(induced_subsequences(instance, kept))
    if not part.feasible:
        return None
    if instance.delta is not None and max_gap(instance, kept, part) > instance.delta:
        return None
    strips = part.strips
    length = len(kept)
    return Solution(
        kept=kept,
        strips=strips,
        length=length,
        strip_count=len(strips),
        adjacency=length - len(strips),
        deleted=instance.n - length,
    )


@dataclass
class VerificationReport:
    checks: dict[str, bool] = field(default_factory=dict)
    messages: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, passed: bool, message: str = "") -> None:
        self.checks[name] = passed
        if not passed and message:
            self.messages.append(f"{name}: {message}")


def verify(instance: Instance, claimed: Solution) -> VerificationReport:
    report = VerificationReport()
    bad = sorted(v for v in claimed.kept if not 1 <= v <= instance.n)
    report.record("kept_ids", not bad, f"unknown ids {bad}")
    if bad:
        return report
    part = strip_partition(induced_subsequences(instance, claimed.kept))
    report.record("no_lone_markers", part.feasible, f"lone markers {list(part.lone)}")
    strips = part.strips
    report.record(
        "strips",
        sorted(s.signed_ids for s in strips) == sorted(s.signed_ids for s in claimed.strips),
        "claimed strips differ from the recomputed partition",
    )
    length = len(claimed.kept)
    report.record("length", claimed.length == length, f"claimed {claimed.length}, actual {length}")
    report.record(
        "strip_count",
        claimed.strip_count == len(strips),
        f"claimed {claimed.strip_count}, actual {len(strips)}",
    )
    report.record(
        "adjacency",
        claimed.adjacency == length - len(strips),
        f"claimed {claimed.adjacency}, actual {length - len(strips)}",
    )
    report.record(
        "deleted",
        claimed.deleted == instance.n - length,
        f"claimed {claimed.deleted}, actual {instance.n - length}",
    )
    if instance.delta is not None and part.feasible:
        gap = max_gap(instance, claimed.kept, part)
        report.record("gap", gap <= instance.delta, f"max gap {gap} exceeds delta {instance.delta}")
    return report
