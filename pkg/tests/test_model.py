import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from msrtools.model import (
    InputError,
    Instance,
    ObjectiveSpec,
    Solution,
    Strip,
    evaluate,
    induced_subsequences,
    max_gap,
    strip_partition,
    verify,
)

from conftest import naive_blocks
from golden import INTRO_MAPS

INTRO = Instance(INTRO_MAPS)
INTRO_KEPT = {1, 3, 6, 7, 8, 10, 11, 12}


@st.composite
def instances(draw, max_n=7, max_d=3):
    n = draw(st.integers(1, max_n))
    d = draw(st.integers(2, max_d))
    maps = [tuple(range(1, n + 1))]
    for _ in range(d - 1):
        perm = draw(st.permutations(range(1, n + 1)))
        signs = draw(st.lists(st.booleans(), min_size=n, max_size=n))
        maps.append(tuple(v if s else -v for v, s in zip(perm, signs)))
    return Instance(tuple(maps))


# ----------------------------------------------------------- validation


@pytest.mark.parametrize(
    "maps",
    [
        ((1, 2, 3),),
        ((1, 2, 3), (1, 2)),
        ((1, 2, 3), (1, 1, 3)),
        ((1, 2, 3), (1, 2, 4)),
        ((1, 0, 2), (1, 2, 0)),
    ],
)
def test_instance_rejects_malformed_maps(maps):
    with pytest.raises(InputError):
        Instance(maps)


def test_instance_rejects_negative_delta_and_signed_positive():
    with pytest.raises(InputError):
        Instance(((1, 2), (1, 2)), delta=-1)
    with pytest.raises(InputError):
        Instance.positive(((1, 2), (1, -2)))


def test_strip_needs_two_markers():
    with pytest.raises(InputError):
        Strip((3,))


def test_cmsr_requires_length_mode():
    with pytest.raises(InputError):
        ObjectiveSpec("adjacency", "cmsr")
    with pytest.raises(InputError):
        ObjectiveSpec("size")


# ------------------------------------------------------- subsequences


def test_intro_subsequences():
    subs = induced_subsequences(INTRO, INTRO_KEPT)
    assert subs[0] == (1, 3, 6, 7, 8, 10, 11, 12)
    assert subs[1] == (-8, -7, -6, 1, 3, -12, -11, -10)


def test_empty_kept_gives_empty_sequences():
    assert induced_subsequences(INTRO, set()) == [(), ()]


def test_direct_deletion():
    inst = Instance(((1, 2, 3), (2, 1, 3)))
    assert induced_subsequences(inst, {1, 3}) == [(1, 3), (1, 3)]


def test_unknown_kept_id_rejected():
    with pytest.raises(InputError):
        induced_subsequences(INTRO, {13})


# ----------------------------------------------------------- partition


def test_intro_partition():
    part = strip_partition(induced_subsequences(INTRO, INTRO_KEPT))
    assert part.feasible
    assert [s.signed_ids for s in part.strips] == [(1, 3), (6, 7, 8), (10, 11, 12)]


def test_identical_sequences_form_one_strip():
    part = strip_partition([(1, 2, 3, 4), (1, 2, 3, 4)])
    assert [s.signed_ids for s in part.strips] == [(1, 2, 3, 4)]


def test_unsigned_reversal_is_not_a_strip():
    part = strip_partition([(1, 2), (2, 1)])
    assert not part.feasible
    assert part.lone == (1, 2)


def test_signed_reversal_is_a_strip():
    part = strip_partition([(1, 2), (-2, -1)])
    assert [s.signed_ids for s in part.strips] == [(1, 2)]


def test_partition_rejects_id_mismatch():
    with pytest.raises(InputError):
        strip_partition([(1, 2), (1, 3)])


@settings(max_examples=200, deadline=None)
@given(instances(), st.data())
def test_partition_matches_whole_block_oracle(inst, data):
    kept = data.draw(st.sets(st.integers(1, inst.n)))
    part = strip_partition(induced_subsequences(inst, kept))
    blocks = naive_blocks(inst, kept)
    if blocks is None:
        assert not part.feasible
    else:
        assert part.feasible
        assert [s.signed_ids for s in part.strips] == [tuple(b) for b in blocks]


def test_prefix_closure_by_brute_force():
    # every prefix of a block common to two short sequences is also common
    rng = random.Random(3)
    for _ in range(300):
        n = rng.randint(2, 6)
        other = list(range(1, n + 1))
        rng.shuffle(other)
        other = tuple(v if rng.random() < 0.5 else -v for v in other)
        part = strip_partition([tuple(range(1, n + 1)), other])
        for block in part.blocks:
            for k in range(2, len(block) + 1):
                prefix = block[:k]
                rev = tuple(-v for v in reversed(prefix))
                windows = {other[i : i + k] for i in range(n - k + 1)}
                assert prefix in windows or rev in windows


# ---------------------------------------------------------------- gap


def test_gap_counts_deleted_markers():
    inst = Instance(((1, 2, 3), (1, 2, 3)))
    part = strip_partition(induced_subsequences(inst, {1, 3}))
    assert max_gap(inst, {1, 3}, part) == 1
    full = strip_partition(induced_subsequences(inst, {1, 2, 3}))
    assert max_gap(inst, {1, 2, 3}, full) == 0


def test_intro_gap_is_one():
    part = strip_partition(induced_subsequences(INTRO, INTRO_KEPT))
    # -5 sits between -8 and -7 in the second map, marker 2 between 1 and 3 in the first
    assert max_gap(INTRO, INTRO_KEPT, part) == 1


def test_gap_bound_makes_kept_set_infeasible():
    assert evaluate(INTRO.with_delta(0), INTRO_KEPT) is None
    assert evaluate(INTRO.with_delta(1), INTRO_KEPT) is not None


# ----------------------------------------------------------- evaluate


def test_intro_objectives():
    sol = evaluate(INTRO, INTRO_KEPT)
    assert sol.length == 8
    assert sol.value(ObjectiveSpec("adjacency")) == 5
    assert sol.value(ObjectiveSpec("length", "cmsr")) == 4


def test_empty_kept_is_feasible():
    sol = evaluate(INTRO, set())
    assert sol.length == 0 and sol.strips == () and sol.deleted == 12


@pytest.mark.parametrize("d,n", [(2, 2), (3, 5), (4, 7)])
def test_identical_maps_give_one_strip(d, n):
    inst = Instance.positive([tuple(range(1, n + 1))] * d)
    sol = evaluate(inst, range(1, n + 1))
    assert sol.strip_count == 1 and sol.length == n


@settings(max_examples=150, deadline=None)
@given(instances(), st.data())
def test_solution_identities(inst, data):
    kept = data.draw(st.sets(st.integers(1, inst.n)))
    sol = evaluate(inst, kept)
    if sol is None:
        return
    assert sol.length == len(kept) == sum(len(s) for s in sol.strips)
    assert sol.adjacency == sol.length - sol.strip_count
    assert sol.deleted == inst.n - sol.length
    assert sorted(v for s in sol.strips for v in s.ids) == sorted(kept)


@settings(max_examples=150, deadline=None)
@given(instances(), st.data())
def test_map_order_does_not_change_length(inst, data):
    kept = data.draw(st.sets(st.integers(1, inst.n)))
    order = data.draw(st.permutations(range(inst.d)))
    permuted = Instance(tuple(inst.maps[i] for i in order))
    a, b = evaluate(inst, kept), evaluate(permuted, kept)
    assert (a is None) == (b is None)
    if a is not None:
        assert a.length == b.length and a.strip_count == b.strip_count


def test_partition_is_deterministic():
    subs = induced_subsequences(INTRO, INTRO_KEPT)
    assert strip_partition(subs) == strip_partition([tuple(s) for s in subs])


def test_non_maximal_splits_never_rescue_a_lone_marker():
    # whenever some split of map 1 into >= 2-blocks is common to all maps,
    # the maximal partition is feasible too
    rng = random.Random(11)
    for _ in range(400):
        n = rng.randint(2, 6)
        maps = [tuple(range(1, n + 1))]
        for _ in range(rng.randint(1, 2)):
            p = list(range(1, n + 1))
            rng.shuffle(p)
            maps.append(tuple(v if rng.random() < 0.5 else -v for v in p))
        inst = Instance(tuple(maps))
        seq = maps[0]
        for cuts in itertools.product((0, 1), repeat=n - 1):
            blocks, cur = [], [seq[0]]
            for v, c in zip(seq[1:], cuts):
                if c:
                    blocks.append(cur)
                    cur = []
                cur.append(v)
            blocks.append(cur)
            if any(len(b) < 2 for b in blocks):
                continue
            if all(_common(tuple(b), inst) for b in blocks):
                assert strip_partition(inst.maps).feasible
                break


def _common(block, inst):
    k = len(block)
    rev = tuple(-v for v in reversed(block))
    return all(
        any(m[i : i + k] in (block, rev) for i in range(len(m) - k + 1)) for m in inst.maps[1:]
    )


# ------------------------------------------------------------- verify


def test_verify_accepts_correct_solution():
    assert verify(INTRO, evaluate(INTRO, INTRO_KEPT)).ok


def test_verify_flags_fabricated_strip():
    sol = evaluate(INTRO, INTRO_KEPT)
    fake = Solution(sol.kept, sol.strips + (Strip((4, 5)),), sol.length, sol.strip_count, sol.adjacency, sol.deleted)
    report = verify(INTRO, fake)
    assert not report.ok and not report.checks["strips"]


def test_verify_flags_lone_marker():
    kept = frozenset({1, 3, 5})
    claimed = Solution(kept, (Strip((1, 3)),), 3, 1, 2, 9)
    report = verify(INTRO, claimed)
    assert not report.checks["no_lone_markers"]


def test_verify_flags_wrong_values_and_gap():
    sol = evaluate(INTRO, INTRO_KEPT)
    bad = Solution(sol.kept, sol.strips, 9, sol.strip_count, sol.adjacency, sol.deleted)
    assert not verify(INTRO, bad).checks["length"]
    report = verify(INTRO.with_delta(0), sol)
    assert not report.checks["gap"]
