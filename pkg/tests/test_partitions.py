import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from levyfields.errors import SizeError
from levyfields.partitions import (SetPartition, all_partitions, bell, crossing_partitions,
                                   moments_from_truncated, pairings, partition_sum,
                                   partitions_into_k, stirling2, truncated_from_moments)


def test_counts():
    assert len(all_partitions(3)) == 5
    assert len(all_partitions(4)) == 15
    assert all_partitions(1) == [SetPartition(((0,),), 1)]
    assert len(partitions_into_k(4, 2)) == 7
    assert len(partitions_into_k(3, 3)) == 1
    assert sum(len(partitions_into_k(4, k)) for k in range(1, 5)) == 15
    assert len(pairings(4)) == 3 and pairings(3) == [] and len(pairings(6)) == 15


@pytest.mark.parametrize("n", range(1, 9))
def test_bell_and_distinct(n):
    ps = all_partitions(n)
    assert len(ps) == bell(n) == len(set(p.blocks for p in ps))
    for p in ps:
        assert all(list(b) == sorted(b) for b in p.blocks)
        assert [b[0] for b in p.blocks] == sorted(b[0] for b in p.blocks)
    for k in range(1, n + 1):
        assert len(partitions_into_k(n, k)) == stirling2(n, k)


def test_bell_values():
    assert [bell(n) for n in range(8)] == [1, 1, 2, 5, 15, 52, 203, 877]


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_pairings_are_k_partitions(n):
    ks = {p.blocks for p in partitions_into_k(n, n // 2)}
    pr = pairings(n)
    assert all(p.blocks in ks for p in pr)
    double_fact = 1
    for j in range(n - 1, 0, -2):
        double_fact *= j
    assert len(pr) == double_fact


def test_crossing():
    assert crossing_partitions(1, 1) == [SetPartition(((0, 1),), 2)]
    assert len(crossing_partitions(2, 1)) == 3
    cross = {p.blocks for p in crossing_partitions(1, 1)}
    rest = [p for p in all_partitions(2) if p.blocks not in cross]
    assert rest == [SetPartition(((0,), (1,)), 2)]


@pytest.mark.parametrize("m,n", [(1, 2), (2, 2), (3, 2), (2, 4)])
def test_crossing_complement_factorizes(m, n):
    cross = {p.blocks for p in crossing_partitions(m, n)}
    rest = [p for p in all_partitions(m + n) if p.blocks not in cross]
    assert len(rest) == bell(m) * bell(n) == bell(m + n) - len(cross)
    for p in rest:
        assert all(b[-1] < m or b[0] >= m for b in p.blocks)


def test_size_guard():
    with pytest.raises(SizeError):
        all_partitions(13)
    with pytest.raises(SizeError):
        pairings(14)
    with pytest.raises(SizeError):
        crossing_partitions(7, 6)
    with pytest.raises(SizeError):
        moments_from_truncated(lambda b: 1.0, 13)


def test_transform_examples():
    assert moments_from_truncated(lambda b: 1.0, 3) == 5
    assert moments_from_truncated(lambda b: 1.0, 4) == 15
    v = 0.7
    assert moments_from_truncated(lambda b: v if len(b) == 2 else 0.0, 4) == pytest.approx(3 * v * v)
    moments = {1: 0.0, 2: 1.0, 3: 0.0, 4: 3.0}
    assert truncated_from_moments(lambda b: moments[len(b)], 2) == 1.0
    assert truncated_from_moments(lambda b: moments[len(b)], 4) == 0.0
    assert truncated_from_moments(lambda b: moments[len(b)], 1) == 0.0


@pytest.mark.parametrize("n", range(1, 8))
def test_recursion_matches_enumeration(n):
    rng = random.Random(n)
    vals = {}

    def t(b):
        return vals.setdefault(b, rng.uniform(-1, 1))

    assert moments_from_truncated(t, n) == pytest.approx(partition_sum(t, all_partitions(n)), rel=1e-12)


def _roundtrip(n, seed):
    rng = random.Random(seed)
    vals = {}

    def t(b):
        return vals.setdefault(b, rng.uniform(-2, 2))

    def m(block):
        return moments_from_truncated(lambda sub: t(tuple(block[i] for i in sub)), len(block))

    full = tuple(range(n))
    return truncated_from_moments(m, n), t(full)


def test_roundtrip_hundred_trials():
    for trial in range(100):
        n = 1 + trial % 5
        got, want = _roundtrip(n, trial)
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


@settings(max_examples=30)
@given(st.integers(1, 6), st.permutations(range(6)))
def test_relabeling_invariance(n, perm):
    # A symmetric evaluator (depends on block content via a symmetric map)
    # gives the same result after relabeling the ground set.
    perm = [p for p in perm if p < n]
    weights = [0.3, -1.1, 0.8, 0.5, 2.0, -0.4]

    def t(b):
        return sum(weights[i] for i in b) ** 2 - len(b)

    def tp(b):
        return t(tuple(sorted(perm[i] for i in b)))

    assert moments_from_truncated(t, n) == pytest.approx(moments_from_truncated(tp, n), rel=1e-12)
