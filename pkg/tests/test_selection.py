import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afp import ValidationError, select_centroid, select_highest_score, select_representatives
from afp.clustering import ClusterSet

from oracles import random_distance_matrix


def test_highest_score_singleton():
    scores = np.array([0.1, 0.2, 0.3])
    times = np.array([0.0, 1.0, 2.0])
    assert select_highest_score([1], scores, times) == 1


def test_highest_score_argmax():
    scores = np.zeros(10)
    scores[[4, 7, 9]] = [0.2, 0.9, 0.5]
    times = np.arange(10, dtype=float)
    assert select_highest_score([4, 7, 9], scores, times) == 7


def test_highest_score_tie_breaks_on_timestamp():
    scores = np.array([0.5, 0.5])
    times = np.array([10.0, 3.0])
    assert select_highest_score([0, 1], scores, times) == 1


def test_highest_score_tie_breaks_on_index_last():
    scores = np.array([0.5, 0.5])
    times = np.array([3.0, 3.0])
    assert select_highest_score([0, 1], scores, times) == 0


def test_highest_score_empty_cluster_rejected():
    with pytest.raises(ValidationError):
        select_highest_score([], np.array([]), np.array([]))


def test_centroid_singleton_is_itself():
    d = np.zeros((3, 3))
    assert select_centroid([2], d, np.arange(3, dtype=float)) == 2


def test_centroid_two_members_earliest_timestamp_wins():
    d = np.array([[0.0, 0.4], [0.4, 0.0]])
    assert select_centroid([0, 1], d, np.array([9.0, 2.0])) == 1


def test_centroid_three_member_example():
    # off-diagonal distances chosen so mean-to-others are (0.4, 0.2, 0.4)
    d = np.array(
        [
            [0.0, 0.2, 0.6],
            [0.2, 0.0, 0.2],
            [0.6, 0.2, 0.0],
        ]
    )
    times = np.array([0.0, 1.0, 2.0])
    members = [0, 1, 2]
    # brute-force oracle over member means
    means = {
        i: sum(d[i][j] for j in members if j != i) / (len(members) - 1) for i in members
    }
    assert means[0] == pytest.approx(0.4) and means[1] == pytest.approx(0.2)
    assert select_centroid(members, d, times) == min(members, key=lambda i: means[i])
    assert select_centroid(members, d, times) == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 100_000))
def test_centroid_brute_force_agreement(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 9))
    d = random_distance_matrix(rng, n)
    times = rng.uniform(0, 100, size=n)
    members = sorted(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False).tolist())
    picked = select_centroid(members, d, times)
    if len(members) == 1:
        assert picked == members[0]
    else:
        means = {
            i: math.fsum(d[i][j] for j in members if j != i) / (len(members) - 1)
            for i in members
        }
        best = min(members, key=lambda i: (means[i], times[i], i))
        assert picked == best


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 100_000))
def test_highest_score_invariant_under_monotone_transform(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 12))
    scores = rng.uniform(-5, 5, size=n)
    times = rng.uniform(0, 50, size=n)
    members = sorted(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False).tolist())
    base = select_highest_score(members, scores, times)
    for transform in (lambda s: 3.0 * s + 1.0, np.exp, lambda s: s**3):
        assert select_highest_score(members, transform(scores), times) == base


def test_centroid_invariant_under_constant_shift():
    rng = np.random.default_rng(8)
    n = 6
    d = random_distance_matrix(rng, n)
    times = rng.uniform(0, 10, size=n)
    members = [0, 2, 3, 5]
    shifted = d.copy()
    off_diag = ~np.eye(n, dtype=bool)
    shifted[off_diag] += 0.37
    assert select_centroid(members, d, times) == select_centroid(members, shifted, times)


def test_select_representatives_layout():
    clusters = ClusterSet(clusters=((0, 1), (2,), (3, 4)), merge_log=())
    rng = np.random.default_rng(0)
    d = random_distance_matrix(rng, 5)
    scores = np.array([1.0, 5.0, 2.0, 0.5, 0.7])
    times = np.array([30.0, 31.0, 2.0, 10.0, 11.0])
    ids = [f"f{i}" for i in range(5)]

    pruned = select_representatives(
        clusters, strategy="highest_score", scores=scores, timestamps=times, frame_ids=ids, d_cos=d
    )
    picked = pruned.frame_indices()
    # one representative per cluster, each a member, unique, timestamp order
    assert len(picked) == 3
    assert len(set(picked)) == 3
    for rep, members in zip(sorted(pruned.representatives, key=lambda r: r.cluster_index),
                            clusters.clusters):
        assert rep.frame_index in members
    times_out = [r.timestamp_s for r in pruned.representatives]
    assert times_out == sorted(times_out)
    assert pruned.representatives[0].frame_id == "f2"


def test_select_representatives_rejects_unknown_strategy():
    clusters = ClusterSet(clusters=((0,),), merge_log=())
    with pytest.raises(ValidationError):
        select_representatives(
            clusters,
            strategy="magic",
            scores=np.zeros(1),
            timestamps=np.zeros(1),
            frame_ids=["f0"],
            d_cos=np.zeros((1, 1)),
        )
