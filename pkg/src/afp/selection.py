"""Per-cluster representative frame selection.

Two strategies: "highest_score" keeps the frame the upstream selector
rated highest; "centroid" keeps the frame with minimum mean visual
distance to the rest of its cluster. Score and distance ties fall back to
the earliest timestamp, then the lowest frame index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import as_float_vector, check_square_symmetric
from .errors import ValidationError

STRATEGIES = ("centroid", "highest_score")


@dataclass(frozen=True)
class Representative:
    cluster_index: int
    frame_index: int
    frame_id: str
    timestamp_s: float


@dataclass(frozen=True)
class PrunedSet:
    """One representative per cluster, ordered by representative timestamp."""

    representatives: tuple[Representative, ...]

    def frame_indices(self) -> list[int]:
        return [r.frame_index for r in self.representatives]

    def frame_ids(self) -> list[str]:
        return [r.frame_id for r in self.representatives]


def check_strategy(strategy: str) -> str:
    if strategy not in STRATEGIES:
        raise ValidationError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    return strategy


def select_highest_score(cluster, scores, timestamps) -> int:
    """Member with the maximum upstream score (ties: earliest, then lowest index)."""
    members = list(cluster)
    if not members:
        raise ValidationError("cannot select from an empty cluster")
    scores = as_float_vector(scores, "scores")
    timestamps = as_float_vector(timestamps, "timestamps")
    return min(members, key=lambda i: (-scores[i], timestamps[i], i))


def select_centroid(cluster, d_cos, timestamps) -> int:
    """Member with minimum mean visual distance to its cluster mates.

    Singletons are their own centroid (the mean over no mates is taken
    as 0). Ties: earliest timestamp, then lowest index.
    """
    members = list(cluster)
    if not members:
        raise ValidationError("cannot select from an empty cluster")
    d_cos = check_square_symmetric(d_cos, "d_cos")
    timestamps = as_float_vector(timestamps, "timestamps")
    if len(members) == 1:
        return members[0]
    sub = d_cos[np.ix_(members, members)]
    # exact summation keeps tie classification independent of member order
    means = [math.fsum(sub[k].tolist()) / (len(members) - 1) for k in range(len(members))]
    best = min(range(len(members)), key=lambda k: (means[k], timestamps[members[k]], members[k]))
    return members[best]


def select_representatives(
    cluster_set,
    *,
    strategy: str,
    scores,
    timestamps,
    frame_ids,
    d_cos,
) -> PrunedSet:
    """Apply the selection strategy to every cluster of a partition."""
    check_strategy(strategy)
    timestamps = as_float_vector(timestamps, "timestamps")
    reps = []
    for cluster_index, members in enumerate(cluster_set.clusters):
        if strategy == "highest_score":
            idx = select_highest_score(members, scores, timestamps)
        else:
            idx = select_centroid(members, d_cos, timestamps)
        reps.append(
            Representative(
                cluster_index=cluster_index,
                frame_index=idx,
                frame_id=frame_ids[idx],
                timestamp_s=float(timestamps[idx]),
            )
        )
    reps.sort(key=lambda r: (r.timestamp_s, r.frame_id))
    return PrunedSet(representatives=tuple(reps))
