"""Average-linkage agglomeration under a distance threshold, plus refinement.

The linkage between two clusters is always the mean of the *original*
pairwise distances across them (no incremental update formulas), computed
with exact summation so the value depends only on the set of entries and
never on traversal order. Merge decisions are therefore reproducible,
permutation-consistent even at exact ties, and easy to cross-check against
a naive reference. All tie-breaks are by the lexicographic order of the
sorted union of member indices.

Refinement sweeps up degenerate single-frame clusters: each one is merged
into its visually nearest neighbor cluster until none remain (or only one
cluster is left).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_square_symmetric
from .errors import ValidationError

MergeEntry = tuple[tuple[int, ...], tuple[int, ...], float]


@dataclass(frozen=True)
class ClusterSet:
    """A partition of frame indices and the merge history that produced it.

    Clusters are ordered by their smallest member; members are sorted.
    merge_log heights are non-decreasing up to float representation: at
    exact real-valued ties, means over different pair counts can round one
    ulp apart. The merge loop never relies on monotonicity (it re-scans the
    minimum each step).
    """

    clusters: tuple[tuple[int, ...], ...]
    merge_log: tuple[MergeEntry, ...]

    @property
    def n_clusters(self) -> int:
        return len(self.clusters)

    def labels(self, n: int) -> np.ndarray:
        """Per-frame cluster index (clusters numbered by smallest member)."""
        out = np.empty(n, dtype=np.intp)
        for label, members in enumerate(self.clusters):
            out[list(members)] = label
        return out


def _freeze_clusters(clusters) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(c) for c in sorted((sorted(c) for c in clusters), key=lambda c: c[0]))


def _check_partition(clusters, n: int) -> None:
    flat = sorted(i for c in clusters for i in c)
    if flat != list(range(n)):
        raise ValidationError("clusters do not partition the frame index set")


def average_linkage(D: np.ndarray, a, b) -> float:
    """Mean of D over all cross-pairs of two index collections.

    Uses exact (correctly rounded) summation: at a tie with the merge
    threshold, float accumulation order must not decide the comparison.
    """
    a, b = list(a), list(b)
    return math.fsum(D[np.ix_(a, b)].ravel().tolist()) / (len(a) * len(b))


def agglomerate(D, tau: float) -> ClusterSet:
    """Merge clusters bottom-up while the smallest average linkage is < tau.

    Starts from singletons. Each step scans every cluster pair, computes
    the average of the original distance entries across the pair, and
    merges the minimum (ties resolved by the sorted union of members,
    lexicographically). Stops as soon as the minimum reaches tau.
    """
    D = check_square_symmetric(D, "distance matrix")
    n = D.shape[0]
    if n == 0:
        raise ValidationError("distance matrix is empty")

    clusters: list[list[int]] = [[i] for i in range(n)]
    log: list[MergeEntry] = []

    while len(clusters) > 1:
        best_dist = None
        best_key = None
        best_pair = None
        for p in range(len(clusters)):
            for q in range(p + 1, len(clusters)):
                d = average_linkage(D, clusters[p], clusters[q])
                if best_dist is None or d < best_dist:
                    best_dist, best_key, best_pair = d, None, (p, q)
                elif d == best_dist:
                    if best_key is None:
                        bp, bq = best_pair
                        best_key = tuple(sorted(clusters[bp] + clusters[bq]))
                    key = tuple(sorted(clusters[p] + clusters[q]))
                    if key < best_key:
                        best_key, best_pair = key, (p, q)
        if not best_dist < tau:
            break
        p, q = best_pair
        a, b = sorted((tuple(clusters[p]), tuple(clusters[q])))
        log.append((a, b, best_dist))
        merged = sorted(clusters[p] + clusters[q])
        clusters = [c for k, c in enumerate(clusters) if k not in (p, q)]
        clusters.append(merged)

    return ClusterSet(clusters=_freeze_clusters(clusters), merge_log=tuple(log))


def refine_clusters(cs: ClusterSet, d_cos, enabled: bool = True) -> ClusterSet:
    """Fold single-frame clusters into their nearest cluster by visual distance.

    While a singleton exists and more than one cluster remains: the
    singleton holding the lowest frame index is merged into the cluster
    with minimum average cosine distance to it (ties to the cluster with
    the lowest smallest member). Disabled, this is the identity.
    """
    if not enabled:
        return cs
    d_cos = check_square_symmetric(d_cos, "d_cos")
    _check_partition(cs.clusters, d_cos.shape[0])

    clusters = [list(c) for c in cs.clusters]
    while len(clusters) > 1:
        singletons = [c for c in clusters if len(c) < 2]
        if not singletons:
            break
        source = min(singletons, key=lambda c: c[0])
        best_key = None
        best = None
        for c in clusters:
            if c is source:
                continue
            key = (average_linkage(d_cos, source, c), c[0])
            if best_key is None or key < best_key:
                best_key, best = key, c
        best.extend(source)
        best.sort()
        clusters.remove(source)

    return ClusterSet(clusters=_freeze_clusters(clusters), merge_log=cs.merge_log)
