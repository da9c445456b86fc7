"""Scikit-learn style front end for the pruning core.

`AdaptiveFramePruner` behaves like a clustering estimator: `fit` takes a
feature matrix (one fused vector per frame) plus optional timestamps and
upstream scores, and exposes the resulting partition, threshold, and
representative frames as fitted attributes. `get_params` / `set_params` /
`clone` work as usual, so the knobs can be grid-searched or pipelined
with the rest of the ecosystem.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from ._validation import as_float_matrix, as_float_vector
from .clustering import agglomerate, refine_clusters
from .distance import build_tables
from .errors import ShapeError
from .selection import check_strategy, select_centroid, select_highest_score
from .threshold import KdeConfig, adaptive_threshold


class AdaptiveFramePruner(ClusterMixin, BaseEstimator):
    """Cluster near-duplicate frames and pick one representative per cluster.

    Parameters
    ----------
    beta : float, default=0.9
        Weight of visual (cosine) distance vs normalized temporal distance
        in the combined metric.
    kde_offset : float, default=0.15
        Added to the density peak of pairwise visual distances to obtain
        the merge threshold.
    kde_grid_points : int, default=512
        Resolution of the density grid used to locate the peak.
    kde_bandwidth : "scott" or float, default="scott"
        Bandwidth rule for the density estimate.
    refine : bool, default=True
        Fold single-frame clusters into their visually nearest cluster.
    strategy : {"centroid", "highest_score"}, default="centroid"
        How the representative of each cluster is chosen.

    Attributes
    ----------
    labels_ : ndarray of shape (n_frames,)
        Cluster index per frame (clusters numbered by smallest member).
    n_clusters_ : int
    clusters_ : tuple of tuples of frame indices
    representative_indices_ : ndarray
        One frame index per cluster, ordered by representative timestamp.
    threshold_report_ : ThresholdReport or None
        None for single-frame inputs (nothing to threshold).
    merge_log_ : tuple
        Agglomeration history as (members_a, members_b, linkage_distance).
    """

    def __init__(
        self,
        beta: float = 0.9,
        kde_offset: float = 0.15,
        kde_grid_points: int = 512,
        kde_bandwidth="scott",
        refine: bool = True,
        strategy: str = "centroid",
    ):
        self.beta = beta
        self.kde_offset = kde_offset
        self.kde_grid_points = kde_grid_points
        self.kde_bandwidth = kde_bandwidth
        self.refine = refine
        self.strategy = strategy

    def fit(self, X, y=None, timestamps=None, scores=None):
        """Cluster the frames described by the rows of X.

        timestamps default to the row order (0, 1, 2, ...); scores default
        to all zeros, which makes "highest_score" fall back to its
        timestamp tie-break.
        """
        check_strategy(self.strategy)
        X = as_float_matrix(X, "X")
        n = X.shape[0]
        if n == 0:
            raise ShapeError("X must hold at least one frame")

        timestamps = (
            np.arange(n, dtype=np.float64)
            if timestamps is None
            else as_float_vector(timestamps, "timestamps")
        )
        scores = (
            np.zeros(n, dtype=np.float64) if scores is None else as_float_vector(scores, "scores")
        )
        if timestamps.shape[0] != n or scores.shape[0] != n:
            raise ShapeError("timestamps and scores must have one entry per frame")

        self.n_features_in_ = X.shape[1]

        if n == 1:
            self.threshold_report_ = None
            self.tau_ = None
            self.clusters_ = ((0,),)
            self.merge_log_ = ()
        else:
            tables = build_tables(list(zip(X, timestamps)), self.beta)
            self.threshold_report_ = adaptive_threshold(
                tables.upper_cos(),
                KdeConfig(
                    offset=self.kde_offset,
                    grid_points=self.kde_grid_points,
                    bandwidth_rule=self.kde_bandwidth,
                ),
            )
            self.tau_ = self.threshold_report_.tau
            cluster_set = agglomerate(tables.d_comb, self.tau_)
            cluster_set = refine_clusters(cluster_set, tables.d_cos, self.refine)
            self.clusters_ = cluster_set.clusters
            self.merge_log_ = cluster_set.merge_log
            self._d_cos = tables.d_cos

        reps = []
        for members in self.clusters_:
            if len(members) == 1:
                reps.append(members[0])
            elif self.strategy == "highest_score":
                reps.append(select_highest_score(members, scores, timestamps))
            else:
                reps.append(select_centroid(members, self._d_cos, timestamps))
        reps.sort(key=lambda i: (timestamps[i], i))
        self.representative_indices_ = np.asarray(reps, dtype=np.intp)

        labels = np.empty(n, dtype=np.intp)
        for label, members in enumerate(self.clusters_):
            labels[list(members)] = label
        self.labels_ = labels
        self.n_clusters_ = len(self.clusters_)
        return self

    def fit_predict(self, X, y=None, **fit_params):
        """Fit and return the per-frame cluster labels."""
        return self.fit(X, y, **fit_params).labels_

    def prune(self, X, timestamps=None, scores=None) -> np.ndarray:
        """Fit and return the rows of X that survive pruning."""
        self.fit(X, timestamps=timestamps, scores=scores)
        return np.asarray(X, dtype=np.float64)[self.representative_indices_]
