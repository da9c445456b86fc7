"""Pairwise visual, temporal, and combined distances.

The combined distance between frames i and j blends cosine distance in
feature space with the normalized gap between their timestamps::

    D(i, j) = beta * d_cos(f_i, f_j) + (1 - beta) * d_temp(t_i, t_j)

Matrices are computed once per unordered pair and mirrored, so they are
exactly symmetric with an exactly zero diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import as_float_matrix, as_float_vector, check_unit_interval
from .errors import ZeroVectorError
from .fusion import ZERO_NORM_TOL


@dataclass(frozen=True)
class DistanceTables:
    """Dense pairwise distances over n frames."""

    n: int
    d_cos: np.ndarray
    d_comb: np.ndarray
    t_span: tuple[float, float]

    def upper_cos(self) -> np.ndarray:
        """Strict upper-triangle of d_cos (each unordered pair once)."""
        iu = np.triu_indices(self.n, k=1)
        return self.d_cos[iu]


def cosine_distance(f_i, f_j) -> float:
    """1 - cos(angle), clamped to [0, 2]."""
    a = as_float_vector(f_i, "f_i")
    b = as_float_vector(f_j, "f_j")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na < ZERO_NORM_TOL or nb < ZERO_NORM_TOL:
        raise ZeroVectorError("cosine distance is undefined for near-zero vectors")
    return float(np.clip(1.0 - float(a @ b) / (na * nb), 0.0, 2.0))


def temporal_distance(t_i: float, t_j: float, t_span: tuple[float, float]) -> float:
    """Absolute timestamp gap normalized by the span; 0 on a degenerate span."""
    t_min, t_max = t_span
    span = t_max - t_min
    if span <= 0.0:
        return 0.0
    return abs(float(t_i) - float(t_j)) / span


def combined_distance(d_cos: float, d_temp: float, beta: float) -> float:
    beta = check_unit_interval(beta, "beta")
    return beta * d_cos + (1.0 - beta) * d_temp


def build_tables(frames, beta: float) -> DistanceTables:
    """Distance tables for a list of (fused_feature, timestamp_s) pairs.

    Raises ZeroVectorError naming the first degenerate frame index.
    """
    beta = check_unit_interval(beta, "beta")
    feats = as_float_matrix(np.stack([np.asarray(f, dtype=np.float64) for f, _ in frames]),
                            "fused features")
    times = as_float_vector([t for _, t in frames], "timestamps")
    n = feats.shape[0]

    norms = np.linalg.norm(feats, axis=1)
    bad = np.flatnonzero(norms < ZERO_NORM_TOL)
    if bad.size:
        raise ZeroVectorError(f"frame index {int(bad[0])} has a near-zero fused vector")

    t_span = (float(times.min()), float(times.max()))
    span = t_span[1] - t_span[0]

    unit = feats / norms[:, None]
    cos_full = np.clip(1.0 - unit @ unit.T, 0.0, 2.0)
    if span > 0.0:
        temp_full = np.abs(times[:, None] - times[None, :]) / span
    else:
        temp_full = np.zeros((n, n))
    comb_full = beta * cos_full + (1.0 - beta) * temp_full

    # Mirror the strict upper triangle so M[i][j] == M[j][i] bit-for-bit.
    d_cos = np.zeros((n, n))
    d_comb = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    d_cos[iu] = cos_full[iu]
    d_cos.T[iu] = cos_full[iu]
    d_comb[iu] = comb_full[iu]
    d_comb.T[iu] = comb_full[iu]
    return DistanceTables(n=n, d_cos=d_cos, d_comb=d_comb, t_span=t_span)
