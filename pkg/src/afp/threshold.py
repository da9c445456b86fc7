"""Adaptive clustering threshold from the density of pairwise visual distances.

A Gaussian kernel density estimate is evaluated over the pairwise cosine
distances; the threshold is the density peak plus a fixed offset. Videos
whose frames are mostly near-duplicates get a low peak (and a tight
threshold), diverse videos get a looser one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import as_float_vector
from .errors import InsufficientSamplesError, ValidationError

SQRT_2PI = math.sqrt(2.0 * math.pi)
DEGENERATE_BANDWIDTH = 1e-3


@dataclass(frozen=True)
class KdeConfig:
    """Knobs for the threshold estimate.

    bandwidth_rule is either the string "scott" or a fixed positive float.
    """

    offset: float = 0.15
    grid_points: int = 512
    bandwidth_rule: str | float = "scott"

    def __post_init__(self):
        if self.offset < 0:
            raise ValidationError(f"offset must be >= 0, got {self.offset}")
        if self.grid_points < 16:
            raise ValidationError(f"grid_points must be >= 16, got {self.grid_points}")
        if isinstance(self.bandwidth_rule, str):
            if self.bandwidth_rule != "scott":
                raise ValidationError(f"unknown bandwidth rule {self.bandwidth_rule!r}")
        elif not (isinstance(self.bandwidth_rule, (int, float)) and self.bandwidth_rule > 0):
            raise ValidationError("fixed bandwidth must be a positive number")


@dataclass(frozen=True)
class ThresholdReport:
    """Where the threshold came from: tau = peak_p + offset."""

    tau: float
    peak_p: float
    bandwidth: float
    sample_count: int

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "peak_p": self.peak_p,
            "bandwidth": self.bandwidth,
            "sample_count": self.sample_count,
        }


def kde_density(samples, bandwidth: float, x) -> float | np.ndarray:
    """Gaussian KDE value(s) at x.

    density(x) = (1 / (n h sqrt(2 pi))) * sum_i exp(-(x - s_i)^2 / (2 h^2))
    """
    s = as_float_vector(samples, "samples")
    if s.size == 0:
        raise InsufficientSamplesError("kde_density needs at least one sample")
    if not bandwidth > 0:
        raise ValidationError(f"bandwidth must be positive, got {bandwidth}")
    xs = np.asarray(x, dtype=np.float64)
    z = (xs[..., None] - s) / bandwidth
    dens = np.exp(-0.5 * z * z).sum(axis=-1) / (s.size * bandwidth * SQRT_2PI)
    return float(dens) if np.isscalar(x) or xs.ndim == 0 else dens


def scott_bandwidth(samples: np.ndarray) -> float:
    """h = sigma * n^(-1/5) with sigma the sample standard deviation.

    Falls back to a small fixed bandwidth when the spread is (near) zero,
    including the single-sample case.
    """
    n = samples.size
    sigma = float(np.std(samples, ddof=1)) if n > 1 else 0.0
    if sigma < 1e-9:
        return DEGENERATE_BANDWIDTH
    return sigma * n ** (-0.2)


def adaptive_threshold(d_cos_upper, cfg: KdeConfig = KdeConfig()) -> ThresholdReport:
    """Threshold from the KDE peak of pairwise visual distances.

    The density is evaluated on a uniform grid over
    [max(0, min - 3h), max + 3h]; the peak is the grid argmax (lowest x on
    ties), nudged into [min(samples), max(samples)] so sub-grid rounding
    cannot push it outside the sample range.
    """
    samples = as_float_vector(d_cos_upper, "distance samples")
    if samples.size == 0:
        raise InsufficientSamplesError(
            "adaptive_threshold needs at least one pairwise distance (two frames)"
        )
    if isinstance(cfg.bandwidth_rule, str):
        h = scott_bandwidth(samples)
    else:
        h = float(cfg.bandwidth_rule)

    lo = max(0.0, float(samples.min()) - 3.0 * h)
    hi = float(samples.max()) + 3.0 * h
    grid = np.linspace(lo, hi, cfg.grid_points)
    dens = kde_density(samples, h, grid)
    peak = float(grid[int(np.argmax(dens))])
    peak = min(max(peak, float(samples.min())), float(samples.max()))
    return ThresholdReport(
        tau=peak + cfg.offset,
        peak_p=peak,
        bandwidth=h,
        sample_count=int(samples.size),
    )
