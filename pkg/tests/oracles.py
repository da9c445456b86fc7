"""Independent reference implementations used to cross-check the engine.

Everything here is deliberately written from scratch (plain loops, direct
formula summation) rather than calling into the package, so tests compare
two separately derived answers.
"""

from __future__ import annotations

import math

import numpy as np


def naive_average_linkage(D, tau: float) -> list[tuple[int, ...]]:
    """Reference threshold-stopped average-linkage agglomeration.

    Pure-Python re-derivation: linkage is the correctly rounded mean of the
    original matrix entries across two clusters (exact summation, so the
    value cannot depend on loop order); merge while the minimum linkage is
    strictly below tau; ties go to the pair whose sorted member union is
    lexicographically smallest. Returns clusters ordered by smallest member.
    """
    n = len(D)
    clusters: list[list[int]] = [[i] for i in range(n)]
    while len(clusters) > 1:
        candidates = []
        for x in range(len(clusters)):
            for y in range(x + 1, len(clusters)):
                entries = [D[i][j] for i in clusters[x] for j in clusters[y]]
                d = math.fsum(entries) / len(entries)
                candidates.append((d, tuple(sorted(clusters[x] + clusters[y])), x, y))
        d, _, x, y = min(candidates)
        if not d < tau:
            break
        merged = sorted(clusters[x] + clusters[y])
        clusters = [c for k, c in enumerate(clusters) if k not in (x, y)]
        clusters.append(merged)
    return sorted((tuple(c) for c in clusters), key=lambda c: c[0])


def simulate_refinement(clusters, d_cos) -> list[tuple[int, ...]]:
    """Reference singleton-refinement loop (plain loops throughout)."""
    work = [sorted(c) for c in clusters]
    while len(work) > 1:
        singles = [c for c in work if len(c) < 2]
        if not singles:
            break
        source = min(singles, key=lambda c: c[0])
        best = None
        for c in work:
            if c == source:
                continue
            entries = [d_cos[i][j] for i in source for j in c]
            key = (math.fsum(entries) / len(entries), c[0])
            if best is None or key < best[0]:
                best = (key, c)
        target = best[1]
        work.remove(source)
        work.remove(target)
        work.append(sorted(source + target))
    return sorted((tuple(c) for c in work), key=lambda c: c[0])


def gaussian_kde_value(samples, h: float, x: float) -> float:
    """Direct per-kernel summation of the Gaussian KDE formula."""
    total = 0.0
    for s in samples:
        total += math.exp(-((x - s) ** 2) / (2.0 * h * h))
    return total / (len(samples) * h * math.sqrt(2.0 * math.pi))


def fine_grid_peak(samples, h: float, points: int = 100_000) -> float:
    """Brute-force argmax of the KDE over a dense grid (vectorized sum)."""
    samples = np.asarray(samples, dtype=np.float64)
    lo = max(0.0, samples.min() - 3.0 * h)
    hi = samples.max() + 3.0 * h
    grid = np.linspace(lo, hi, points)
    dens = np.zeros_like(grid)
    for s in samples:
        dens += np.exp(-((grid - s) ** 2) / (2.0 * h * h))
    return float(grid[int(np.argmax(dens))])


def scott_bandwidth_reference(samples) -> float:
    """The documented bandwidth rule, recomputed independently."""
    samples = list(samples)
    n = len(samples)
    if n < 2:
        return 1e-3
    mean = sum(samples) / n
    var = sum((s - mean) ** 2 for s in samples) / (n - 1)
    sigma = math.sqrt(var)
    if sigma < 1e-9:
        return 1e-3
    return sigma * n ** (-0.2)


def canonical_partition(clusters) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted((tuple(sorted(c)) for c in clusters), key=lambda c: c[0]))


def is_coarsening(fine, coarse) -> bool:
    """True when every cluster of `fine` is contained in one of `coarse`."""
    coarse_sets = [set(c) for c in coarse]
    return all(any(set(c) <= cs for cs in coarse_sets) for c in fine)


def random_distance_matrix(rng, n: int) -> np.ndarray:
    """Random symmetric matrix with zero diagonal; entries in (0, 1)."""
    upper = rng.uniform(0.05, 1.0, size=(n, n))
    mat = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    mat[iu] = upper[iu]
    mat.T[iu] = upper[iu]
    return mat
