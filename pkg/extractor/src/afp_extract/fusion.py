"""Projection and fusion for pre-fused manifest output.

Mirrors the pruning engine's semantics exactly: same seeded orthonormal
projection construction (per seed/branch/dimension), same L2
normalization, same weighted combination without re-normalization. A
pre-fused manifest written here therefore matches what the engine computes
from the raw pair, without this package importing the engine.
"""

from __future__ import annotations

import numpy as np

FUSED_DIM = 512

_BRANCH_CODES = {"resnet": 0, "clip": 1}


def seeded_orthonormal_matrix(seed: int, branch: str, dim: int) -> np.ndarray:
    """Deterministic (dim x 512) matrix with orthonormal, sign-fixed columns."""
    if dim < FUSED_DIM:
        raise ValueError(f"branch dimension must be >= {FUSED_DIM}, got {dim}")
    rng = np.random.default_rng(np.random.SeedSequence([seed, _BRANCH_CODES[branch], dim]))
    gauss = rng.standard_normal((dim, FUSED_DIM))
    q, r = np.linalg.qr(gauss)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def project_and_fuse(resnet_vec: np.ndarray, clip_vec: np.ndarray, alpha: float, seed: int) -> np.ndarray:
    """Project both branches to 512-d, normalize, and blend with weight alpha."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    out = []
    for branch, vec in (("resnet", resnet_vec), ("clip", clip_vec)):
        mat = seeded_orthonormal_matrix(seed, branch, vec.shape[0])
        projected = vec @ mat
        norm = np.linalg.norm(projected)
        if norm < 1e-12:
            raise ValueError(f"{branch} branch projects to a near-zero vector")
        out.append(projected / norm)
    return (1.0 - alpha) * out[0] + alpha * out[1]
