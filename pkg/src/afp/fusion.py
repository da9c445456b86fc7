"""Branch feature projection, normalization, and weighted fusion.

Each frame contributes two branch vectors (a visual-recognition branch and
an image-text alignment branch). Both are mapped to a shared 512-d space,
L2-normalized, and combined as ``(1 - alpha) * visual + alpha * semantic``.
The combination is deliberately not re-normalized; downstream cosine
distances are scale-invariant.

The original projection weights are not distributed with feature checkpoints,
so three reproducible stand-ins are provided: plain truncation, a seeded
random-orthonormal map, and user-supplied matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._validation import as_float_vector, check_unit_interval
from .errors import ValidationError, ZeroVectorError
from .manifest import FUSED_DIM, Manifest, PreFused

ZERO_NORM_TOL = 1e-12

_BRANCH_CODES = {"resnet": 0, "clip": 1}


@dataclass(frozen=True)
class ProjectionSpec:
    """How branch vectors are mapped into the shared 512-d space.

    kind:
        "identity_truncate"        keep the first 512 components (needs d >= 512)
        "seeded_random_orthonormal" seeded QR-orthonormalized Gaussian map (needs d >= 512)
        "external_matrix"          user-supplied (d_resnet x 512, d_clip x 512) matrices
    """

    kind: str = "seeded_random_orthonormal"
    seed: int = 0
    matrices: tuple[np.ndarray, np.ndarray] | None = None

    def __post_init__(self):
        if self.kind not in ("identity_truncate", "seeded_random_orthonormal", "external_matrix"):
            raise ValidationError(f"unknown projection kind {self.kind!r}")
        if self.kind == "external_matrix":
            if self.matrices is None or len(self.matrices) != 2:
                raise ValidationError("external_matrix projection needs a (resnet, clip) matrix pair")
            for name, mat in zip(("resnet", "clip"), self.matrices):
                mat = np.asarray(mat)
                if mat.ndim != 2 or mat.shape[1] != FUSED_DIM:
                    raise ValidationError(
                        f"external {name} matrix must have shape (d, {FUSED_DIM}), got {mat.shape}"
                    )


def seeded_orthonormal_matrix(seed: int, branch: str, dim: int) -> np.ndarray:
    """Deterministic (dim x 512) matrix with orthonormal columns.

    Distinct per (seed, branch, dim). Column signs are canonicalized so the
    result does not depend on LAPACK sign conventions.
    """
    if dim < FUSED_DIM:
        raise ValidationError(
            f"seeded_random_orthonormal needs branch dimension >= {FUSED_DIM}, got {dim}"
        )
    rng = np.random.default_rng(np.random.SeedSequence([seed, _BRANCH_CODES[branch], dim]))
    gauss = rng.standard_normal((dim, FUSED_DIM))
    q, r = np.linalg.qr(gauss)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def branch_matrix(proj: ProjectionSpec, branch: str, dim: int) -> np.ndarray | None:
    """Projection matrix for one branch, or None for plain truncation."""
    if branch not in _BRANCH_CODES:
        raise ValidationError(f"branch must be 'resnet' or 'clip', got {branch!r}")
    if proj.kind == "identity_truncate":
        if dim < FUSED_DIM:
            raise ValidationError(
                f"identity_truncate needs branch dimension >= {FUSED_DIM}, got {dim}"
            )
        return None
    if proj.kind == "seeded_random_orthonormal":
        return seeded_orthonormal_matrix(proj.seed, branch, dim)
    mat = np.asarray(proj.matrices[_BRANCH_CODES[branch]], dtype=np.float64)
    if mat.shape[0] != dim:
        raise ValidationError(
            f"external {branch} matrix expects input dimension {mat.shape[0]}, got {dim}"
        )
    return mat


def _normalize(vec: np.ndarray, context: str) -> np.ndarray:
    norm = float(np.linalg.norm(vec))
    if norm < ZERO_NORM_TOL:
        raise ZeroVectorError(f"{context}: projected vector has near-zero norm")
    return vec / norm


def project_and_normalize(branch_vec, proj: ProjectionSpec, branch: str) -> np.ndarray:
    """Project one branch vector to 512-d and scale it to unit L2 norm."""
    vec = as_float_vector(branch_vec, f"{branch} vector")
    mat = branch_matrix(proj, branch, vec.shape[0])
    projected = vec[:FUSED_DIM] if mat is None else vec @ mat
    return _normalize(projected, f"{branch} branch")


def fuse(resnet_n, clip_n, alpha: float) -> np.ndarray:
    """Weighted combination of two unit-norm 512-d branch vectors.

    alpha is the semantic-branch weight in [0, 1]; the result is the plain
    convex combination, with no trailing re-normalization.
    """
    alpha = check_unit_interval(alpha, "alpha")
    r = as_float_vector(resnet_n, "resnet branch")
    c = as_float_vector(clip_n, "clip branch")
    for name, vec in (("resnet", r), ("clip", c)):
        if vec.shape[0] != FUSED_DIM:
            raise ValidationError(f"{name} branch must be {FUSED_DIM}-d, got {vec.shape[0]}")
        if abs(np.linalg.norm(vec) - 1.0) > 1e-6:
            raise ValidationError(f"{name} branch is not unit-norm")
    return (1.0 - alpha) * r + alpha * c


def fuse_manifest(manifest: Manifest, proj: ProjectionSpec, alpha: float) -> np.ndarray:
    """Fused feature matrix (n x 512) for every frame of a manifest.

    Pre-fused manifests pass through untouched, so a raw manifest and the
    pre-fused manifest produced from it yield identical downstream results.
    """
    if manifest.is_prefused:
        return np.stack([frame.features.vec for frame in manifest.frames])

    alpha = check_unit_interval(alpha, "alpha")
    d_r, d_c = manifest.dims
    mat_r = branch_matrix(proj, "resnet", d_r)
    mat_c = branch_matrix(proj, "clip", d_c)
    fused = np.empty((len(manifest), FUSED_DIM), dtype=np.float64)
    for i, frame in enumerate(manifest.frames):
        feats = frame.features
        assert not isinstance(feats, PreFused)
        try:
            r = _normalize(feats.resnet_vec[:FUSED_DIM] if mat_r is None else feats.resnet_vec @ mat_r,
                           "resnet branch")
            c = _normalize(feats.clip_vec[:FUSED_DIM] if mat_c is None else feats.clip_vec @ mat_c,
                           "clip branch")
        except ZeroVectorError as exc:
            raise ZeroVectorError(f"frame {frame.frame_id!r}: {exc}") from exc
        fused[i] = (1.0 - alpha) * r + alpha * c
    return fused


def load_projection_matrix(path: str | Path) -> np.ndarray:
    """Read a projection matrix from the text container format.

    Line 1 holds ``rows cols``; each following line holds one row of
    whitespace-separated floats.
    """
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise ValidationError(f"{path}: header must be 'rows cols'")
            rows, cols = int(header[0]), int(header[1])
            data = np.loadtxt(fh, dtype=np.float64, ndmin=2)
    except (OSError, ValueError) as exc:
        raise ValidationError(f"cannot read projection matrix {path}: {exc}") from exc
    if data.shape != (rows, cols):
        raise ValidationError(
            f"{path}: header declares {(rows, cols)} but body has shape {data.shape}"
        )
    return data
