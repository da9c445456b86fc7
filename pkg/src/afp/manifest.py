"""Frame-manifest loading, validation, and serialization.

A manifest is a UTF-8 JSON document::

    {
      "video_id": "vid-001",
      "dims": {"resnet": 2048, "clip": 512},   # or the string "prefused"
      "frames": [
        {"frame_id": "f0", "timestamp_s": 0.0, "score": 1.2,
         "resnet": [...], "clip": [...]},       # or "fused": [...]
        ...
      ]
    }

Every frame carries either a (resnet, clip) raw pair or a pre-fused
512-d vector, consistently across the whole manifest. Frames are kept
sorted by timestamp (ties broken by frame_id).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import AfpWarning, ParseError, ValidationError

FUSED_DIM = 512


def _freeze(vec, frame_id: str, field: str) -> np.ndarray:
    arr = np.asarray(vec, dtype=np.float64)
    if arr.ndim != 1:
        raise ValidationError(f"frame {frame_id!r}: field {field!r} is not a flat vector")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"frame {frame_id!r}: field {field!r} contains NaN or Inf")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RawPair:
    """Per-branch feature payload before fusion."""

    resnet_vec: np.ndarray
    clip_vec: np.ndarray

    def __eq__(self, other):
        return (
            isinstance(other, RawPair)
            and np.array_equal(self.resnet_vec, other.resnet_vec)
            and np.array_equal(self.clip_vec, other.clip_vec)
        )


@dataclass(frozen=True, eq=False)
class PreFused:
    """Already-fused 512-d feature payload."""

    vec: np.ndarray

    def __eq__(self, other):
        return isinstance(other, PreFused) and np.array_equal(self.vec, other.vec)


@dataclass(frozen=True, eq=False)
class FrameRecord:
    """One candidate keyframe: identity, position, upstream score, features."""

    frame_id: str
    timestamp_s: float
    score: float
    features: RawPair | PreFused

    def __eq__(self, other):
        return (
            isinstance(other, FrameRecord)
            and self.frame_id == other.frame_id
            and self.timestamp_s == other.timestamp_s
            and self.score == other.score
            and self.features == other.features
        )


@dataclass(frozen=True, eq=False)
class Manifest:
    """A validated, timestamp-sorted set of candidate keyframes.

    ``dims`` is ``(resnet_dim, clip_dim)`` for raw-pair manifests and
    ``None`` for pre-fused ones.
    """

    video_id: str
    dims: tuple[int, int] | None
    frames: tuple[FrameRecord, ...]

    @property
    def is_prefused(self) -> bool:
        return self.dims is None

    def __len__(self) -> int:
        return len(self.frames)

    def __eq__(self, other):
        return (
            isinstance(other, Manifest)
            and self.video_id == other.video_id
            and self.dims == other.dims
            and self.frames == other.frames
        )

    def timestamps(self) -> np.ndarray:
        return np.array([f.timestamp_s for f in self.frames], dtype=np.float64)

    def scores(self) -> np.ndarray:
        return np.array([f.score for f in self.frames], dtype=np.float64)

    def frame_ids(self) -> list[str]:
        return [f.frame_id for f in self.frames]


def _parse_dims(raw) -> tuple[int, int] | None:
    if raw == "prefused":
        return None
    if isinstance(raw, dict) and set(raw) == {"resnet", "clip"}:
        d_r, d_c = raw["resnet"], raw["clip"]
        ok = all(isinstance(d, int) and not isinstance(d, bool) and d > 0 for d in (d_r, d_c))
        if not ok:
            raise ValidationError(f"dims must be positive integers, got {raw!r}")
        return (d_r, d_c)
    raise ParseError(f'"dims" must be "prefused" or {{"resnet": int, "clip": int}}, got {raw!r}')


def _parse_frame(obj, dims: tuple[int, int] | None) -> FrameRecord:
    if not isinstance(obj, dict):
        raise ParseError(f"frame entries must be objects, got {type(obj).__name__}")
    frame_id = obj.get("frame_id")
    if not isinstance(frame_id, str) or not frame_id:
        raise ValidationError(f'frame is missing a non-empty "frame_id": {obj!r}')

    ts = obj.get("timestamp_s")
    if not isinstance(ts, (int, float)) or isinstance(ts, bool) or not np.isfinite(ts):
        raise ValidationError(f'frame {frame_id!r}: "timestamp_s" must be a finite number')
    if ts < 0:
        raise ValidationError(f'frame {frame_id!r}: "timestamp_s" is negative ({ts})')

    if "score" in obj:
        score = obj["score"]
        if not isinstance(score, (int, float)) or isinstance(score, bool) or not np.isfinite(score):
            raise ValidationError(f'frame {frame_id!r}: "score" must be a finite number')
    else:
        warnings.warn(f"frame {frame_id!r} has no score; defaulting to 0.0", AfpWarning)
        score = 0.0

    has_raw = "resnet" in obj or "clip" in obj
    has_fused = "fused" in obj
    if has_raw and has_fused:
        raise ValidationError(f"frame {frame_id!r}: carries both raw-pair and fused features")
    if not has_raw and not has_fused:
        raise ValidationError(f"frame {frame_id!r}: carries no feature payload")

    if has_fused:
        if dims is not None:
            raise ValidationError(
                f'frame {frame_id!r}: fused payload in a manifest declaring raw dims'
            )
        vec = _freeze(obj["fused"], frame_id, "fused")
        if vec.shape[0] != FUSED_DIM:
            raise ValidationError(
                f"frame {frame_id!r}: fused vector has dimension {vec.shape[0]}, expected {FUSED_DIM}"
            )
        features: RawPair | PreFused = PreFused(vec)
    else:
        if dims is None:
            raise ValidationError(
                f'frame {frame_id!r}: raw-pair payload in a manifest declared "prefused"'
            )
        if "resnet" not in obj or "clip" not in obj:
            raise ValidationError(f"frame {frame_id!r}: raw-pair frames need both resnet and clip")
        resnet = _freeze(obj["resnet"], frame_id, "resnet")
        clip = _freeze(obj["clip"], frame_id, "clip")
        if resnet.shape[0] != dims[0]:
            raise ValidationError(
                f"frame {frame_id!r}: resnet vector has dimension {resnet.shape[0]}, expected {dims[0]}"
            )
        if clip.shape[0] != dims[1]:
            raise ValidationError(
                f"frame {frame_id!r}: clip vector has dimension {clip.shape[0]}, expected {dims[1]}"
            )
        features = RawPair(resnet, clip)

    return FrameRecord(frame_id=frame_id, timestamp_s=float(ts), score=float(score), features=features)


def manifest_from_dict(doc) -> Manifest:
    """Validate a decoded manifest document and build the internal model."""
    if not isinstance(doc, dict):
        raise ParseError(f"manifest must be a JSON object, got {type(doc).__name__}")
    video_id = doc.get("video_id")
    if not isinstance(video_id, str) or not video_id:
        raise ParseError('manifest is missing a non-empty "video_id"')
    if "dims" not in doc:
        raise ParseError('manifest is missing "dims"')
    dims = _parse_dims(doc["dims"])
    frames_raw = doc.get("frames")
    if not isinstance(frames_raw, list) or not frames_raw:
        raise ParseError('manifest "frames" must be a non-empty list')

    frames = [_parse_frame(obj, dims) for obj in frames_raw]

    seen: set[str] = set()
    for frame in frames:
        if frame.frame_id in seen:
            raise ValidationError(f"duplicate frame_id {frame.frame_id!r}")
        seen.add(frame.frame_id)

    frames.sort(key=lambda f: (f.timestamp_s, f.frame_id))
    return Manifest(video_id=video_id, dims=dims, frames=tuple(frames))


def load_manifest(path: str | Path) -> Manifest:
    """Load and validate a manifest file.

    Raises ParseError for malformed documents and ValidationError for
    semantic problems (naming the offending frame where possible).
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read manifest {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"manifest {path} is not valid JSON: {exc}") from exc
    return manifest_from_dict(doc)


def manifest_to_dict(manifest: Manifest) -> dict:
    """Inverse of manifest_from_dict (floats survive the round trip exactly)."""
    frames = []
    for frame in manifest.frames:
        entry: dict = {
            "frame_id": frame.frame_id,
            "timestamp_s": frame.timestamp_s,
            "score": frame.score,
        }
        if isinstance(frame.features, PreFused):
            entry["fused"] = frame.features.vec.tolist()
        else:
            entry["resnet"] = frame.features.resnet_vec.tolist()
            entry["clip"] = frame.features.clip_vec.tolist()
        frames.append(entry)
    dims = "prefused" if manifest.dims is None else {"resnet": manifest.dims[0], "clip": manifest.dims[1]}
    return {"video_id": manifest.video_id, "dims": dims, "frames": frames}


def save_manifest(manifest: Manifest, path: str | Path) -> None:
    Path(path).write_text(json.dumps(manifest_to_dict(manifest)), encoding="utf-8")
