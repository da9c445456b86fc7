"""Extraction jobs: video + frame spec in, manifest file out."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .features import FeatureModels, compute_features, load_feature_models
from .fusion import project_and_fuse
from .video import decode_frames_at, probe_video


@dataclass(frozen=True)
class PrefusedEmit:
    alpha: float = 0.6
    projection_seed: int = 0


@dataclass(frozen=True)
class ExtractionJob:
    """What to extract and how to emit it.

    frame_spec is either an explicit list of (timestamp_s, score) pairs or
    the string "uniform(N)", which samples the midpoints of N equal spans.
    emit is "raw_pair" (resnet + clip vectors) or a PrefusedEmit.
    """

    video_path: str | Path
    frame_spec: list[tuple[float, float]] | str
    output_path: str | Path
    emit: str | PrefusedEmit = "raw_pair"
    weights: str = "pretrained"
    model_seed: int = 0

    def __post_init__(self):
        if isinstance(self.frame_spec, str):
            n = parse_uniform_spec(self.frame_spec)
            if n < 1:
                raise ValueError("uniform(N) needs N >= 1")
        elif not self.frame_spec:
            raise ValueError("frame_spec must name at least one frame")


def parse_uniform_spec(spec: str) -> int:
    if spec.startswith("uniform(") and spec.endswith(")"):
        return int(spec[len("uniform("):-1])
    if spec.startswith("uniform:"):
        return int(spec.split(":", 1)[1])
    raise ValueError(f"unrecognized frame spec {spec!r}")


def resolve_frame_spec(job: ExtractionJob) -> list[tuple[float, float]]:
    """Concrete (timestamp, score) pairs; uniform sampling uses span midpoints."""
    if isinstance(job.frame_spec, str):
        n = parse_uniform_spec(job.frame_spec)
        duration, _, _ = probe_video(job.video_path)
        return [(duration * (k + 0.5) / n, 0.0) for k in range(n)]
    return [(float(t), float(s)) for t, s in job.frame_spec]


def extract(job: ExtractionJob, models: FeatureModels | None = None) -> Path:
    """Run one job and write the manifest; returns the output path.

    Output frame order follows the frame spec; frame ids are "f<idx>" by
    spec position, so duplicate timestamps still get distinct ids.
    """
    spec = resolve_frame_spec(job)
    timestamps = [t for t, _ in spec]
    frames_rgb = decode_frames_at(job.video_path, timestamps)
    if models is None:
        models = load_feature_models(weights=job.weights, seed=job.model_seed)
    resnet_feats, clip_feats = compute_features(models, frames_rgb)

    frames = []
    for idx, (t, score) in enumerate(spec):
        entry: dict = {"frame_id": f"f{idx}", "timestamp_s": t, "score": score}
        if isinstance(job.emit, PrefusedEmit):
            fused = project_and_fuse(
                resnet_feats[idx], clip_feats[idx], job.emit.alpha, job.emit.projection_seed
            )
            entry["fused"] = fused.tolist()
        else:
            entry["resnet"] = resnet_feats[idx].tolist()
            entry["clip"] = clip_feats[idx].tolist()
        frames.append(entry)

    if isinstance(job.emit, PrefusedEmit):
        dims: str | dict = "prefused"
        emit_meta: dict = {
            "mode": "prefused",
            "alpha": job.emit.alpha,
            "projection_seed": job.emit.projection_seed,
        }
    else:
        dims = {"resnet": int(resnet_feats.shape[1]), "clip": int(clip_feats.shape[1])}
        emit_meta = {"mode": "raw_pair"}

    doc = {
        "video_id": Path(job.video_path).stem,
        "dims": dims,
        "frames": frames,
        "provenance": {**models.provenance(), **emit_meta},
    }
    out = Path(job.output_path)
    out.write_text(json.dumps(doc), encoding="utf-8")
    return out
