"""Manifest extraction from videos: frame decoding plus branch features."""

from .errors import DecodeError, ExtractError, ModelError
from .extract import ExtractionJob, PrefusedEmit, extract, resolve_frame_spec
from .features import FeatureModels, compute_features, load_feature_models
from .video import decode_frames_at, probe_video

__version__ = "0.1.0"

__all__ = [
    "DecodeError",
    "ExtractError",
    "ExtractionJob",
    "FeatureModels",
    "ModelError",
    "PrefusedEmit",
    "compute_features",
    "decode_frames_at",
    "extract",
    "load_feature_models",
    "probe_video",
    "resolve_frame_spec",
]
