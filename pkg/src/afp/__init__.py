"""Adaptive keyframe pruning and token-efficient prompt bundling.

The engine consolidates visually redundant keyframes via threshold-driven
average-linkage clustering over fused visual/semantic features, keeps one
representative per cluster, and assembles a compact prompt bundle with a
frame/token cost report.
"""

from .clustering import ClusterSet, agglomerate, refine_clusters
from .distance import DistanceTables, build_tables, combined_distance, cosine_distance, temporal_distance
from .errors import (
    AfpError,
    AfpWarning,
    EmptySelectionError,
    InsufficientSamplesError,
    MalformedResponseError,
    ParseError,
    RangeError,
    ShapeError,
    TransportError,
    ValidationError,
    ZeroVectorError,
)
from .estimator import AdaptiveFramePruner
from .fusion import ProjectionSpec, fuse, fuse_manifest, project_and_normalize
from .graph import (
    GraphSource,
    HttpChatClient,
    SemanticGraph,
    generate_graph_fallback,
    load_graph,
    textualize_g1,
)
from .manifest import FrameRecord, Manifest, PreFused, RawPair, load_manifest, save_manifest
from .pipeline import BatchStats, PruneConfig, prune_manifest, run_batch, run_pipeline
from .prompt import (
    CostReport,
    PromptBundle,
    TokenCostModel,
    assemble_prompt,
    bundle_to_dict,
    bundle_to_json,
    compute_report,
)
from .selection import PrunedSet, select_centroid, select_highest_score, select_representatives
from .threshold import KdeConfig, ThresholdReport, adaptive_threshold, kde_density

__version__ = "0.1.0"

__all__ = [
    "AdaptiveFramePruner",
    "AfpError",
    "AfpWarning",
    "BatchStats",
    "ClusterSet",
    "CostReport",
    "DistanceTables",
    "EmptySelectionError",
    "FrameRecord",
    "GraphSource",
    "HttpChatClient",
    "InsufficientSamplesError",
    "KdeConfig",
    "MalformedResponseError",
    "Manifest",
    "ParseError",
    "PreFused",
    "PromptBundle",
    "PruneConfig",
    "PrunedSet",
    "ProjectionSpec",
    "RangeError",
    "RawPair",
    "SemanticGraph",
    "ShapeError",
    "ThresholdReport",
    "TokenCostModel",
    "TransportError",
    "ValidationError",
    "ZeroVectorError",
    "adaptive_threshold",
    "agglomerate",
    "assemble_prompt",
    "build_tables",
    "bundle_to_dict",
    "bundle_to_json",
    "combined_distance",
    "compute_report",
    "cosine_distance",
    "fuse",
    "fuse_manifest",
    "generate_graph_fallback",
    "kde_density",
    "load_graph",
    "load_manifest",
    "project_and_normalize",
    "prune_manifest",
    "refine_clusters",
    "run_batch",
    "run_pipeline",
    "save_manifest",
    "select_centroid",
    "select_highest_score",
    "select_representatives",
    "temporal_distance",
    "textualize_g1",
]
