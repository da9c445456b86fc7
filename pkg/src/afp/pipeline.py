"""End-to-end orchestration: fuse, measure, threshold, cluster, select, report.

Single-video runs are deterministic: identical inputs and configuration
produce byte-identical output bundles. Batch runs process every manifest
in a directory, keep going past per-file failures, and aggregate
statistics in a file-order-independent way.
"""

from __future__ import annotations

import json
import warnings
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

from ._validation import check_unit_interval
from .clustering import ClusterSet, agglomerate, refine_clusters
from .distance import DistanceTables, build_tables
from .errors import AfpError, AfpWarning, ParseError
from .fusion import ProjectionSpec, fuse_manifest
from .graph import SemanticGraph, load_graph, textualize_g1
from .manifest import Manifest, load_manifest
from .prompt import (
    PromptBundle,
    TokenCostModel,
    assemble_prompt,
    bundle_to_json,
    compute_report,
)
from .selection import PrunedSet, Representative, check_strategy, select_representatives
from .threshold import KdeConfig, ThresholdReport, adaptive_threshold

DEFAULT_QUESTION = "What is shown in this video?"

MANIFEST_SUFFIX = ".manifest.json"
GRAPH_SUFFIX = ".graph.json"
QA_SUFFIX = ".qa.json"
BUNDLE_SUFFIX = ".bundle.json"


@dataclass(frozen=True)
class PruneConfig:
    """Every knob of the pruning engine, with the stock defaults."""

    alpha: float = 0.6
    beta: float = 0.9
    kde: KdeConfig = field(default_factory=KdeConfig)
    refine: bool = True
    strategy: str = "centroid"
    projection: ProjectionSpec = field(default_factory=ProjectionSpec)
    cost: TokenCostModel = field(default_factory=TokenCostModel)

    def __post_init__(self):
        check_unit_interval(self.alpha, "alpha")
        check_unit_interval(self.beta, "beta")
        check_strategy(self.strategy)

    def to_dict(self) -> dict:
        proj: dict = {"kind": self.projection.kind}
        if self.projection.kind == "seeded_random_orthonormal":
            proj["seed"] = self.projection.seed
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "kde": {
                "offset": self.kde.offset,
                "grid_points": self.kde.grid_points,
                "bandwidth_rule": self.kde.bandwidth_rule,
            },
            "refine": self.refine,
            "strategy": self.strategy,
            "projection": proj,
            "cost": {
                "tokens_per_frame": self.cost.tokens_per_frame,
                "tokens_per_text_char": self.cost.tokens_per_text_char,
            },
        }


@dataclass(frozen=True)
class BatchStats:
    videos: int
    avg_frames_in: float
    avg_frames_out: float
    avg_token_reduction_pct: float
    failures: int = 0

    def to_dict(self) -> dict:
        return {
            "videos": self.videos,
            "avg_frames_in": self.avg_frames_in,
            "avg_frames_out": self.avg_frames_out,
            "avg_token_reduction_pct": self.avg_token_reduction_pct,
            "failures": self.failures,
        }


@contextmanager
def _stage(name: str):
    """Re-raise engine errors with the pipeline stage prepended."""
    try:
        yield
    except AfpError as exc:
        raise type(exc)(f"[{name}] {exc}") from exc


def _all_frames_pruned_set(manifest: Manifest) -> PrunedSet:
    reps = tuple(
        Representative(cluster_index=i, frame_index=i, frame_id=f.frame_id, timestamp_s=f.timestamp_s)
        for i, f in enumerate(manifest.frames)
    )
    return PrunedSet(representatives=reps)


@dataclass(frozen=True)
class PruneTrace:
    """Intermediate pruning state, kept around for debug dumps."""

    tables: DistanceTables | None
    threshold_report: ThresholdReport | None
    cluster_set: ClusterSet
    pruned: PrunedSet


def prune_manifest(manifest: Manifest, cfg: PruneConfig = PruneConfig()) -> PruneTrace:
    """Run the pruning stages (fuse, measure, threshold, cluster, select).

    A single-frame manifest short-circuits: the frame represents itself
    and no threshold is estimated.
    """
    if len(manifest) == 1:
        return PruneTrace(
            tables=None,
            threshold_report=None,
            cluster_set=ClusterSet(clusters=((0,),), merge_log=()),
            pruned=_all_frames_pruned_set(manifest),
        )

    with _stage("fusion"):
        fused = fuse_manifest(manifest, cfg.projection, cfg.alpha)
    with _stage("distance"):
        tables = build_tables(list(zip(fused, manifest.timestamps())), cfg.beta)
    with _stage("threshold"):
        threshold_report = adaptive_threshold(tables.upper_cos(), cfg.kde)
    with _stage("clustering"):
        cluster_set = agglomerate(tables.d_comb, threshold_report.tau)
        cluster_set = refine_clusters(cluster_set, tables.d_cos, cfg.refine)
    with _stage("selection"):
        pruned = select_representatives(
            cluster_set,
            strategy=cfg.strategy,
            scores=manifest.scores(),
            timestamps=manifest.timestamps(),
            frame_ids=manifest.frame_ids(),
            d_cos=tables.d_cos,
        )
    return PruneTrace(
        tables=tables,
        threshold_report=threshold_report,
        cluster_set=cluster_set,
        pruned=pruned,
    )


def run_pipeline(
    manifest: Manifest,
    graph: SemanticGraph | None,
    question: str,
    options: Sequence[str],
    cfg: PruneConfig = PruneConfig(),
    *,
    trace: PruneTrace | None = None,
) -> PromptBundle:
    """Prune one manifest and assemble its prompt bundle."""
    n = len(manifest)
    graph_text = textualize_g1(graph) if graph is not None else ""

    if trace is None:
        trace = prune_manifest(manifest, cfg)
    pruned = trace.pruned
    threshold_report = trace.threshold_report
    cluster_set = trace.cluster_set

    with _stage("prompt"):
        prompt_text = assemble_prompt(pruned, graph_text, question, options)
        baseline_text = assemble_prompt(_all_frames_pruned_set(manifest), "", question, options)
        report = compute_report(
            n,
            len(pruned.representatives),
            prompt_text,
            baseline_text,
            cfg.cost,
            tau=None if threshold_report is None else threshold_report.tau,
            strategy=cfg.strategy,
        )

    frame_ids = manifest.frame_ids()
    return PromptBundle(
        video_id=manifest.video_id,
        frame_refs=tuple((r.frame_id, r.timestamp_s) for r in pruned.representatives),
        graph_text=graph_text,
        question_text=question,
        options_text=tuple(options),
        prompt_text=prompt_text,
        report=report,
        threshold_report=threshold_report,
        clusters=tuple(tuple(frame_ids[i] for i in members) for members in cluster_set.clusters),
        config=cfg.to_dict(),
        warnings=(),
    )


def discover_manifests(manifest_dir: str | Path) -> list[Path]:
    """Manifest files of a batch directory, in stable (sorted) order."""
    return sorted(Path(manifest_dir).glob(f"*{MANIFEST_SUFFIX}"))


def load_qa_sidecar(path: Path) -> tuple[str, list[str]]:
    doc = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: QA sidecar must be a JSON object")
    question = doc.get("question") or DEFAULT_QUESTION
    options = doc.get("options") or []
    if not isinstance(question, str) or not isinstance(options, list) or not all(
        isinstance(o, str) for o in options
    ):
        raise ParseError(f'{path}: expected {{"question": str, "options": [str]}}')
    return question, list(options)


def run_batch(
    manifest_dir: str | Path,
    cfg: PruneConfig,
    out_dir: str | Path,
    *,
    graph_loader=None,
) -> BatchStats:
    """Process every ``*.manifest.json`` under a directory.

    Sibling files ``<stem>.graph.json`` and ``<stem>.qa.json`` supply the
    graph and the question/options. Failures are collected into
    ``errors.json`` and do not stop the batch; statistics cover the
    successfully processed videos only and do not depend on file order.
    """
    out_path = Path(out_dir)
    out_path.mkdir(parents=True, exist_ok=True)

    per_video: dict[str, tuple[float, float, float]] = {}
    errors: list[dict] = []

    for manifest_file in discover_manifests(manifest_dir):
        stem = manifest_file.name[: -len(MANIFEST_SUFFIX)]
        try:
            manifest = load_manifest(manifest_file)
            qa_file = manifest_file.with_name(stem + QA_SUFFIX)
            if qa_file.exists():
                question, options = load_qa_sidecar(qa_file)
            else:
                question, options = DEFAULT_QUESTION, []
            graph_file = manifest_file.with_name(stem + GRAPH_SUFFIX)
            extra_warnings: tuple[str, ...] = ()
            if graph_file.exists():
                graph = load_graph(graph_file)
            elif graph_loader is not None:
                graph, extra_warnings = graph_loader(question, options)
            else:
                graph = None
            bundle = run_pipeline(manifest, graph, question, options, cfg)
            if extra_warnings:
                bundle = replace(bundle, warnings=bundle.warnings + extra_warnings)
            (out_path / (stem + BUNDLE_SUFFIX)).write_text(bundle_to_json(bundle), encoding="utf-8")
            per_video[stem] = (
                float(bundle.report.frames_in),
                float(bundle.report.frames_out),
                float(bundle.report.token_reduction_pct),
            )
        except (AfpError, json.JSONDecodeError, OSError) as exc:
            errors.append(
                {"file": manifest_file.name, "error": type(exc).__name__, "message": str(exc)}
            )

    if not per_video and not errors:
        warnings.warn(f"batch directory {manifest_dir} holds no manifests", AfpWarning)

    if per_video:
        ordered = [per_video[stem] for stem in sorted(per_video)]
        count = len(ordered)
        stats = BatchStats(
            videos=count,
            avg_frames_in=sum(v[0] for v in ordered) / count,
            avg_frames_out=sum(v[1] for v in ordered) / count,
            avg_token_reduction_pct=sum(v[2] for v in ordered) / count,
            failures=len(errors),
        )
    else:
        stats = BatchStats(
            videos=0,
            avg_frames_in=0.0,
            avg_frames_out=0.0,
            avg_token_reduction_pct=0.0,
            failures=len(errors),
        )

    (out_path / "batch_stats.json").write_text(json.dumps(stats.to_dict(), indent=2), encoding="utf-8")
    if errors:
        (out_path / "errors.json").write_text(json.dumps(errors, indent=2), encoding="utf-8")
    return stats
