"""Command-line front end.

Subcommands:
  afp run            prune one manifest into a prompt bundle
  afp batch          prune every manifest in a directory
  afp graph-fallback request a semantic graph from an external endpoint

Exit codes: 0 success, 1 (partial) failure, 2 invalid invocation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .clustering import ClusterSet
from .distance import DistanceTables
from .errors import AfpError, MalformedResponseError, TransportError
from .fusion import ProjectionSpec, load_projection_matrix
from .graph import (
    HttpChatClient,
    SemanticGraph,
    generate_graph_fallback,
    graph_to_dict,
    load_graph,
)
from .manifest import load_manifest
from .pipeline import (
    DEFAULT_QUESTION,
    PruneConfig,
    PruneTrace,
    bundle_to_json,
    prune_manifest,
    run_batch,
    run_pipeline,
)
from .prompt import TokenCostModel
from .threshold import KdeConfig

log = logging.getLogger("afp")


def _parse_options_arg(raw: str | None) -> list[str]:
    if not raw:
        return []
    return raw.split(",")


def _parse_bandwidth(raw: str):
    if raw == "scott":
        return "scott"
    try:
        return float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--kde-bandwidth must be 'scott' or a number, got {raw!r}")


def _parse_projection(raw: str) -> ProjectionSpec:
    if raw == "identity":
        return ProjectionSpec(kind="identity_truncate")
    if raw == "seeded":
        return ProjectionSpec(kind="seeded_random_orthonormal", seed=0)
    if raw.startswith("seeded:"):
        return ProjectionSpec(kind="seeded_random_orthonormal", seed=int(raw.split(":", 1)[1]))
    if raw.startswith("external:"):
        paths = raw.split(":", 1)[1].split(",")
        if len(paths) != 2:
            raise argparse.ArgumentTypeError(
                "--projection external needs two matrix files: external:RESNET,CLIP"
            )
        return ProjectionSpec(
            kind="external_matrix",
            matrices=(load_projection_matrix(paths[0]), load_projection_matrix(paths[1])),
        )
    raise argparse.ArgumentTypeError(
        f"--projection must be identity | seeded[:SEED] | external:RESNET,CLIP, got {raw!r}"
    )


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, default=0.6, help="semantic-branch fusion weight in [0,1]")
    parser.add_argument("--beta", type=float, default=0.9, help="visual-vs-temporal distance weight in [0,1]")
    parser.add_argument("--kde-offset", type=float, default=0.15, help="added to the density peak to get the merge threshold")
    parser.add_argument("--kde-bandwidth", type=_parse_bandwidth, default="scott", help="'scott' or a fixed bandwidth")
    parser.add_argument("--no-refine", action="store_true", help="keep single-frame clusters instead of folding them in")
    parser.add_argument("--strategy", choices=["centroid", "highest-score"], default="centroid")
    parser.add_argument("--tokens-per-frame", type=int, default=255)
    parser.add_argument("--projection", type=_parse_projection, default=None,
                        help="identity | seeded[:SEED] | external:RESNET,CLIP")


def _config_from_args(args) -> PruneConfig:
    return PruneConfig(
        alpha=args.alpha,
        beta=args.beta,
        kde=KdeConfig(offset=args.kde_offset, bandwidth_rule=args.kde_bandwidth),
        refine=not args.no_refine,
        strategy=args.strategy.replace("-", "_"),
        projection=args.projection if args.projection is not None else ProjectionSpec(),
        cost=TokenCostModel(tokens_per_frame=args.tokens_per_frame),
    )


def _fallback_graph(question: str, options, endpoint: str) -> tuple[SemanticGraph | None, tuple[str, ...]]:
    """One fallback request; failures degrade to a graph-less run."""
    client = HttpChatClient(endpoint=endpoint, timeout=10.0)
    try:
        return generate_graph_fallback(question, options, client), ()
    except (TransportError, MalformedResponseError) as exc:
        msg = f"graph fallback failed; continuing without a graph ({exc})"
        log.warning(msg)
        return None, (msg,)


def _write_distance_dump(tables: DistanceTables, path: Path, beta: float) -> None:
    lines = [
        f"# pairwise distance tables: n={tables.n} beta={beta:g} "
        f"t_span=[{tables.t_span[0]:g}, {tables.t_span[1]:g}]",
        "# d_cos",
    ]
    lines.extend(" ".join(f"{v:.12g}" for v in row) for row in tables.d_cos)
    lines.append("# d_comb")
    lines.extend(" ".join(f"{v:.12g}" for v in row) for row in tables.d_comb)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_dendrogram_dump(cluster_set: ClusterSet, tau: float | None, path: Path) -> None:
    tau_text = "n/a" if tau is None else f"{tau:.12g}"
    lines = [f"# average-linkage merge log (threshold tau={tau_text})"]
    for a, b, dist in cluster_set.merge_log:
        a_text = "{" + ",".join(map(str, a)) + "}"
        b_text = "{" + ",".join(map(str, b)) + "}"
        lines.append(f"{a_text} + {b_text} @ {dist:.12g}")
    lines.append("# final clusters")
    for members in cluster_set.clusters:
        lines.append("{" + ",".join(map(str, members)) + "}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _cmd_run(args) -> int:
    try:
        cfg = _config_from_args(args)
    except AfpError as exc:
        log.error("invalid configuration: %s", exc)
        return 2
    question = args.question if args.question else DEFAULT_QUESTION
    options = _parse_options_arg(args.options)

    manifest = load_manifest(args.manifest)

    extra_warnings: tuple[str, ...] = ()
    if args.graph:
        graph = load_graph(args.graph)
    elif args.graph_endpoint:
        graph, extra_warnings = _fallback_graph(question, options, args.graph_endpoint)
    else:
        graph = None

    trace: PruneTrace = prune_manifest(manifest, cfg)
    if args.dump_distances and trace.tables is not None:
        _write_distance_dump(trace.tables, Path(args.dump_distances), cfg.beta)
    if args.dump_dendrogram:
        tau = None if trace.threshold_report is None else trace.threshold_report.tau
        _write_dendrogram_dump(trace.cluster_set, tau, Path(args.dump_dendrogram))

    bundle = run_pipeline(manifest, graph, question, options, cfg, trace=trace)
    if extra_warnings:
        bundle = replace(bundle, warnings=bundle.warnings + extra_warnings)

    Path(args.out).write_text(bundle_to_json(bundle), encoding="utf-8")
    log.info(
        "%s: %d -> %d frames (%.1f%% token reduction) -> %s",
        bundle.video_id,
        bundle.report.frames_in,
        bundle.report.frames_out,
        bundle.report.token_reduction_pct,
        args.out,
    )
    return 0


def _cmd_batch(args) -> int:
    try:
        cfg = _config_from_args(args)
    except AfpError as exc:
        log.error("invalid configuration: %s", exc)
        return 2
    graph_loader = None
    if args.graph_endpoint:
        endpoint = args.graph_endpoint

        def graph_loader(question, options):
            return _fallback_graph(question, options, endpoint)

    stats = run_batch(args.in_dir, cfg, args.out, graph_loader=graph_loader)
    log.info(
        "batch: %d videos ok, %d failed; avg frames %.2f -> %.2f, avg token reduction %.1f%%",
        stats.videos,
        stats.failures,
        stats.avg_frames_in,
        stats.avg_frames_out,
        stats.avg_token_reduction_pct,
    )
    return 1 if stats.failures else 0


def _cmd_graph_fallback(args) -> int:
    options = _parse_options_arg(args.options)
    client = HttpChatClient(endpoint=args.endpoint, timeout=10.0)
    graph = generate_graph_fallback(args.question, options, client)
    text = json.dumps(graph_to_dict(graph), indent=2)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="afp", description="Adaptive keyframe pruning engine")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="prune one manifest into a prompt bundle")
    run_p.add_argument("--manifest", required=True)
    run_p.add_argument("--graph", help="semantic-graph JSON sidecar")
    run_p.add_argument("--graph-endpoint", help="chat endpoint used when no graph file is given")
    run_p.add_argument("--question")
    run_p.add_argument("--options", help="comma-separated option texts")
    _add_config_flags(run_p)
    run_p.add_argument("--dump-distances", help="write the distance tables to this text file")
    run_p.add_argument("--dump-dendrogram", help="write the merge log to this text file")
    run_p.add_argument("--out", required=True)
    run_p.set_defaults(func=_cmd_run)

    batch_p = sub.add_parser("batch", help="prune every manifest in a directory")
    batch_p.add_argument("--in", dest="in_dir", required=True)
    batch_p.add_argument("--out", required=True)
    batch_p.add_argument("--graph-endpoint", help="chat endpoint used for manifests without a graph sidecar")
    _add_config_flags(batch_p)
    batch_p.set_defaults(func=_cmd_batch)

    fb_p = sub.add_parser("graph-fallback", help="generate a semantic graph from QA text only")
    fb_p.add_argument("--question", required=True)
    fb_p.add_argument("--options", help="comma-separated option texts")
    fb_p.add_argument("--endpoint", required=True)
    fb_p.add_argument("--out")
    fb_p.set_defaults(func=_cmd_graph_fallback)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AfpError as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
