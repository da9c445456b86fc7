"""afp-extract: write frame manifests from a video file."""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import ExtractError
from .extract import ExtractionJob, PrefusedEmit, extract

log = logging.getLogger("afp-extract")


def _parse_timestamps(raw: str):
    if raw.startswith("uniform:") or raw.startswith("uniform("):
        return raw
    try:
        return [float(t) for t in raw.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--timestamps must be a comma-separated list of seconds or uniform:N, got {raw!r}"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="afp-extract",
        description="Decode frames at timestamps and emit a feature manifest",
    )
    parser.add_argument("--video", required=True)
    parser.add_argument("--timestamps", required=True, type=_parse_timestamps,
                        help="comma-separated seconds, or uniform:N")
    parser.add_argument("--scores", help="comma-separated upstream scores, one per timestamp")
    parser.add_argument("--prefused", action="store_true",
                        help="emit fused 512-d vectors instead of the raw branch pair")
    parser.add_argument("--alpha", type=float, default=0.6, help="fusion weight (prefused mode)")
    parser.add_argument("--seed", type=int, default=0, help="projection seed (prefused mode)")
    parser.add_argument("--weights", choices=["pretrained", "random"], default="pretrained",
                        help="feature-model weights; 'random' is a seeded offline stand-in")
    parser.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)

    if isinstance(args.timestamps, str):
        if args.scores:
            log.error("--scores cannot be combined with uniform sampling")
            return 2
        frame_spec = args.timestamps
    else:
        times = args.timestamps
        if args.scores:
            scores = [float(s) for s in args.scores.split(",")]
            if len(scores) != len(times):
                log.error("got %d scores for %d timestamps", len(scores), len(times))
                return 2
        else:
            scores = [0.0] * len(times)
        frame_spec = list(zip(times, scores))

    emit = PrefusedEmit(alpha=args.alpha, projection_seed=args.seed) if args.prefused else "raw_pair"
    job = ExtractionJob(
        video_path=args.video,
        frame_spec=frame_spec,
        output_path=args.out,
        emit=emit,
        weights=args.weights,
    )
    try:
        out = extract(job)
    except ExtractError as exc:
        log.error("%s", exc)
        return 1
    log.info("wrote %s", out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
