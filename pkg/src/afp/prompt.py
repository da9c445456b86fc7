"""Prompt assembly and frame/token cost reporting.

The emitted prompt references frames by id and timestamp; callers attach
actual pixels downstream. Token costs are a declared approximation
(images at a flat per-frame rate, text at a per-character rate), good
enough to compare a pruned prompt against its unpruned baseline.
"""

from __future__ import annotations

import json
import math
import string
from dataclasses import dataclass

from .errors import EmptySelectionError, ValidationError
from .selection import PrunedSet
from .threshold import ThresholdReport

ANSWER_INSTRUCTION = "Answer with the option letter only."


@dataclass(frozen=True)
class TokenCostModel:
    tokens_per_frame: int = 255
    tokens_per_text_char: float = 0.25

    def __post_init__(self):
        if self.tokens_per_frame <= 0:
            raise ValidationError("tokens_per_frame must be positive")
        if self.tokens_per_text_char <= 0:
            raise ValidationError("tokens_per_text_char must be positive")

    def estimate(self, frames: float, text: str) -> float:
        return frames * self.tokens_per_frame + math.ceil(len(text) * self.tokens_per_text_char)


@dataclass(frozen=True)
class CostReport:
    frames_in: float
    frames_out: float
    frame_reduction_pct: float
    tokens_in_est: float
    tokens_out_est: float
    token_reduction_pct: float
    tau: float | None
    strategy: str | None

    def to_dict(self) -> dict:
        return {
            "frames_in": self.frames_in,
            "frames_out": self.frames_out,
            "frame_reduction_pct": self.frame_reduction_pct,
            "tokens_in_est": self.tokens_in_est,
            "tokens_out_est": self.tokens_out_est,
            "token_reduction_pct": self.token_reduction_pct,
            "tau": self.tau,
            "strategy": self.strategy,
        }


@dataclass(frozen=True)
class PromptBundle:
    """Everything a downstream caller needs: frames, text, and the cost sheet.

    Bundles are self-describing: they embed the cluster layout, the
    threshold report, and the effective configuration that produced them.
    """

    video_id: str
    frame_refs: tuple[tuple[str, float], ...]
    graph_text: str
    question_text: str
    options_text: tuple[str, ...]
    prompt_text: str
    report: CostReport
    threshold_report: ThresholdReport | None = None
    clusters: tuple[tuple[str, ...], ...] = ()
    config: dict | None = None
    warnings: tuple[str, ...] = ()


def bundle_to_dict(bundle: PromptBundle) -> dict:
    """Output-document form of a bundle (see the JSON schema in the README)."""
    return {
        "video_id": bundle.video_id,
        "frames": [
            {"frame_id": fid, "timestamp_s": ts} for fid, ts in bundle.frame_refs
        ],
        "prompt_text": bundle.prompt_text,
        "report": bundle.report.to_dict(),
        "threshold_report": (
            None if bundle.threshold_report is None else bundle.threshold_report.to_dict()
        ),
        "clusters": [list(c) for c in bundle.clusters],
        "config": bundle.config,
        "warnings": list(bundle.warnings),
    }


def bundle_to_json(bundle: PromptBundle) -> str:
    return json.dumps(bundle_to_dict(bundle), indent=2)


def _frame_line(frame_id: str, timestamp_s: float) -> str:
    return f"[Frame {frame_id} @ {timestamp_s:g}s]"


def assemble_prompt(pruned: PrunedSet, graph_text: str, question: str, options) -> str:
    """Deterministic prompt layout.

    Frame placeholder lines (timestamp ascending), the graph text when
    non-empty, the question, lettered options, and a fixed answer
    instruction (omitted when there are no options to letter).
    """
    if not pruned.representatives:
        raise EmptySelectionError("cannot assemble a prompt with no representative frames")
    if not question:
        raise ValidationError("question must be non-empty")
    options = list(options)
    if len(options) > len(string.ascii_uppercase):
        raise ValidationError(f"at most {len(string.ascii_uppercase)} options are supported")

    lines = [_frame_line(r.frame_id, r.timestamp_s) for r in pruned.representatives]
    if graph_text:
        lines.append(graph_text)
    lines.append(f"Question: {question}")
    for letter, option in zip(string.ascii_uppercase, options):
        lines.append(f"{letter}) {option}")
    if options:
        lines.append(ANSWER_INSTRUCTION)
    return "\n".join(lines)


def compute_report(
    frames_in: float,
    frames_out: float,
    prompt_text: str,
    baseline_prompt_text: str,
    cost: TokenCostModel = TokenCostModel(),
    *,
    tau: float | None = None,
    strategy: str | None = None,
) -> CostReport:
    """Frame and estimated-token reduction of a pruned prompt vs its baseline.

    Frame counts may be fractional (batch averages). Reduction percentages
    are 100 * (1 - out / in), defined as 0 when the input side is 0.
    """
    if frames_out > frames_in or frames_out < 0:
        raise ValidationError(f"need frames_in >= frames_out >= 0, got {frames_in} -> {frames_out}")
    tokens_in = cost.estimate(frames_in, baseline_prompt_text)
    tokens_out = cost.estimate(frames_out, prompt_text)
    return CostReport(
        frames_in=frames_in,
        frames_out=frames_out,
        frame_reduction_pct=_reduction_pct(frames_in, frames_out),
        tokens_in_est=tokens_in,
        tokens_out_est=tokens_out,
        token_reduction_pct=_reduction_pct(tokens_in, tokens_out),
        tau=tau,
        strategy=strategy,
    )


def _reduction_pct(total_in: float, total_out: float) -> float:
    if total_in == 0:
        return 0.0
    return 100.0 * (1.0 - total_out / total_in)
