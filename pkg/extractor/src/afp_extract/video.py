"""Frame decoding at requested timestamps (nearest frame, no interpolation)."""

from __future__ import annotations

from pathlib import Path

import cv2
import numpy as np

from .errors import DecodeError


def probe_video(path: str | Path) -> tuple[float, float, int]:
    """Return (duration_s, fps, frame_count)."""
    cap = cv2.VideoCapture(str(path))
    try:
        if not cap.isOpened():
            raise DecodeError(f"cannot open video {path}")
        fps = cap.get(cv2.CAP_PROP_FPS)
        count = int(cap.get(cv2.CAP_PROP_FRAME_COUNT))
        if fps <= 0 or count <= 0:
            raise DecodeError(f"video {path} reports no readable frames (fps={fps}, frames={count})")
        return count / fps, fps, count
    finally:
        cap.release()


def decode_frames_at(path: str | Path, timestamps_s) -> list[np.ndarray]:
    """Decode the frame nearest to each timestamp as an RGB uint8 array.

    Timestamps must lie within [0, duration]; the nearest frame index is
    clamped to the valid range.
    """
    duration, fps, count = probe_video(path)
    for t in timestamps_s:
        if t < 0 or t > duration:
            raise DecodeError(f"timestamp {t}s outside video duration {duration:.3f}s")

    cap = cv2.VideoCapture(str(path))
    try:
        frames = []
        for t in timestamps_s:
            idx = min(max(int(round(t * fps)), 0), count - 1)
            cap.set(cv2.CAP_PROP_POS_FRAMES, idx)
            ok, bgr = cap.read()
            if not ok or bgr is None:
                raise DecodeError(f"cannot decode frame {idx} (t={t}s) of {path}")
            frames.append(cv2.cvtColor(bgr, cv2.COLOR_BGR2RGB))
        return frames
    finally:
        cap.release()
