import json
from pathlib import Path

import numpy as np
import pytest

from afp import Manifest, load_graph, load_manifest
from afp.manifest import manifest_from_dict

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def all_manifest_paths() -> list[Path]:
    return sorted(FIXTURES.glob("*.manifest.json"))


@pytest.fixture()
def qual16_manifest() -> Manifest:
    return load_manifest(FIXTURES / "qual16.manifest.json")


@pytest.fixture()
def qual16_graph():
    return load_graph(FIXTURES / "qual16.graph.json")


@pytest.fixture()
def qual16_qa() -> tuple[str, list[str]]:
    doc = json.loads((FIXTURES / "qual16.qa.json").read_text())
    return doc["question"], doc["options"]


def prefused_manifest(vectors, timestamps=None, scores=None, video_id="test") -> Manifest:
    """Build an in-memory pre-fused manifest; short vectors are zero-padded to 512."""
    vectors = [np.asarray(v, dtype=np.float64) for v in vectors]
    vectors = [
        np.concatenate([v, np.zeros(512 - v.shape[0])]) if v.shape[0] < 512 else v
        for v in vectors
    ]
    n = len(vectors)
    timestamps = list(range(n)) if timestamps is None else timestamps
    scores = [0.0] * n if scores is None else scores
    frames = [
        {
            "frame_id": f"f{i}",
            "timestamp_s": float(timestamps[i]),
            "score": float(scores[i]),
            "fused": vectors[i].tolist(),
        }
        for i in range(n)
    ]
    return manifest_from_dict({"video_id": video_id, "dims": "prefused", "frames": frames})


def unit_axis(i: int, dim: int = 512) -> np.ndarray:
    v = np.zeros(dim)
    v[i] = 1.0
    return v
