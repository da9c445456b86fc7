from pathlib import Path

import cv2
import numpy as np
import pytest

from afp_extract import FeatureModels, load_feature_models


@pytest.fixture(scope="session")
def test_clip(tmp_path_factory) -> Path:
    """A ~3 s synthetic clip (24 frames @ 8 fps) with visible motion."""
    path = tmp_path_factory.mktemp("video") / "clip.avi"
    w, h, fps = 64, 48, 8.0
    writer = cv2.VideoWriter(str(path), cv2.VideoWriter_fourcc(*"MJPG"), fps, (w, h))
    assert writer.isOpened()
    for i in range(24):
        img = np.zeros((h, w, 3), np.uint8)
        img[:, :, 0] = 10 * i
        x = 2 * i
        cv2.rectangle(img, (x, 10), (min(x + 8, w - 1), 30), (0, 255 - 5 * i, 255), -1)
        writer.write(img)
    writer.release()
    return path


@pytest.fixture(scope="session")
def models() -> FeatureModels:
    # seeded random weights: the consistency and schema contracts under test
    # do not depend on what the backbones learned
    return load_feature_models(weights="random", seed=0)
