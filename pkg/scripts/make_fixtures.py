#!/usr/bin/env python3
"""Regenerate the checked-in synthetic manifests under tests/fixtures/.

The fixtures are deterministic; this script only needs to run again if
their construction changes. The 16-frame fixture encodes three visual
groups (12 near-duplicates, 3 slightly shifted frames, 1 distinct frame)
with margins wide enough that the adaptive threshold separates them
robustly: intra-group combined distances stay far below peak+0.15 and
cross-group distances far above it.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
DIM = 512


def unit(vec: np.ndarray) -> np.ndarray:
    return vec / np.linalg.norm(vec)


def axis(i: int) -> np.ndarray:
    v = np.zeros(DIM)
    v[i] = 1.0
    return v


def cos_dist(a, b) -> float:
    return 1.0 - float(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)))


def frame(frame_id: str, t: float, score: float, vec: np.ndarray) -> dict:
    return {
        "frame_id": frame_id,
        "timestamp_s": t,
        "score": score,
        "fused": [round(x, 9) for x in vec.tolist()],
    }


def write(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, separators=(",", ": "), indent=None) + "\n", encoding="utf-8")
    print(f"wrote {path}")


def make_qual16() -> None:
    # Group A: 12 near-duplicates around e1, perturbed along e4.
    # Group B: 3 shifted frames around 0.65*e1 + sin(phi)*e2 (cosine distance
    #          0.35 from A), perturbed along e5.
    # Distinct frame: picked so it is far from both groups but clearly
    #          nearer to B than to A (refinement folds it into B).
    phi = math.acos(0.65)
    base_a = axis(0)
    base_b = math.cos(phi) * axis(0) + math.sin(phi) * axis(1)

    c1 = 0.15
    c2 = (0.5 - c1 * 0.65) / math.sin(phi)
    c3 = math.sqrt(1.0 - c1 * c1 - c2 * c2)
    distinct = c1 * axis(0) + c2 * axis(1) + c3 * axis(2)

    scores = [0.5, 0.9, 1.7, 0.8, 0.7, 0.6, 1.1, 0.4, 0.3, 0.2, 1.0, 0.1, 2.0, 2.5, 2.2, 3.0]

    frames = []
    vecs = []
    for i in range(12):
        v = unit(base_a + 0.002 * i * axis(3))
        vecs.append(v)
        frames.append(frame(f"f{i:02d}", float(i), scores[i], v))
    for j in range(3):
        v = unit(base_b + 0.002 * j * axis(4))
        vecs.append(v)
        frames.append(frame(f"f{12 + j:02d}", float(12 + j), scores[12 + j], v))
    vecs.append(distinct)
    frames.append(frame("f15", 15.0, scores[15], distinct))

    # Sanity margins: tight within groups, wide across them, and the
    # distinct frame closer to B than to A.
    for group in (range(0, 12), range(12, 15)):
        for i in group:
            for j in group:
                assert cos_dist(vecs[i], vecs[j]) < 5e-4
    for i in range(12):
        for j in range(12, 15):
            assert 0.3 < cos_dist(vecs[i], vecs[j]) < 0.4
        assert cos_dist(vecs[i], vecs[15]) > 0.8
    for j in range(12, 15):
        assert 0.45 < cos_dist(vecs[j], vecs[15]) < 0.55

    write(
        FIXTURES / "qual16.manifest.json",
        {"video_id": "qual16", "dims": "prefused", "frames": frames},
    )
    write(
        FIXTURES / "qual16.graph.json",
        {
            "nodes": ["ambulance", "tent", "crowd"],
            "triplets": [["ambulance", "parked near", "tent"], ["crowd", "watching", "ambulance"]],
        },
    )
    write(
        FIXTURES / "qual16.qa.json",
        {
            "question": "Which object is moving quickly?",
            "options": ["Ambulance", "Truck", "Tent", "Bicycle"],
        },
    )


def make_quad4() -> None:
    # Two tight pairs far apart. With 2+2 frames the cross pairs (4)
    # outnumber the intra pairs (2), so the density peak sits at the cross
    # distance and the adaptive threshold merges everything into one
    # cluster: the degenerate all-echoes case, kept as a fixture on purpose.
    base_a = axis(0)
    base_b = unit(axis(0) * 0.2 + axis(1))
    frames = [
        frame("a0", 0.0, 0.4, unit(base_a + 0.001 * axis(3))),
        frame("a1", 1.0, 0.8, unit(base_a + 0.002 * axis(3))),
        frame("b0", 8.0, 0.9, unit(base_b + 0.001 * axis(4))),
        frame("b1", 9.0, 0.1, unit(base_b + 0.002 * axis(4))),
    ]
    write(FIXTURES / "quad4.manifest.json", {"video_id": "quad4", "dims": "prefused", "frames": frames})


def make_groups7() -> None:
    # Five near-duplicates plus a shifted pair: duplicate pairs dominate
    # (11 tight vs 10 cross), the groups survive thresholding, and no
    # singleton remains, so refinement is a no-op.
    base_a = axis(0)
    base_b = unit(0.65 * axis(0) + math.sin(math.acos(0.65)) * axis(1))
    frames = []
    for i in range(5):
        frames.append(frame(f"a{i}", float(i), 0.2 * i, unit(base_a + 0.002 * i * axis(3))))
    for j in range(2):
        frames.append(frame(f"b{j}", float(10 + j), 1.0 - 0.3 * j, unit(base_b + 0.002 * j * axis(4))))
    write(FIXTURES / "groups7.manifest.json", {"video_id": "groups7", "dims": "prefused", "frames": frames})


def make_single1() -> None:
    frames = [frame("only", 3.5, 1.0, axis(7))]
    write(FIXTURES / "single1.manifest.json", {"video_id": "single1", "dims": "prefused", "frames": frames})


def make_pair2() -> None:
    v = unit(axis(0) + 0.5 * axis(1))
    frames = [frame("p0", 0.0, 0.2, v), frame("p1", 2.0, 0.7, v)]
    write(FIXTURES / "pair2.manifest.json", {"video_id": "pair2", "dims": "prefused", "frames": frames})


def make_rawpair3() -> None:
    # Raw-branch manifest (resnet dim 520, clip dim 512): two near-duplicate
    # frames plus one distinct frame, mirroring mini clustering scenarios.
    rng = np.random.default_rng(20240817)
    d_r, d_c = 520, 512
    base_r = rng.standard_normal(d_r)
    base_c = rng.standard_normal(d_c)
    other_r = rng.standard_normal(d_r)
    other_c = rng.standard_normal(d_c)
    frames = []
    for i, (rv, cv) in enumerate(
        [
            (base_r, base_c),
            (base_r + 0.01 * rng.standard_normal(d_r), base_c + 0.01 * rng.standard_normal(d_c)),
            (other_r, other_c),
        ]
    ):
        frames.append(
            {
                "frame_id": f"r{i}",
                "timestamp_s": float(2 * i),
                "score": float(i),
                "resnet": [round(x, 6) for x in rv.tolist()],
                "clip": [round(x, 6) for x in cv.tolist()],
            }
        )
    write(
        FIXTURES / "rawpair3.manifest.json",
        {"video_id": "rawpair3", "dims": {"resnet": d_r, "clip": d_c}, "frames": frames},
    )


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    make_qual16()
    make_quad4()
    make_groups7()
    make_single1()
    make_pair2()
    make_rawpair3()


if __name__ == "__main__":
    main()
