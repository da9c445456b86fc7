import json
import shutil

import pytest

from afp.cli import main

from conftest import FIXTURES


def _run_args(tmp_path, manifest="qual16", extra=()):
    out = tmp_path / "bundle.json"
    args = [
        "run",
        "--manifest", str(FIXTURES / f"{manifest}.manifest.json"),
        "--question", "Which object is moving quickly?",
        "--options", "Ambulance,Truck,Tent,Bicycle",
        "--out", str(out),
    ]
    args.extend(extra)
    return args, out


def test_run_writes_bundle(tmp_path):
    args, out = _run_args(tmp_path)
    assert main(args) == 0
    doc = json.loads(out.read_text())
    assert doc["video_id"] == "qual16"
    assert doc["report"]["frames_in"] == 16
    assert doc["report"]["frames_out"] == 2
    assert doc["threshold_report"]["tau"] == pytest.approx(0.15, abs=0.01)
    assert doc["config"]["strategy"] == "centroid"
    assert doc["warnings"] == []


def test_run_no_refine_keeps_distinct_singleton(tmp_path):
    args, out = _run_args(tmp_path, extra=["--no-refine"])
    assert main(args) == 0
    assert json.loads(out.read_text())["report"]["frames_out"] == 3


def test_run_is_byte_deterministic(tmp_path):
    args1, out1 = _run_args(tmp_path)
    main(args1)
    first = out1.read_bytes()
    args2, out2 = _run_args(tmp_path)
    main(args2)
    assert out2.read_bytes() == first


def test_run_with_graph_sidecar(tmp_path):
    args, out = _run_args(tmp_path, extra=["--graph", str(FIXTURES / "qual16.graph.json")])
    assert main(args) == 0
    prompt = json.loads(out.read_text())["prompt_text"]
    assert "Semantic graph:" in prompt
    assert "(ambulance, parked near, tent)" in prompt


def test_run_strategy_flag(tmp_path):
    args, out = _run_args(tmp_path, extra=["--strategy", "highest-score"])
    assert main(args) == 0
    doc = json.loads(out.read_text())
    assert doc["report"]["strategy"] == "highest_score"
    assert [f["frame_id"] for f in doc["frames"]] == ["f02", "f15"]


def test_run_dump_files(tmp_path):
    dist = tmp_path / "distances.txt"
    dendro = tmp_path / "dendrogram.txt"
    args, _ = _run_args(
        tmp_path, extra=["--dump-distances", str(dist), "--dump-dendrogram", str(dendro)]
    )
    assert main(args) == 0
    dist_text = dist.read_text().splitlines()
    assert dist_text[0].startswith("# pairwise distance tables: n=16")
    assert "# d_cos" in dist_text and "# d_comb" in dist_text
    # 16 rows per matrix
    assert len([l for l in dist_text if not l.startswith("#")]) == 32
    dendro_text = dendro.read_text()
    assert "# average-linkage merge log" in dendro_text
    assert "# final clusters" in dendro_text
    assert "@" in dendro_text


def test_run_unreachable_graph_endpoint_degrades_gracefully(tmp_path):
    args, out = _run_args(
        tmp_path, extra=["--graph-endpoint", "http://127.0.0.1:1/chat"]
    )
    assert main(args) == 0
    doc = json.loads(out.read_text())
    assert "Semantic graph:" not in doc["prompt_text"]
    assert any("graph fallback failed" in w for w in doc["warnings"])


def test_run_missing_manifest_fails(tmp_path):
    args, _ = _run_args(tmp_path, manifest="nonexistent")
    assert main(args) == 1


def test_invalid_invocation_exits_2():
    with pytest.raises(SystemExit) as err:
        main(["run", "--out", "x.json"])  # missing --manifest
    assert err.value.code == 2


def test_out_of_range_config_exits_2(tmp_path):
    args, _ = _run_args(tmp_path, extra=["--alpha", "2.0"])
    assert main(args) == 2


def test_tokens_per_frame_flag(tmp_path):
    args, out = _run_args(tmp_path, extra=["--tokens-per-frame", "100"])
    assert main(args) == 0
    doc = json.loads(out.read_text())
    assert doc["config"]["cost"]["tokens_per_frame"] == 100


def test_batch_command(tmp_path):
    batch = tmp_path / "in"
    batch.mkdir()
    for stem in ("quad4", "single1"):
        shutil.copy(FIXTURES / f"{stem}.manifest.json", batch / f"{stem}.manifest.json")
    out = tmp_path / "out"
    assert main(["batch", "--in", str(batch), "--out", str(out)]) == 0
    stats = json.loads((out / "batch_stats.json").read_text())
    assert stats["videos"] == 2 and stats["failures"] == 0

    (batch / "zz.manifest.json").write_text("{broken")
    assert main(["batch", "--in", str(batch), "--out", str(tmp_path / "out2")]) == 1
    errors = json.loads((tmp_path / "out2" / "errors.json").read_text())
    assert errors[0]["file"] == "zz.manifest.json"


def test_graph_fallback_command(tmp_path, monkeypatch):
    doc = {"nodes": ["car"], "triplets": [["car", "on", "car"]]}

    class FakeResponse:
        status_code = 200
        text = json.dumps(doc)

    monkeypatch.setattr("afp.graph.requests.post", lambda *a, **k: FakeResponse())
    out = tmp_path / "graph.json"
    code = main(
        ["graph-fallback", "--question", "What moves?", "--options", "car,tree",
         "--endpoint", "http://example.test/chat", "--out", str(out)]
    )
    assert code == 0
    assert json.loads(out.read_text()) == doc


def test_graph_fallback_unreachable_endpoint_fails():
    code = main(
        ["graph-fallback", "--question", "q", "--endpoint", "http://127.0.0.1:1/chat"]
    )
    assert code == 1
