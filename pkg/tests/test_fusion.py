import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afp import (
    ProjectionSpec,
    RangeError,
    ValidationError,
    ZeroVectorError,
    fuse,
    fuse_manifest,
    project_and_normalize,
)
from afp.fusion import branch_matrix, load_projection_matrix, seeded_orthonormal_matrix

from conftest import unit_axis


IDENTITY = ProjectionSpec(kind="identity_truncate")


def test_identity_truncate_normalizes_leading_components():
    vec = np.zeros(512)
    vec[0], vec[1] = 3.0, 4.0
    out = project_and_normalize(vec, IDENTITY, "resnet")
    assert out[0] == pytest.approx(0.6, abs=1e-9)
    assert out[1] == pytest.approx(0.8, abs=1e-9)
    assert np.all(out[2:] == 0.0)


def test_identity_truncate_requires_512():
    with pytest.raises(ValidationError):
        project_and_normalize(np.ones(100), IDENTITY, "resnet")


def test_seeded_projection_output_is_unit_norm():
    rng = np.random.default_rng(0)
    spec = ProjectionSpec(kind="seeded_random_orthonormal", seed=42)
    for dim in (512, 600, 2048):
        vec = rng.standard_normal(dim)
        vec /= np.linalg.norm(vec)
        out = project_and_normalize(vec, spec, "clip")
        assert abs(np.linalg.norm(out) - 1.0) < 1e-9


def test_seeded_projection_matrices_are_orthonormal_and_deterministic():
    m1 = seeded_orthonormal_matrix(7, "resnet", 600)
    m2 = seeded_orthonormal_matrix(7, "resnet", 600)
    assert np.array_equal(m1, m2)
    gram = m1.T @ m1
    assert np.max(np.abs(gram - np.eye(512))) < 1e-6
    # distinct branches get distinct maps
    assert not np.allclose(m1, seeded_orthonormal_matrix(7, "clip", 600))


def test_seeded_projection_rejects_small_dims():
    with pytest.raises(ValidationError):
        seeded_orthonormal_matrix(0, "resnet", 128)


def test_zero_vector_raises():
    with pytest.raises(ZeroVectorError):
        project_and_normalize(np.zeros(512), IDENTITY, "resnet")


def test_external_matrix_projection():
    rng = np.random.default_rng(3)
    mats = (rng.standard_normal((520, 512)), rng.standard_normal((512, 512)))
    spec = ProjectionSpec(kind="external_matrix", matrices=mats)
    vec = rng.standard_normal(520)
    out = project_and_normalize(vec, spec, "resnet")
    expected = vec @ mats[0]
    expected /= np.linalg.norm(expected)
    np.testing.assert_allclose(out, expected, atol=1e-12)
    with pytest.raises(ValidationError):
        project_and_normalize(rng.standard_normal(100), spec, "resnet")


def test_external_matrix_shape_validation():
    with pytest.raises(ValidationError):
        ProjectionSpec(kind="external_matrix", matrices=(np.ones((10, 10)), np.ones((10, 512))))
    with pytest.raises(ValidationError):
        ProjectionSpec(kind="external_matrix")


def test_unknown_kind_rejected():
    with pytest.raises(ValidationError):
        ProjectionSpec(kind="pca")


def test_fuse_alpha_endpoints():
    r, c = unit_axis(0), unit_axis(1)
    np.testing.assert_array_equal(fuse(r, c, 0.0), r)
    np.testing.assert_array_equal(fuse(r, c, 1.0), c)


def test_fuse_default_ratio_on_basis_vectors():
    out = fuse(unit_axis(0), unit_axis(1), 0.6)
    assert out[0] == pytest.approx(0.4, abs=1e-9)
    assert out[1] == pytest.approx(0.6, abs=1e-9)
    assert np.all(out[2:] == 0.0)


@pytest.mark.parametrize("alpha", [-0.1, 1.1, float("nan")])
def test_fuse_alpha_out_of_range(alpha):
    with pytest.raises(RangeError):
        fuse(unit_axis(0), unit_axis(1), alpha)


def test_fuse_rejects_non_unit_inputs():
    with pytest.raises(ValidationError):
        fuse(unit_axis(0) * 2.0, unit_axis(1), 0.5)


def _random_unit(seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(512)
    return v / np.linalg.norm(v)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000), st.floats(0.0, 1.0))
def test_fuse_norm_bounded_by_one(seed_a, seed_b, alpha):
    out = fuse(_random_unit(seed_a), _random_unit(seed_b), alpha)
    assert np.linalg.norm(out) <= 1.0 + 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.0, 1.0))
def test_fuse_idempotent_on_equal_branches(seed, alpha):
    v = _random_unit(seed)
    np.testing.assert_allclose(fuse(v, v, alpha), v, atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000), st.integers(0, 10_000), st.floats(0.0, 1.0))
def test_fuse_linear_in_each_argument(sa, sb, sc, alpha):
    # combination of two fusions with a shared branch collapses to the
    # fusion of the (renormalized-free) average only when weights match;
    # check additivity through the raw formula instead
    r1, r2, c = _random_unit(sa), _random_unit(sb), _random_unit(sc)
    lhs = fuse(r1, c, alpha) + fuse(r2, c, alpha)
    rhs = (1 - alpha) * (r1 + r2) + 2 * alpha * c
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_fuse_manifest_matches_per_frame_ops(fixtures_dir):
    from afp import load_manifest

    man = load_manifest(fixtures_dir / "rawpair3.manifest.json")
    spec = ProjectionSpec(kind="seeded_random_orthonormal", seed=0)
    fused = fuse_manifest(man, spec, 0.6)
    for i, frame in enumerate(man.frames):
        r = project_and_normalize(frame.features.resnet_vec, spec, "resnet")
        c = project_and_normalize(frame.features.clip_vec, spec, "clip")
        np.testing.assert_allclose(fused[i], fuse(r, c, 0.6), atol=1e-12)


def test_branch_matrix_validates_branch_name():
    with pytest.raises(ValidationError):
        branch_matrix(IDENTITY, "depth", 512)


def test_projection_matrix_file_round_trip(tmp_path):
    rng = np.random.default_rng(11)
    mat = rng.standard_normal((5, 3))
    path = tmp_path / "proj.mat"
    lines = ["5 3"] + [" ".join(repr(float(v)) for v in row) for row in mat]
    path.write_text("\n".join(lines))
    loaded = load_projection_matrix(path)
    np.testing.assert_allclose(loaded, mat, atol=0)

    bad = tmp_path / "bad.mat"
    bad.write_text("9 3\n1 2 3\n")
    with pytest.raises(ValidationError):
        load_projection_matrix(bad)
