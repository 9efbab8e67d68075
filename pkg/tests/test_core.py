import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pasmef import (
    ChannelMismatch,
    DecodeError,
    DimensionMismatch,
    EmptyStack,
    FusionConfig,
    SizeMismatch,
    load_stack,
    normalize_sum_to_one,
    read_image,
    to_luminance,
    write_png,
)
from pasmef.core import check_same_size, resize_bilinear, to_uint8


def test_load_single_file(tmp_path):
    write_png(tmp_path / "a.png", np.full((4, 5, 3), 0.5))
    stack = load_stack(tmp_path)
    assert stack.n_exposures == 1
    assert stack.images.shape == (1, 4, 5, 3)


def test_load_empty_dir(tmp_path):
    with pytest.raises(EmptyStack):
        load_stack(tmp_path)


def test_load_ignores_other_files(tmp_path):
    (tmp_path / "notes.txt").write_text("hello")
    with pytest.raises(EmptyStack):
        load_stack(tmp_path)


def test_load_dimension_mismatch(tmp_path):
    write_png(tmp_path / "a.png", np.zeros((480, 640, 3)))
    write_png(tmp_path / "b.png", np.zeros((240, 320, 3)))
    with pytest.raises(DimensionMismatch):
        load_stack(tmp_path)


def test_load_corrupt_file(tmp_path):
    write_png(tmp_path / "a.png", np.zeros((4, 4, 3)))
    (tmp_path / "b.png").write_bytes(b"\x89PNG not really")
    with pytest.raises(DecodeError):
        load_stack(tmp_path)


def test_load_orders_by_filename(tmp_path):
    for name, v in (("c.png", 0.9), ("a.png", 0.1), ("b.png", 0.5)):
        write_png(tmp_path / name, np.full((3, 3, 3), v))
    stack = load_stack(tmp_path)
    assert stack.names == ("a.png", "b.png", "c.png")
    np.testing.assert_array_less(np.diff(stack.images[:, 0, 0, 0]), 0.5)
    assert list(stack.images[:, 0, 0, 0]) == sorted(stack.images[:, 0, 0, 0])


def test_png_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(1)
    q = rng.integers(0, 256, size=(7, 9, 3), dtype=np.uint8)
    write_png(tmp_path / "x.png", q / 255.0)
    back = read_image(tmp_path / "x.png")
    np.testing.assert_array_equal(to_uint8(back), q)


def test_sixteen_bit_scaling(tmp_path):
    import cv2

    raw = np.array([[[0, 32768, 65535]]], dtype=np.uint16)
    cv2.imwrite(str(tmp_path / "x.png"), raw)
    img = read_image(tmp_path / "x.png")
    # stored as BGR, returned as RGB
    np.testing.assert_allclose(img[0, 0], [65535 / 65535, 32768 / 65535, 0.0])


def test_gray_input_becomes_rgb(tmp_path):
    write_png(tmp_path / "g.png", np.full((3, 4), 0.2))
    img = read_image(tmp_path / "g.png")
    assert img.shape == (3, 4, 3)


def test_quantize_rounds_half_up():
    vals = np.array([0.5 / 255, 1.5 / 255, 254.5 / 255, 1.0, 0.0])
    assert list(to_uint8(vals)) == [1, 2, 255, 255, 0]


@pytest.mark.parametrize("rgb, expected", [
    ((1, 1, 1), 1.0),
    ((0, 0, 0), 0.0),
    ((1, 0, 0), 0.299),
])
def test_luminance_examples(rgb, expected):
    assert to_luminance(np.array([[rgb]], dtype=float))[0, 0] == pytest.approx(expected, abs=1e-15)


def test_luminance_rejects_gray():
    with pytest.raises(ChannelMismatch):
        to_luminance(np.zeros((4, 4)))


@given(arrays(np.float64, (5, 4, 3), elements=st.floats(0, 1)))
def test_luminance_stays_in_unit_range(img):
    y = to_luminance(img)
    assert y.min() >= 0.0 and y.max() <= 1.0 + 1e-15


def test_normalize_examples():
    out = normalize_sum_to_one(np.array([[[0.2]], [[0.6]]]))
    np.testing.assert_allclose(out[:, 0, 0], [0.25, 0.75])
    out = normalize_sum_to_one(np.zeros((3, 1, 1)))
    np.testing.assert_allclose(out[:, 0, 0], [1 / 3] * 3)
    out = normalize_sum_to_one(np.array([[[0.37, 2.0]]]))
    np.testing.assert_array_equal(out, 1.0)


def test_normalize_rejects_bad_shapes():
    with pytest.raises(SizeMismatch):
        normalize_sum_to_one(np.zeros((4, 4)))
    with pytest.raises(SizeMismatch):
        check_same_size(np.zeros((2, 3)), np.zeros((3, 2)))


weight_stacks = arrays(np.float64, st.tuples(st.integers(1, 4), st.integers(1, 5), st.integers(1, 5)),
                       elements=st.floats(0, 10))


@given(weight_stacks)
def test_normalize_sums_to_one(maps):
    out = normalize_sum_to_one(maps)
    assert np.all(out >= 0)
    np.testing.assert_allclose(out.sum(axis=0), 1.0, atol=1e-6)


@given(weight_stacks)
def test_normalize_idempotent(maps):
    once = normalize_sum_to_one(maps)
    np.testing.assert_allclose(normalize_sum_to_one(once), once, atol=1e-12)


@settings(max_examples=50)
@given(weight_stacks, st.floats(1e-3, 1e3))
def test_normalize_scale_invariant(maps, c):
    # keep clear of the zero-sum fallback threshold
    maps = maps + 1e-6
    np.testing.assert_allclose(normalize_sum_to_one(c * maps), normalize_sum_to_one(maps), atol=1e-9)


def test_config_validation():
    FusionConfig(pyramid_levels=3)
    for bad in (dict(gf_radius=0), dict(gf_eps=0), dict(pca_smooth_sigma=-1),
                dict(saliency_width=0), dict(pyramid_levels=0), dict(pyramid_levels="deep"),
                dict(sigma_floor=0), dict(saliency_blur_sigma=0)):
        with pytest.raises(ValueError):
            FusionConfig(**bad)


def test_resize_preserves_constants_and_shape():
    out = resize_bilinear(np.full((30, 50), 0.3), (7, 11))
    assert out.shape == (7, 11)
    np.testing.assert_allclose(out, 0.3, atol=1e-12)
    up = resize_bilinear(np.full((4, 6), 0.7), (40, 61))
    np.testing.assert_allclose(up, 0.7, atol=1e-12)


def test_resize_linear_ramp_upsampling():
    # interior samples of a linear ramp are reproduced exactly by linear interpolation
    x = np.tile(np.arange(8.0), (3, 1))
    up = resize_bilinear(x, (3, 16))
    centers = (np.arange(16) + 0.5) / 2 - 0.5
    np.testing.assert_allclose(up[0, 1:-1], centers[1:-1], atol=1e-12)
