"""PGM round-trips, the pixel function, smoothing, and image variation."""

import math

import numpy as np
import pytest

from varsample.errors import DomainError, FormatError
from varsample.imaging import (
    ImageRaster,
    checkerboard,
    disk,
    image_function,
    image_variation,
    ramp,
    read_pgm,
    smooth_image,
    smoothed_image_variation,
    synthetic_image,
    write_pgm,
)
from varsample.kernels import bspline_kernel

M2 = bspline_kernel(2)


def test_minimal_image_bytes(tmp_path):
    path = tmp_path / "one.pgm"
    write_pgm(ImageRaster(width=1, height=1, maxval=255, pixels=[[0]]), path)
    assert path.read_bytes() == b"P5\n1 1\n255\n\x00"


@pytest.mark.parametrize("maxval", [255, 65535])
def test_round_trip(tmp_path, maxval):
    rng = np.random.default_rng(11)
    px = rng.integers(0, maxval + 1, size=(9, 13))
    r = ImageRaster(width=13, height=9, maxval=maxval, pixels=px)
    path = tmp_path / "img.pgm"
    write_pgm(r, path)
    back = read_pgm(path)
    assert back.width == 13 and back.height == 9 and back.maxval == maxval
    assert np.array_equal(back.pixels, r.pixels)


def test_header_comments_tolerated(tmp_path):
    path = tmp_path / "c.pgm"
    path.write_bytes(b"P5\n# generated\n2 1 # inline\n255\n\x10\x20")
    r = read_pgm(path)
    assert r.width == 2 and r.height == 1
    assert list(r.pixels[0]) == [0x10, 0x20]


def test_malformed_files_report_offsets(tmp_path):
    cases = [
        (b"P6\n1 1\n255\n\x00", "magic"),
        (b"P5\n0 1\n255\n", "width"),
        (b"P5\n1 1\n70000\n\x00\x00", "maxval"),
        (b"P5\n2 2\n255\n\x00\x00", "truncated"),
    ]
    for raw, _ in cases:
        path = tmp_path / "bad.pgm"
        path.write_bytes(raw)
        with pytest.raises(FormatError) as exc:
            read_pgm(path)
        assert exc.value.offset is not None


def test_raster_validation():
    with pytest.raises(DomainError):
        ImageRaster(width=0, height=1, maxval=255, pixels=[[]])
    with pytest.raises(DomainError):
        ImageRaster(width=1, height=1, maxval=255, pixels=[[256]])
    with pytest.raises(DomainError):
        ImageRaster(width=1, height=1, maxval=70000, pixels=[[0]])


def test_pixel_function_half_open_cells():
    r = ImageRaster(width=2, height=1, maxval=255, pixels=[[200, 50]])
    f = image_function(r)
    assert f(np.array([0.5, 0.5])) == 200.0
    assert f(np.array([1.0, 1.0])) == 200.0  # cells include their upper edges
    assert f(np.array([2.0, 0.5])) == 50.0
    assert f(np.array([0.0, 0.0])) == 0.0
    assert f(np.array([2.0001, 0.5])) == 0.0
    assert f.bound == 255.0


def test_constant_image_smooths_to_itself():
    r = ImageRaster(width=8, height=8, maxval=255, pixels=np.full((8, 8), 77))
    out = smooth_image(r, (M2, M2), 8.0, 2)
    assert np.array_equal(out.pixels, r.pixels)


def test_single_white_pixel_dims():
    px = np.zeros((8, 8), dtype=int)
    px[4, 4] = 255
    r = ImageRaster(width=8, height=8, maxval=255, pixels=px)
    out = smooth_image(r, (M2, M2), 4.0, 4)
    assert out.pixels.max() < 255
    assert out.pixels.min() >= 0


def test_smoothing_preserves_level_range():
    img = checkerboard(size=16, tile=4, low=30, high=200)
    # w large enough that no window reaches the zero background
    out = smooth_image(img, (M2, M2), 8.0, 2)
    assert out.pixels.min() >= 30
    assert out.pixels.max() <= 200


def test_smooth_output_scaling():
    img = checkerboard(size=16, tile=4)
    out = smooth_image(img, (M2, M2), 4.0, 2, out_width=32, out_height=8)
    assert out.width == 32 and out.height == 8


def test_variation_constant_zero():
    r = ImageRaster(width=5, height=4, maxval=255, pixels=np.full((4, 5), 9))
    rep = image_variation(r)
    # only the boundary jumps to the background remain
    assert rep.phi[0] == 2 * 4 * 9
    assert rep.phi[1] == 2 * 5 * 9
    rep0 = image_variation(ImageRaster(5, 4, 255, np.zeros((4, 5))))
    assert rep0.combined == 0.0


def test_variation_hand_enumeration():
    r = ImageRaster(width=2, height=1, maxval=255, pixels=[[0, 255]])
    rep = image_variation(r)
    assert rep.combined == pytest.approx(255 * (math.sqrt(2) + 2))
    assert rep.phi == (510.0, 510.0)


def test_variation_3x3_cross():
    # plus-shaped level pattern, checked against direct enumeration
    px = np.array([[0, 9, 0], [9, 9, 9], [0, 9, 0]])
    r = ImageRaster(width=3, height=3, maxval=255, pixels=px)
    rep = image_variation(r)
    # per axis: each of the 3 rows/columns crosses the figure twice
    assert rep.phi[0] == pytest.approx(9 * 2 * 3)
    assert rep.phi[1] == pytest.approx(9 * 2 * 3)


def test_smoothed_variation_not_above_input():
    img = checkerboard(size=8, tile=2)
    v_in = image_variation(img).combined
    rep = smoothed_image_variation(img, (M2, M2), 2.0, 2)
    assert rep.combined <= v_in * 1.01
    assert rep.is_lower_bound


def test_synthetic_generators():
    cb = checkerboard(size=8, tile=2)
    assert cb.pixels[0, 0] == 0 and cb.pixels[0, 2] == 255
    d = disk(size=16)
    assert d.pixels[8, 8] == 255 and d.pixels[0, 0] == 0
    rp = ramp(width=5, height=2, maxval=100)
    assert list(rp.pixels[0]) == [0, 25, 50, 75, 100]
    assert synthetic_image("disk", size=8).width == 8
    with pytest.raises(DomainError):
        synthetic_image("vortex")
