"""Howe and shifted-White transition contracts."""

import numpy as np
import pytest

from illusionkit.stimuli import (
    HoweSpec,
    ShiftedWhiteSpec,
    WhiteSpec,
    check_equal_intensity,
    howe_sweep,
    induced_sbc_spec,
    render_howe,
    render_shifted_white,
    render_stimulus,
    render_white,
    shifted_white_patch_rects,
    shifted_white_sweep,
)

BASE = WhiteSpec(stripe_period=32, patch_length=64, patch_count_per_side=1)


def mask_side(mask):
    return "left" if mask[:, :mask.shape[1] // 2].any() else "right"


def test_howe_minimal_width_mask_equals_white_mask():
    _, howe_mask = render_howe(HoweSpec(base=BASE, crossing_line_width=0))
    _, white_mask = render_white(BASE)
    assert np.array_equal(howe_mask, white_mask)


def test_howe_maximal_width_pixel_equivalent_to_sbc():
    spec = HoweSpec(base=BASE, crossing_line_width=128)
    howe_img, howe_mask = render_howe(spec)
    sbc_img, sbc_mask = render_stimulus(induced_sbc_spec(spec))
    assert np.array_equal(howe_img, sbc_img)
    assert np.array_equal(howe_mask, sbc_mask)


def test_howe_single_mask_flip_along_monotone_sweep():
    sides = [mask_side(render_howe(s)[1]) for s in howe_sweep(BASE, 17)]
    flips = sum(a != b for a, b in zip(sides, sides[1:]))
    assert flips == 1
    assert sides[0] == "right" and sides[-1] == "left"


def test_howe_equal_intensity_both_regimes():
    assert check_equal_intensity(HoweSpec(base=BASE, crossing_line_width=0))
    assert check_equal_intensity(HoweSpec(base=BASE, crossing_line_width=100))


def test_howe_sweep_is_monotone_and_indexed():
    sweep = howe_sweep(BASE, 9)
    widths = [s.crossing_line_width for s in sweep]
    assert widths == sorted(widths)
    assert [s.transition_index for s in sweep] == list(range(9))


# ---------------------------------------------------------------------------
# shifted White
# ---------------------------------------------------------------------------

def test_shifted_white_mask_right_above_threshold():
    spec = ShiftedWhiteSpec(base=WhiteSpec(stripe_period=32), patch_aspect=2.0)
    img, mask = render_shifted_white(spec)
    assert mask_side(mask) == "right"
    assert np.all(img[mask] == spec.base.patch_intensity)


def test_shifted_white_mask_flips_at_checkerboard_limit():
    lim = ShiftedWhiteSpec(base=WhiteSpec(stripe_period=32), patch_aspect=1.0)
    _, mask = render_shifted_white(lim)
    assert mask_side(mask) == "left"


def test_shifted_white_checkerboard_limit_is_perfect_checkerboard():
    spec = ShiftedWhiteSpec(base=WhiteSpec(stripe_period=32), patch_aspect=1.0)
    img, _ = render_shifted_white(spec)
    t = spec.stripe_thickness
    seg = spec.segment_length
    assert t == seg  # square cells at the limit
    yy, xx = np.mgrid[0:img.shape[0], 0:img.shape[1]]
    xs = xx + (yy // t % 2) * spec.effective_shift
    lattice = np.where((xs // seg) % 2 == 0, spec.base.stripe_dark,
                       spec.base.stripe_bright).astype(np.uint8)
    # outside the two patch cells the image is the exact two-intensity
    # alternating lattice
    left, right = shifted_white_patch_rects(spec)
    patch_px = np.zeros(img.shape, dtype=bool)
    for x0, x1, y0, y1 in (left, right):
        patch_px[y0:y1, x0:x1] = True
    assert np.array_equal(img[~patch_px], lattice[~patch_px])
    assert set(np.unique(lattice)) == {spec.base.stripe_dark, spec.base.stripe_bright}


def test_shifted_white_equal_intensity_and_purity():
    for aspect in (0.8, 1.0, 1.5, 3.0):
        spec = ShiftedWhiteSpec(base=WhiteSpec(stripe_period=32), patch_aspect=aspect)
        assert check_equal_intensity(spec)
        a = render_shifted_white(spec)
        b = render_shifted_white(spec)
        assert np.array_equal(a[0], b[0])


def test_shifted_white_sweep_single_flip():
    aspects = [4.0, 3.0, 2.0, 1.5, 1.25, 1.0, 0.75]
    sides = [mask_side(render_shifted_white(s)[1])
             for s in shifted_white_sweep(WhiteSpec(stripe_period=32), aspects)]
    flips = sum(a != b for a, b in zip(sides, sides[1:]))
    assert flips == 1
