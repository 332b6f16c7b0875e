"""Illusion-destroying transforms and their validation rule."""

import numpy as np
import pytest

from illusionkit.errors import CompatibilityError
from illusionkit.stimuli import (
    DotInsertionParams,
    GridSpec,
    HermannSpec,
    NonIllusionSpec,
    OrientationParams,
    WarpParams,
    WhiteSpec,
    differs_enough,
    hermann_intersections,
    render_stimulus,
)
from scipy import ndimage


def test_dot_insertion_one_disc_per_intersection():
    base = HermannSpec(square_size=48, street_width=12,
                       square_intensity=30, street_intensity=220)
    spec = NonIllusionSpec(base=base, transform="dot_insertion",
                           transform_params=DotInsertionParams(dot_radius=5))
    img, mask = render_stimulus(spec)
    assert mask.sum() == 0
    # discs are the street-intensity complement, one per crossing
    base_img, _ = render_stimulus(base)
    dots = img != base_img
    assert np.all(img[dots] == 255 - base.street_intensity)
    _, n = ndimage.label(dots)
    assert n == len(hermann_intersections(base))


def test_dot_insertion_rejected_on_sbc():
    from illusionkit.stimuli import SbcSpec

    with pytest.raises(CompatibilityError):
        NonIllusionSpec(base=SbcSpec(), transform="dot_insertion")


def test_full_rotation_is_identity():
    base = WhiteSpec()
    spec = NonIllusionSpec(base=base, transform="orientation_change",
                           transform_params=OrientationParams(angle_deg=360.0))
    img, _ = render_stimulus(spec)
    base_img, _ = render_stimulus(base)
    # nearest-neighbor sampling makes the full turn exact
    assert np.array_equal(img, base_img)


def test_rotation_keeps_intensities_in_discrete_set():
    base = HermannSpec()
    spec = NonIllusionSpec(base=base, transform="orientation_change",
                           transform_params=OrientationParams(angle_deg=33.0))
    img, _ = render_stimulus(spec)
    base_img, _ = render_stimulus(base)
    assert set(np.unique(img)) <= set(np.unique(base_img))
    assert differs_enough(img, base_img)


def test_zero_warp_renders_identity_but_fails_validation():
    base = WhiteSpec()
    spec = NonIllusionSpec(base=base, transform="nonlinear_warp",
                           transform_params=WarpParams(amplitude=0.0))
    img, mask = render_stimulus(spec)
    base_img, _ = render_stimulus(base)
    assert np.array_equal(img, base_img)
    assert mask.sum() == 0
    # dataset validation: a non-illusion must differ in >= 1% of pixels
    assert not differs_enough(img, base_img)


def test_warp_bends_streets():
    base = GridSpec()
    spec = NonIllusionSpec(base=base, transform="nonlinear_warp",
                           transform_params=WarpParams(amplitude=5.0, wavelength=48.0))
    img, mask = render_stimulus(spec)
    base_img, _ = render_stimulus(base)
    assert differs_enough(img, base_img)
    assert mask.sum() == 0


def test_all_non_illusion_masks_are_zero():
    specs = [
        NonIllusionSpec(base=HermannSpec(), transform="dot_insertion"),
        NonIllusionSpec(base=WhiteSpec(), transform="orientation_change",
                        transform_params=OrientationParams(30.0)),
        NonIllusionSpec(base=GridSpec(), transform="nonlinear_warp",
                        transform_params=WarpParams(4.0, 64.0)),
    ]
    for spec in specs:
        _, mask = render_stimulus(spec)
        assert not mask.any()
