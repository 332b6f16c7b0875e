"""Stimulus specs and pure renderers for all illusion families."""

import numpy as np

from .specs import (
    CornsweetSpec,
    DotInsertionParams,
    GratingSpec,
    GridSpec,
    HermannSpec,
    HoweSpec,
    ILLUSION_FAMILIES,
    MachBandSpec,
    NonIllusionSpec,
    OrientationParams,
    SbcSpec,
    ShiftedWhiteSpec,
    SPEC_CLASSES,
    TRANSFORM_COMPATIBILITY,
    WarpParams,
    WhiteSpec,
    spec_from_dict,
    spec_from_json,
    spec_id,
    spec_to_dict,
    spec_to_json,
)
from .render import (
    centered_rect,
    grating_bright_columns,
    grid_patch_rows,
    hermann_intersections,
    render_grating,
    render_grid,
    render_hermann,
    render_sbc,
    render_white,
    sbc_patch_rects,
)
from .transitions import (
    CHECKERBOARD_ASPECT_THRESHOLD,
    howe_flip_width,
    howe_patch_rects,
    howe_sweep,
    induced_sbc_spec,
    render_howe,
    render_shifted_white,
    shifted_white_patch_rects,
    shifted_white_sweep,
)
from .edges import (
    cornsweet_plateaus,
    mach_band_columns,
    mach_profile,
    render_cornsweet,
    render_mach_band,
)
from .nonillusion import differs_enough, render_non_illusion

_RENDERERS = {
    "sbc": render_sbc,
    "white": render_white,
    "hermann": render_hermann,
    "grid": render_grid,
    "grating": render_grating,
    "howe": render_howe,
    "shifted_white": render_shifted_white,
    "mach_band": render_mach_band,
    "cornsweet": render_cornsweet,
    "non_illusion": render_non_illusion,
}


def render_stimulus(spec):
    """Render any spec to its (image, mask) pair."""
    return _RENDERERS[spec.family](spec)


def equal_intensity_regions(spec):
    """(target, counterpart) masks of the physically identical regions.

    Defined for the families whose illusion lives on two equal-intensity
    regions; raises KeyError for the others (Hermann blobs, grating bars
    and Mach bands have no counterpart region).
    """
    from .render import _rect_mask

    if spec.family in ("howe", "shifted_white"):
        width, height = spec.base.canvas
    else:
        width, height = spec.canvas
    shape = (height, width)

    if spec.family == "sbc":
        dark_rect, bright_rect = sbc_patch_rects(spec)
        return _rect_mask(shape, bright_rect), _rect_mask(shape, dark_rect)
    if spec.family == "white":
        from .render import _white_layout

        _, _, dark_rects, bright_rects = _white_layout(spec)
        target = np.zeros(shape, dtype=bool)
        other = np.zeros(shape, dtype=bool)
        for rect in dark_rects:
            target |= _rect_mask(shape, rect)
        for rect in bright_rects:
            other |= _rect_mask(shape, rect)
        if spec.carrier_convention == "inverted":
            target, other = other, target
        return target, other
    if spec.family == "grid":
        top, bottom = grid_patch_rows(spec)
        t = np.zeros(shape, dtype=bool)
        b = np.zeros(shape, dtype=bool)
        for rect in top:
            t |= _rect_mask(shape, rect)
        for rect in bottom:
            b |= _rect_mask(shape, rect)
        return (t, b) if spec.variant == "upper" else (b, t)
    if spec.family == "howe":
        left, right = howe_patch_rects(spec)
        if spec.crossing_line_width < howe_flip_width(spec):
            return _rect_mask(shape, right), _rect_mask(shape, left)
        return _rect_mask(shape, left), _rect_mask(shape, right)
    if spec.family == "shifted_white":
        left, right = shifted_white_patch_rects(spec)
        if spec.patch_aspect > CHECKERBOARD_ASPECT_THRESHOLD:
            return _rect_mask(shape, right), _rect_mask(shape, left)
        return _rect_mask(shape, left), _rect_mask(shape, right)
    if spec.family == "cornsweet":
        (l0, l1), (r0, r1) = cornsweet_plateaus(spec)
        left = np.zeros(shape, dtype=bool)
        right = np.zeros(shape, dtype=bool)
        left[:, l0:l1] = True
        right[:, r0:r1] = True
        return right, left
    raise KeyError(f"no equal-intensity counterpart for family {spec.family!r}")


def target_intensity(spec) -> int:
    """Physical intensity of the masked target region."""
    if spec.family in ("howe", "shifted_white"):
        return spec.base.patch_intensity
    if spec.family == "cornsweet":
        return spec.plateau
    if spec.family == "grating":
        return spec.test_bar_intensity
    if hasattr(spec, "patch_intensity"):
        return spec.patch_intensity
    raise KeyError(f"family {spec.family!r} has no single target intensity")


def check_equal_intensity(spec, img=None) -> bool:
    """Exhaustive pixel check: target and counterpart regions both equal
    the spec's target intensity everywhere."""
    if img is None:
        img, _ = render_stimulus(spec)
    target, other = equal_intensity_regions(spec)
    value = target_intensity(spec)
    return bool(np.all(img[target] == value) and np.all(img[other] == value))
