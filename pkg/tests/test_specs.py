"""Spec validation, serialization round-trips, and stable ids."""

import pytest

from illusionkit.errors import (
    CompatibilityError,
    DimensionError,
    GeometryError,
    ParameterError,
)
from illusionkit.stimuli import (
    CornsweetSpec,
    GratingSpec,
    GridSpec,
    HermannSpec,
    HoweSpec,
    MachBandSpec,
    NonIllusionSpec,
    SbcSpec,
    ShiftedWhiteSpec,
    WarpParams,
    WhiteSpec,
    spec_from_json,
    spec_id,
    spec_to_json,
)

ALL_DEFAULTS = [
    SbcSpec(),
    WhiteSpec(),
    HermannSpec(),
    GridSpec(),
    GratingSpec(),
    HoweSpec(),
    ShiftedWhiteSpec(),
    MachBandSpec(),
    CornsweetSpec(),
    NonIllusionSpec(),
]


@pytest.mark.parametrize("spec", ALL_DEFAULTS, ids=lambda s: s.family)
def test_json_round_trip(spec):
    assert spec_from_json(spec_to_json(spec)) == spec


@pytest.mark.parametrize("spec", ALL_DEFAULTS, ids=lambda s: s.family)
def test_id_is_stable_and_16_hex(spec):
    sid = spec_id(spec)
    assert len(sid) == 16
    int(sid, 16)
    assert sid == spec_id(spec_from_json(spec_to_json(spec)))


def test_ids_distinguish_parameters():
    assert spec_id(SbcSpec(patch_width=64)) != spec_id(SbcSpec(patch_width=65))
    assert spec_id(SbcSpec()) != spec_id(WhiteSpec())


def test_sbc_degenerate_contrast_rejected():
    with pytest.raises(ParameterError):
        SbcSpec(dark_bg=150, bright_bg=150, patch_intensity=150)


def test_sbc_patch_must_fit_half_canvas():
    with pytest.raises(DimensionError):
        SbcSpec(patch_width=129)
    with pytest.raises(DimensionError):
        SbcSpec(patch_aspect=5.0, patch_width=64)  # height 320 > 256


def test_white_period_and_contrast():
    with pytest.raises(ParameterError):
        WhiteSpec(stripe_period=1)
    with pytest.raises(ParameterError):
        WhiteSpec(stripe_dark=200, patch_intensity=150)
    with pytest.raises(DimensionError):
        WhiteSpec(patch_length=200)
    WhiteSpec(stripe_period=2)  # minimal legal period


def test_hermann_geometry_errors():
    with pytest.raises(GeometryError):
        HermannSpec(street_width=48, square_size=48)
    # a single square has no interior intersections
    with pytest.raises(GeometryError):
        HermannSpec(square_size=200, street_width=20)


def test_grid_needs_distinct_street_rows():
    with pytest.raises(GeometryError):
        GridSpec(cell_size=100, line_width=10)


def test_grating_frequency_bounds():
    with pytest.raises(ParameterError):
        GratingSpec(cycles_per_degree=3.9)
    with pytest.raises(ParameterError):
        GratingSpec(cycles_per_degree=50.0, degrees_per_image=8.0)  # Nyquist
    with pytest.raises(ParameterError):
        GratingSpec(test_bar_height=0)
    assert GratingSpec(cycles_per_degree=16.0, degrees_per_image=8.0).cycles_per_image == 128


def test_shifted_white_aspect_positive():
    with pytest.raises(ParameterError):
        ShiftedWhiteSpec(patch_aspect=0.0)
    with pytest.raises(ParameterError):
        ShiftedWhiteSpec(patch_aspect=-1.0)


def test_mach_band_degenerate_ramp_rejected():
    with pytest.raises(ParameterError):
        MachBandSpec(ramp_width=0)
    with pytest.raises(GeometryError):
        MachBandSpec(ramp_width=256)  # ramp spans the full width


def test_cornsweet_range_and_plateaus():
    with pytest.raises(ParameterError):
        CornsweetSpec(plateau=230, edge_amplitude=60)
    with pytest.raises(GeometryError):
        CornsweetSpec(ramp_width=128)


def test_non_illusion_compatibility():
    with pytest.raises(CompatibilityError):
        NonIllusionSpec(base=SbcSpec(), transform="dot_insertion")
    # warp applies to stripe/street families only
    with pytest.raises(CompatibilityError):
        NonIllusionSpec(base=SbcSpec(), transform="nonlinear_warp",
                        transform_params=WarpParams())
