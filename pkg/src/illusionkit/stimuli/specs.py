"""Parameter records for every stimulus family.

Each spec is an immutable dataclass validated on construction. A spec
serializes to a family-tagged JSON record and carries a stable id (a
hash of family + parameters), so rendered corpora are reproducible and
manifests round-trip.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields

from ..errors import DimensionError, GeometryError, ParameterError
from ..raster import DEFAULT_CANVAS

SPEC_SCHEMA_VERSION = 1

ILLUSION_FAMILIES = ("sbc", "white", "hermann", "grid", "grating")
TRANSITION_FAMILIES = ("howe", "shifted_white")
EDGE_FAMILIES = ("mach_band", "cornsweet")


def _check_intensity(name: str, value) -> None:
    if not isinstance(value, int) or not 0 <= value <= 255:
        raise ParameterError(f"{name} must be an integer in [0, 255], got {value!r}")


def _check_canvas(canvas) -> tuple[int, int]:
    width, height = canvas
    if width < 8 or height < 8:
        raise DimensionError(f"canvas too small: {canvas}")
    return (int(width), int(height))


@dataclass(frozen=True)
class SbcSpec:
    """Simultaneous brightness contrast: equal patches on dark/bright halves.

    ``bright_side`` selects which half-canvas carries the bright
    background; the default matches the usual presentation (bright on
    the right, so the right patch is the one that looks darker).
    """

    patch_intensity: int = 150
    dark_bg: int = 0
    bright_bg: int = 255
    patch_aspect: float = 0.4   # patch height / patch width
    patch_width: int = 64
    bright_side: str = "right"
    canvas: tuple[int, int] = DEFAULT_CANVAS

    family = "sbc"

    def __post_init__(self):
        object.__setattr__(self, "canvas", _check_canvas(self.canvas))
        for name in ("patch_intensity", "dark_bg", "bright_bg"):
            _check_intensity(name, getattr(self, name))
        if not self.dark_bg < self.patch_intensity < self.bright_bg:
            raise ParameterError(
                "need dark_bg < patch_intensity < bright_bg, got "
                f"{self.dark_bg} / {self.patch_intensity} / {self.bright_bg}"
            )
        if self.patch_aspect <= 0:
            raise ParameterError(f"patch_aspect must be > 0, got {self.patch_aspect}")
        if self.bright_side not in ("left", "right"):
            raise ParameterError(f"bright_side must be 'left' or 'right', got {self.bright_side!r}")
        width, height = self.canvas
        if self.patch_width < 1 or self.patch_width > width // 2:
            raise DimensionError(
                f"patch_width {self.patch_width} does not fit half-canvas {width // 2}"
            )
        if self.patch_height < 1 or self.patch_height > height:
            raise DimensionError(
                f"patch height {self.patch_height} does not fit canvas height {height}"
            )

    @property
    def patch_height(self) -> int:
        return int(round(self.patch_aspect * self.patch_width))


@dataclass(frozen=True)
class WhiteSpec:
    """White illusion: gray patches embedded in a horizontal square-wave.

    ``carrier_convention`` picks which patch set the mask marks:
    ``"standard"`` marks the patches whose carrying stripe is dark (the
    set that appears darker in the usual presentation); ``"inverted"``
    marks the complement.
    """

    stripe_period: int = 32
    stripe_dark: int = 0
    stripe_bright: int = 255
    patch_intensity: int = 150
    patch_length: int = 64
    patch_count_per_side: int = 1
    carrier_convention: str = "standard"
    canvas: tuple[int, int] = DEFAULT_CANVAS

    family = "white"

    def __post_init__(self):
        object.__setattr__(self, "canvas", _check_canvas(self.canvas))
        for name in ("stripe_dark", "stripe_bright", "patch_intensity"):
            _check_intensity(name, getattr(self, name))
        if not self.stripe_dark < self.patch_intensity < self.stripe_bright:
            raise ParameterError("need stripe_dark < patch_intensity < stripe_bright")
        if self.stripe_period < 2:
            raise ParameterError(f"stripe_period must be >= 2, got {self.stripe_period}")
        if self.carrier_convention not in ("standard", "inverted"):
            raise ParameterError(f"unknown carrier_convention {self.carrier_convention!r}")
        width, height = self.canvas
        if self.patch_length < 1 or self.patch_length > width // 2:
            raise DimensionError(
                f"patch_length {self.patch_length} exceeds half-canvas width {width // 2}"
            )
        if self.patch_count_per_side < 1:
            raise ParameterError("patch_count_per_side must be >= 1")
        # patches stack on every other stripe; the farthest must stay on canvas
        reach = (self.patch_count_per_side // 2 + 1) * self.stripe_period
        if reach > height // 2:
            raise DimensionError(
                f"{self.patch_count_per_side} patches at period {self.stripe_period} "
                f"do not fit canvas height {height}"
            )


@dataclass(frozen=True)
class HermannSpec:
    """Hermann grid: dark squares on light streets, blobs at crossings."""

    square_size: int = 48
    street_width: int = 12
    square_intensity: int = 0
    street_intensity: int = 255
    blob_radius: int = 5
    canvas: tuple[int, int] = DEFAULT_CANVAS

    family = "hermann"

    def __post_init__(self):
        object.__setattr__(self, "canvas", _check_canvas(self.canvas))
        _check_intensity("square_intensity", self.square_intensity)
        _check_intensity("street_intensity", self.street_intensity)
        if self.street_width >= self.square_size:
            raise GeometryError(
                f"street_width {self.street_width} must be < square_size {self.square_size}"
            )
        if self.street_width < 1:
            raise ParameterError("street_width must be >= 1")
        if self.square_intensity == self.street_intensity:
            raise ParameterError("square and street intensities must differ")
        if self.blob_radius < 1:
            raise ParameterError("blob_radius must be >= 1")
        if min(self.grid_shape) < 2:
            raise GeometryError(
                f"grid of {self.grid_shape} squares has no interior intersections"
            )

    @property
    def grid_shape(self) -> tuple[int, int]:
        """(columns, rows) of squares that fit the canvas."""
        width, height = self.canvas
        pitch = self.square_size + self.street_width
        nx = (width + self.street_width) // pitch
        ny = (height + self.street_width) // pitch
        return (nx, ny)


@dataclass(frozen=True)
class GridSpec:
    """Grid illusion: lattice with gray patch rows in the top and bottom
    street rows; ``variant`` selects which row the mask marks."""

    variant: str = "upper"
    cell_size: int = 40
    line_width: int = 8
    patch_intensity: int = 150
    bg_intensity: int = 0
    line_intensity: int = 255
    canvas: tuple[int, int] = DEFAULT_CANVAS

    family = "grid"

    def __post_init__(self):
        object.__setattr__(self, "canvas", _check_canvas(self.canvas))
        for name in ("patch_intensity", "bg_intensity", "line_intensity"):
            _check_intensity(name, getattr(self, name))
        if self.variant not in ("upper", "lower"):
            raise ParameterError(f"variant must be 'upper' or 'lower', got {self.variant!r}")
        if self.line_width >= self.cell_size:
            raise GeometryError(
                f"line_width {self.line_width} must be < cell_size {self.cell_size}"
            )
        if self.line_width < 1:
            raise ParameterError("line_width must be >= 1")
        if self.patch_intensity == self.line_intensity:
            raise ParameterError("patch and line intensities must differ")
        nx, ny = self.grid_shape
        if nx < 2 or ny < 3:
            raise GeometryError(
                f"grid of {self.grid_shape} cells has no distinct top/bottom street rows"
            )

    @property
    def grid_shape(self) -> tuple[int, int]:
        width, height = self.canvas
        pitch = self.cell_size + self.line_width
        nx = (width + self.line_width) // pitch
        ny = (height + self.line_width) // pitch
        return (nx, ny)


@dataclass(frozen=True)
class GratingSpec:
    """Grating induction: uniform gray bar across a luminance grating.

    Spatial frequency is given in cycles per degree; the degrees spanned
    by one image default to 8 so sweeps reproduce without monitor
    metadata. The realized integer cycle count must satisfy Nyquist.
    """

    cycles_per_degree: float = 8.0
    degrees_per_image: float = 8.0
    waveform: str = "square"
    test_bar_intensity: int = 128
    test_bar_height: int = 32
    carrier_mean: int = 128
    carrier_amplitude: int = 127
    canvas: tuple[int, int] = DEFAULT_CANVAS

    family = "grating"

    def __post_init__(self):
        object.__setattr__(self, "canvas", _check_canvas(self.canvas))
        _check_intensity("test_bar_intensity", self.test_bar_intensity)
        if not 4.0 <= self.cycles_per_degree <= 50.0:
            raise ParameterError(
                f"cycles_per_degree must be in [4, 50], got {self.cycles_per_degree}"
            )
        if self.degrees_per_image <= 0:
            raise ParameterError("degrees_per_image must be > 0")
        if self.waveform not in ("square", "sine"):
            raise ParameterError(f"waveform must be 'square' or 'sine', got {self.waveform!r}")
        width, height = self.canvas
        n = self.cycles_per_image
        if n < 1 or n > width // 2:
            raise ParameterError(
                f"{n} cycles per image violates [1, width/2 = {width // 2}]"
            )
        if self.test_bar_height < 1 or self.test_bar_height >= height:
            raise ParameterError(
                f"test_bar_height must be in [1, {height - 1}], got {self.test_bar_height}"
            )
        if self.carrier_amplitude < 1:
            raise ParameterError("carrier_amplitude must be >= 1")
        if not (0 <= self.carrier_mean - self.carrier_amplitude
                and self.carrier_mean + self.carrier_amplitude <= 255):
            raise ParameterError(
                f"carrier {self.carrier_mean}±{self.carrier_amplitude} leaves [0, 255]"
            )

    @property
    def cycles_per_image(self) -> int:
        return int(round(self.cycles_per_degree * self.degrees_per_image))


@dataclass(frozen=True)
class HoweSpec:
    """White-to-SBC transition: vertical bands of the carrying stripe's
    color widen around each patch until the halves become uniform."""

    base: WhiteSpec = field(default_factory=WhiteSpec)
    crossing_line_width: int = 0
    transition_index: int = 0

    family = "howe"

    def __post_init__(self):
        if not isinstance(self.base, WhiteSpec):
            raise ParameterError("HoweSpec.base must be a WhiteSpec")
        if self.base.stripe_period % 2:
            raise ParameterError("howe transition requires an even stripe_period")
        width, _ = self.base.canvas
        if not 0 <= self.crossing_line_width <= width // 2:
            raise DimensionError(
                f"crossing_line_width must be in [0, {width // 2}], "
                f"got {self.crossing_line_width}"
            )

    @property
    def max_crossing_width(self) -> int:
        return self.base.canvas[0] // 2


@dataclass(frozen=True)
class ShiftedWhiteSpec:
    """Shifted White: rows of alternating segments, adjacent rows offset
    by half the segment period. At patch_aspect 1 the lattice is a
    checkerboard and the mask convention flips to the contrast reading.
    """

    base: WhiteSpec = field(default_factory=WhiteSpec)
    patch_aspect: float = 2.0   # segment length / stripe thickness
    phase_shift: int | None = None  # pixels; default = half the segment period

    family = "shifted_white"

    def __post_init__(self):
        if not isinstance(self.base, WhiteSpec):
            raise ParameterError("ShiftedWhiteSpec.base must be a WhiteSpec")
        if self.patch_aspect <= 0:
            raise ParameterError(f"patch_aspect must be > 0, got {self.patch_aspect}")
        if self.base.stripe_period % 2:
            raise ParameterError("shifted white requires an even stripe_period")
        if self.segment_length < 1:
            raise ParameterError("patch_aspect too small: segment shorter than 1 px")
        if self.phase_shift is not None and self.phase_shift < 0:
            raise ParameterError("phase_shift must be >= 0")

    @property
    def stripe_thickness(self) -> int:
        return self.base.stripe_period // 2

    @property
    def segment_length(self) -> int:
        return int(round(self.patch_aspect * self.stripe_thickness))

    @property
    def effective_shift(self) -> int:
        return self.segment_length if self.phase_shift is None else self.phase_shift


@dataclass(frozen=True)
class MachBandSpec:
    """Plateau/ramp/plateau profile; illusory bands appear at the knees."""

    low: int = 50
    high: int = 200
    ramp_width: int = 96
    band_width: int = 3
    canvas: tuple[int, int] = DEFAULT_CANVAS

    family = "mach_band"

    def __post_init__(self):
        object.__setattr__(self, "canvas", _check_canvas(self.canvas))
        _check_intensity("low", self.low)
        _check_intensity("high", self.high)
        if self.low >= self.high:
            raise ParameterError(f"need low < high, got {self.low} >= {self.high}")
        if self.ramp_width < 1:
            raise ParameterError("ramp_width must be >= 1")
        if self.band_width < 2:
            raise ParameterError("band_width must be >= 2 to cover a knee")
        width, _ = self.canvas
        if self.ramp_start < self.band_width or self.ramp_end > width - self.band_width:
            raise GeometryError(
                f"ramp of width {self.ramp_width} leaves no plateaus on canvas {width}"
            )

    @property
    def ramp_start(self) -> int:
        return (self.canvas[0] - self.ramp_width) // 2

    @property
    def ramp_end(self) -> int:
        return self.ramp_start + self.ramp_width


@dataclass(frozen=True)
class CornsweetSpec:
    """Opposing ramps at a central edge between equal plateaus."""

    plateau: int = 128
    edge_amplitude: int = 60
    ramp_width: int = 48
    canvas: tuple[int, int] = DEFAULT_CANVAS

    family = "cornsweet"

    def __post_init__(self):
        object.__setattr__(self, "canvas", _check_canvas(self.canvas))
        _check_intensity("plateau", self.plateau)
        if self.edge_amplitude < 1:
            raise ParameterError("edge_amplitude must be >= 1")
        if self.plateau + self.edge_amplitude > 255 or self.plateau - self.edge_amplitude < 0:
            raise ParameterError(
                f"plateau {self.plateau}±{self.edge_amplitude} leaves [0, 255]"
            )
        if self.ramp_width < 1:
            raise ParameterError("ramp_width must be >= 1")
        width, _ = self.canvas
        if 2 * self.ramp_width >= width:
            raise GeometryError(
                f"ramps of width {self.ramp_width} span the whole canvas: no plateaus"
            )


@dataclass(frozen=True)
class DotInsertionParams:
    dot_radius: int = 6
    dot_intensity: int | None = None  # default: complement of street intensity

    def __post_init__(self):
        if self.dot_radius < 1:
            raise ParameterError("dot_radius must be >= 1")
        if self.dot_intensity is not None:
            _check_intensity("dot_intensity", self.dot_intensity)


@dataclass(frozen=True)
class OrientationParams:
    angle_deg: float = 30.0

    def __post_init__(self):
        if not -360.0 <= self.angle_deg <= 360.0:
            raise ParameterError("angle_deg must be within ±360")


@dataclass(frozen=True)
class WarpParams:
    amplitude: float = 4.0
    wavelength: float = 64.0

    def __post_init__(self):
        if self.amplitude < 0:
            raise ParameterError("amplitude must be >= 0")
        if self.wavelength < 2:
            raise ParameterError("wavelength must be >= 2")


_TRANSFORM_PARAMS = {
    "dot_insertion": DotInsertionParams,
    "orientation_change": OrientationParams,
    "nonlinear_warp": WarpParams,
}

# which base families each illusion-destroying transform applies to
TRANSFORM_COMPATIBILITY = {
    "dot_insertion": ("hermann", "grid"),
    "orientation_change": ("sbc", "white", "hermann", "grid", "grating"),
    "nonlinear_warp": ("hermann", "grid", "white", "grating"),
}


@dataclass(frozen=True)
class NonIllusionSpec:
    """A base stimulus with an illusion-destroying transform applied."""

    base: object = field(default_factory=HermannSpec)
    transform: str = "dot_insertion"
    transform_params: object = None

    family = "non_illusion"

    def __post_init__(self):
        from ..errors import CompatibilityError  # local to avoid cycle noise

        if self.transform not in _TRANSFORM_PARAMS:
            raise ParameterError(f"unknown transform {self.transform!r}")
        allowed = TRANSFORM_COMPATIBILITY[self.transform]
        if getattr(self.base, "family", None) not in allowed:
            raise CompatibilityError(
                f"transform {self.transform!r} does not apply to family "
                f"{getattr(self.base, 'family', None)!r} (allowed: {allowed})"
            )
        if self.transform_params is None:
            object.__setattr__(self, "transform_params", _TRANSFORM_PARAMS[self.transform]())
        elif not isinstance(self.transform_params, _TRANSFORM_PARAMS[self.transform]):
            raise ParameterError(
                f"transform_params must be {_TRANSFORM_PARAMS[self.transform].__name__}"
            )


SPEC_CLASSES = {
    "sbc": SbcSpec,
    "white": WhiteSpec,
    "hermann": HermannSpec,
    "grid": GridSpec,
    "grating": GratingSpec,
    "howe": HoweSpec,
    "shifted_white": ShiftedWhiteSpec,
    "mach_band": MachBandSpec,
    "cornsweet": CornsweetSpec,
    "non_illusion": NonIllusionSpec,
}

_NESTED_FIELDS = {"base"}


def spec_to_dict(spec) -> dict:
    """Family-tagged plain-dict form (JSON-ready)."""
    params = {}
    for f in fields(spec):
        value = getattr(spec, f.name)
        if f.name in _NESTED_FIELDS:
            params[f.name] = spec_to_dict(value)
        elif hasattr(value, "__dataclass_fields__"):
            params[f.name] = asdict(value)
        elif isinstance(value, tuple):
            params[f.name] = list(value)
        else:
            params[f.name] = value
    return {"family": spec.family, "version": SPEC_SCHEMA_VERSION, "params": params}


def spec_from_dict(record: dict):
    """Inverse of :func:`spec_to_dict`."""
    family = record.get("family")
    if family not in SPEC_CLASSES:
        raise ParameterError(f"unknown stimulus family {family!r}")
    cls = SPEC_CLASSES[family]
    params = dict(record.get("params", {}))
    if "base" in params and isinstance(params["base"], dict):
        params["base"] = spec_from_dict(params["base"])
    if "canvas" in params:
        params["canvas"] = tuple(params["canvas"])
    if family == "non_illusion" and isinstance(params.get("transform_params"), dict):
        params["transform_params"] = _TRANSFORM_PARAMS[params["transform"]](
            **params["transform_params"]
        )
    return cls(**params)


def spec_to_json(spec) -> str:
    return json.dumps(spec_to_dict(spec), sort_keys=True, separators=(",", ":"))


def spec_from_json(text: str):
    return spec_from_dict(json.loads(text))


def spec_id(spec) -> str:
    """Stable 16-hex-digit id derived from family + parameters."""
    return hashlib.sha1(spec_to_json(spec).encode("ascii")).hexdigest()[:16]
