"""Transition stimuli: White-to-SBC sweeps and shifted-White lattices.

Both families morph a White-style stimulus toward a contrast stimulus
and flip which patch the mask marks at a configured point of the sweep.
"""

import numpy as np

from ..errors import DimensionError
from .render import centered_rect, _fill, _rect_mask
from .specs import HoweSpec, SbcSpec, ShiftedWhiteSpec

# sweep point at which the mask convention flips, as a fraction of the
# stripe period (crossing width = stripe_period / 2)
HOWE_FLIP_FRACTION = 0.5
# patch aspect at and below which a shifted-White reads as a checkerboard
CHECKERBOARD_ASPECT_THRESHOLD = 1.0


def howe_patch_rects(spec: HoweSpec):
    """(left, right) patch rectangles, both centered on the midline."""
    width, height = spec.base.canvas
    thickness = spec.base.stripe_period // 2
    left = centered_rect(width // 4, height // 2, spec.base.patch_length, thickness)
    right = centered_rect((3 * width) // 4, height // 2, spec.base.patch_length, thickness)
    return left, right


def howe_flip_width(spec: HoweSpec) -> int:
    return max(1, int(round(HOWE_FLIP_FRACTION * spec.base.stripe_period)))


def induced_sbc_spec(spec: HoweSpec) -> SbcSpec:
    """The SBC the sweep degenerates to at maximal crossing width."""
    base = spec.base
    thickness = base.stripe_period // 2
    return SbcSpec(
        patch_intensity=base.patch_intensity,
        dark_bg=base.stripe_dark,
        bright_bg=base.stripe_bright,
        patch_aspect=thickness / base.patch_length,
        patch_width=base.patch_length,
        bright_side="left",
        canvas=base.canvas,
    )


def render_howe(spec: HoweSpec):
    base = spec.base
    width, height = base.canvas
    period = base.stripe_period
    thickness = period // 2
    phase0 = height // 2 - thickness // 2

    # right half keeps the White phase (dark stripe on the midline); the
    # left half is shifted half a period so a bright stripe sits there
    rows = np.arange(height)
    right_dark = ((rows - phase0) % period) < thickness
    left_dark = ((rows - phase0 - thickness) % period) < thickness
    img = np.empty((height, width), dtype=np.uint8)
    img[:, : width // 2] = np.where(left_dark, base.stripe_dark, base.stripe_bright)[:, None]
    img[:, width // 2:] = np.where(right_dark, base.stripe_dark, base.stripe_bright)[:, None]

    # crossing bands of the coaxial color widen around each patch
    w = spec.crossing_line_width
    if w > 0:
        lx0, lx1, _, _ = centered_rect(width // 4, 0, w, 0)
        img[:, max(lx0, 0):min(lx1, width // 2)] = base.stripe_bright
        rx0, rx1, _, _ = centered_rect((3 * width) // 4, 0, w, 0)
        img[:, max(rx0, width // 2):min(rx1, width)] = base.stripe_dark

    left_rect, right_rect = howe_patch_rects(spec)
    _fill(img, left_rect, base.patch_intensity)
    _fill(img, right_rect, base.patch_intensity)

    if spec.crossing_line_width < howe_flip_width(spec):
        masked = right_rect   # White reading: patch on the dark stripe
    else:
        masked = left_rect    # SBC reading: patch on the bright background
    return img, _rect_mask(img.shape, masked)


def howe_sweep(base, n_steps: int):
    """Monotone sweep of specs from the White regime to the SBC endpoint."""
    if n_steps < 2:
        raise DimensionError("a sweep needs at least 2 steps")
    max_w = base.canvas[0] // 2
    widths = [int(round(i * max_w / (n_steps - 1))) for i in range(n_steps)]
    return [HoweSpec(base=base, crossing_line_width=w, transition_index=i)
            for i, w in enumerate(widths)]


# ---------------------------------------------------------------------------
# shifted White
# ---------------------------------------------------------------------------

def _cell_value(spec: ShiftedWhiteSpec, row: int, col: int) -> int:
    return spec.base.stripe_dark if col % 2 == 0 else spec.base.stripe_bright


def shifted_white_patch_rects(spec: ShiftedWhiteSpec):
    """(left, right) patch cells: a bright-parity cell near (W/4, H/2) and
    a dark-parity cell near (3W/4, H/2)."""
    width, height = spec.base.canvas
    t, seg, shift = spec.stripe_thickness, spec.segment_length, spec.effective_shift
    r0 = (height // 2) // t
    off = shift if r0 % 2 else 0

    def cell_rect(target_x: int, want_dark: bool):
        c = (target_x + off) // seg
        if (c % 2 == 0) != want_dark:
            c += 1
        x0 = c * seg - off
        if x0 + seg > width:
            c -= 2
            x0 = c * seg - off
        if x0 < 0 or x0 + seg > width:
            raise DimensionError("segment length too large for patch placement")
        return (x0, x0 + seg, r0 * t, r0 * t + t)

    left = cell_rect(width // 4, want_dark=False)
    right = cell_rect((3 * width) // 4, want_dark=True)
    return left, right


def render_shifted_white(spec: ShiftedWhiteSpec):
    width, height = spec.base.canvas
    t, seg, shift = spec.stripe_thickness, spec.segment_length, spec.effective_shift

    yy, xx = np.mgrid[0:height, 0:width]
    xs = xx + (yy // t % 2) * shift
    dark = (xs // seg) % 2 == 0
    img = np.where(dark, spec.base.stripe_dark, spec.base.stripe_bright).astype(np.uint8)

    left_rect, right_rect = shifted_white_patch_rects(spec)
    _fill(img, left_rect, spec.base.patch_intensity)
    _fill(img, right_rect, spec.base.patch_intensity)

    if spec.patch_aspect > CHECKERBOARD_ASPECT_THRESHOLD:
        masked = right_rect   # elongated regime: dark-parity patch darker
    else:
        masked = left_rect    # checkerboard regime: the percept inverts
    return img, _rect_mask(img.shape, masked)


def shifted_white_sweep(base, aspects):
    """Specs for a monotone aspect sweep toward the checkerboard limit."""
    return [ShiftedWhiteSpec(base=base, patch_aspect=float(a)) for a in aspects]
