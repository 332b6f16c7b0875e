"""Renderers for the five core illusion families.

Every renderer is a pure function from a validated spec to an
``(image, mask)`` pair: the 8-bit stimulus and the binary mask of the
region that appears darker than its physically identical counterpart
(for Hermann grids, the illusory blob locations). Identical specs give
byte-identical outputs.
"""

import numpy as np

from ..raster import new_canvas
from .specs import GratingSpec, GridSpec, HermannSpec, SbcSpec, WhiteSpec


def centered_rect(cx: int, cy: int, w: int, h: int) -> tuple[int, int, int, int]:
    """(x0, x1, y0, y1) of a w×h rectangle centered at (cx, cy).

    Shared by every renderer that places patches, so stimuli built from
    different families (e.g. transition endpoints) align pixel-exactly.
    """
    x0 = cx - w // 2
    y0 = cy - h // 2
    return (x0, x0 + w, y0, y0 + h)


def _fill(img, rect, value):
    x0, x1, y0, y1 = rect
    img[y0:y1, x0:x1] = value


def _rect_mask(shape, rect):
    m = np.zeros(shape, dtype=bool)
    x0, x1, y0, y1 = rect
    m[y0:y1, x0:x1] = True
    return m


# ---------------------------------------------------------------------------
# simultaneous brightness contrast
# ---------------------------------------------------------------------------

def sbc_patch_rects(spec: SbcSpec):
    """Rectangles of the dark-half and bright-half patches."""
    width, height = spec.canvas
    left_cx, right_cx = width // 4, (3 * width) // 4
    dark_cx, bright_cx = (left_cx, right_cx) if spec.bright_side == "right" else (right_cx, left_cx)
    w, h = spec.patch_width, spec.patch_height
    return (
        centered_rect(dark_cx, height // 2, w, h),
        centered_rect(bright_cx, height // 2, w, h),
    )


def render_sbc(spec: SbcSpec):
    width, height = spec.canvas
    img = new_canvas(spec.canvas, spec.dark_bg)
    bright_cols = slice(width // 2, width) if spec.bright_side == "right" else slice(0, width // 2)
    img[:, bright_cols] = spec.bright_bg
    dark_rect, bright_rect = sbc_patch_rects(spec)
    _fill(img, dark_rect, spec.patch_intensity)
    _fill(img, bright_rect, spec.patch_intensity)
    # the patch on the bright background is the one perceived darker
    mask = _rect_mask(img.shape, bright_rect)
    return img, mask


# ---------------------------------------------------------------------------
# White illusion
# ---------------------------------------------------------------------------

def _white_layout(spec: WhiteSpec):
    """Stripe phase and patch rectangles for a White stimulus.

    The stripe containing the canvas midline is dark. Patches sit on the
    right column (dark stripes) and left column (bright stripes), filling
    their stripe's thickness, stacked outward from the center.
    """
    width, height = spec.canvas
    period = spec.stripe_period
    dark_h = period - period // 2
    bright_h = period // 2
    phase0 = height // 2 - dark_h // 2  # top of the central dark stripe

    def stacked(first_top: int, thickness: int, cx: int):
        rects = []
        offsets = [0]
        for k in range(1, spec.patch_count_per_side):
            offsets.append((k + 1) // 2 * (1 if k % 2 else -1))
        for j in offsets:
            top = first_top + j * period
            cy = top + thickness // 2
            rects.append(centered_rect(cx, cy, spec.patch_length, thickness))
        return rects

    dark_rects = stacked(phase0, dark_h, (3 * width) // 4)
    bright_rects = stacked(phase0 + dark_h, bright_h, width // 4)
    return phase0, dark_h, dark_rects, bright_rects


def render_white(spec: WhiteSpec):
    width, height = spec.canvas
    period = spec.stripe_period
    phase0, dark_h, dark_rects, bright_rects = _white_layout(spec)

    rows = (np.arange(height) - phase0) % period
    img = np.where(rows < dark_h, spec.stripe_dark, spec.stripe_bright)
    img = np.repeat(img[:, None], width, axis=1).astype(np.uint8)

    for rect in dark_rects + bright_rects:
        _fill(img, rect, spec.patch_intensity)

    masked = dark_rects if spec.carrier_convention == "standard" else bright_rects
    mask = np.zeros(img.shape, dtype=bool)
    for rect in masked:
        mask |= _rect_mask(img.shape, rect)
    return img, mask


# ---------------------------------------------------------------------------
# Hermann grid
# ---------------------------------------------------------------------------

def _lattice_geometry(canvas, block: int, gap: int):
    """Centered lattice of blocks separated by gaps; returns margins and counts."""
    width, height = canvas
    pitch = block + gap
    nx = (width + gap) // pitch
    ny = (height + gap) // pitch
    mx = (width - (nx * block + (nx - 1) * gap)) // 2
    my = (height - (ny * block + (ny - 1) * gap)) // 2
    return nx, ny, mx, my


def hermann_intersections(spec: HermannSpec):
    """Centers (cx, cy) of the interior street crossings."""
    nx, ny, mx, my = _lattice_geometry(spec.canvas, spec.square_size, spec.street_width)
    pitch = spec.square_size + spec.street_width
    half = (spec.street_width - 1) / 2.0
    return [
        (mx + spec.square_size + i * pitch + half, my + spec.square_size + j * pitch + half)
        for j in range(ny - 1)
        for i in range(nx - 1)
    ]


def _street_region(canvas, block, gap):
    width, height = canvas
    nx, ny, mx, my = _lattice_geometry(canvas, block, gap)
    pitch = block + gap
    streets = np.zeros((height, width), dtype=bool)
    for i in range(nx - 1):
        x0 = mx + block + i * pitch
        streets[:, x0:x0 + gap] = True
    for j in range(ny - 1):
        y0 = my + block + j * pitch
        streets[y0:y0 + gap, :] = True
    return streets


def render_hermann(spec: HermannSpec):
    width, height = spec.canvas
    img = new_canvas(spec.canvas, spec.square_intensity)
    streets = _street_region(spec.canvas, spec.square_size, spec.street_width)
    img[streets] = spec.street_intensity

    yy, xx = np.mgrid[0:height, 0:width]
    mask = np.zeros(img.shape, dtype=bool)
    r2 = spec.blob_radius ** 2
    for cx, cy in hermann_intersections(spec):
        mask |= (xx - cx) ** 2 + (yy - cy) ** 2 <= r2
    mask &= streets  # blobs are annotations on street pixels only
    return img, mask


# ---------------------------------------------------------------------------
# grid illusion (upper / lower)
# ---------------------------------------------------------------------------

def grid_patch_rows(spec: GridSpec):
    """Patch rectangles in the top and bottom street rows."""
    nx, ny, mx, my = _lattice_geometry(spec.canvas, spec.cell_size, spec.line_width)
    pitch = spec.cell_size + spec.line_width
    top_y = my + spec.cell_size
    bottom_y = my + spec.cell_size + (ny - 2) * pitch

    def row(y0):
        return [
            (mx + c * pitch, mx + c * pitch + spec.cell_size, y0, y0 + spec.line_width)
            for c in range(nx)
        ]

    return row(top_y), row(bottom_y)


def render_grid(spec: GridSpec):
    img = new_canvas(spec.canvas, spec.bg_intensity)
    lines = _street_region(spec.canvas, spec.cell_size, spec.line_width)
    img[lines] = spec.line_intensity

    top_rects, bottom_rects = grid_patch_rows(spec)
    for rect in top_rects + bottom_rects:
        _fill(img, rect, spec.patch_intensity)

    masked = top_rects if spec.variant == "upper" else bottom_rects
    mask = np.zeros(img.shape, dtype=bool)
    for rect in masked:
        mask |= _rect_mask(img.shape, rect)
    return img, mask


# ---------------------------------------------------------------------------
# grating induction
# ---------------------------------------------------------------------------

def grating_bright_columns(spec: GratingSpec) -> np.ndarray:
    """Boolean column vector: True where the carrier is in its bright phase."""
    width, _ = spec.canvas
    n = spec.cycles_per_image
    x = np.arange(width)
    if spec.waveform == "square":
        return ((x * 2 * n) // width) % 2 == 0
    return np.sin(2 * np.pi * n * (x + 0.5) / width) > 0


def render_grating(spec: GratingSpec):
    width, height = spec.canvas
    n = spec.cycles_per_image
    x = np.arange(width)
    if spec.waveform == "square":
        bright = grating_bright_columns(spec)
        carrier = np.where(bright, spec.carrier_mean + spec.carrier_amplitude,
                           spec.carrier_mean - spec.carrier_amplitude)
    else:
        wave = np.sin(2 * np.pi * n * (x + 0.5) / width)
        carrier = np.rint(spec.carrier_mean + spec.carrier_amplitude * wave)
    img = np.repeat(carrier[None, :], height, axis=0).astype(np.uint8)

    bar_y0 = height // 2 - spec.test_bar_height // 2
    bar_y1 = bar_y0 + spec.test_bar_height
    img[bar_y0:bar_y1, :] = spec.test_bar_intensity

    # contrast induction: bar segments bordering the bright phase go dark
    mask = np.zeros(img.shape, dtype=bool)
    mask[bar_y0:bar_y1, grating_bright_columns(spec)] = True
    return img, mask
