"""Illusion-destroying transforms that produce non-illusion variants.

Each transform perturbs a rendered base stimulus just enough to abolish
the illusory percept; the returned mask is always all-zero. A transform
of zero strength still renders (the image equals its base) but dataset
validation rejects it: a non-illusion must differ from its base in at
least 1% of pixels.
"""

import numpy as np

from .render import hermann_intersections, _lattice_geometry
from .specs import GridSpec, HermannSpec, NonIllusionSpec

MIN_CHANGED_PIXEL_FRACTION = 0.01


def _intersections(base):
    if isinstance(base, HermannSpec):
        return hermann_intersections(base), 255 - base.street_intensity
    if isinstance(base, GridSpec):
        nx, ny, mx, my = _lattice_geometry(base.canvas, base.cell_size, base.line_width)
        pitch = base.cell_size + base.line_width
        half = (base.line_width - 1) / 2.0
        pts = [
            (mx + base.cell_size + i * pitch + half, my + base.cell_size + j * pitch + half)
            for j in range(ny - 1)
            for i in range(nx - 1)
        ]
        return pts, 255 - base.line_intensity
    raise AssertionError("unreachable: spec validation restricts base families")


def insert_dots(img: np.ndarray, base, params) -> np.ndarray:
    """Discs at every interior street crossing, in the street's complement."""
    out = img.copy()
    points, complement = _intersections(base)
    value = params.dot_intensity if params.dot_intensity is not None else complement
    yy, xx = np.mgrid[0:img.shape[0], 0:img.shape[1]]
    r2 = params.dot_radius ** 2
    for cx, cy in points:
        out[(xx - cx) ** 2 + (yy - cy) ** 2 <= r2] = value
    return out


def rotate_image(img: np.ndarray, angle_deg: float) -> np.ndarray:
    """Nearest-neighbor rotation about the center with background fill.

    Nearest sampling keeps intensities in the original discrete set, so
    equal-intensity checks stay exact on rotated stimuli.
    """
    h, w = img.shape
    fill = int(np.bincount(img.ravel(), minlength=256).argmax())
    theta = np.deg2rad(angle_deg)
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0

    yy, xx = np.mgrid[0:h, 0:w]
    dx, dy = xx - cx, yy - cy
    # inverse mapping: where each output pixel samples from
    sx = np.rint(cx + cos_t * dx + sin_t * dy).astype(np.int64)
    sy = np.rint(cy - sin_t * dx + cos_t * dy).astype(np.int64)
    inside = (sx >= 0) & (sx < w) & (sy >= 0) & (sy < h)
    out = np.full_like(img, fill)
    out[inside] = img[sy[inside], sx[inside]]
    return out


def warp_image(img: np.ndarray, amplitude: float, wavelength: float) -> np.ndarray:
    """Sinusoidal displacement of both axes (bends streets and stripes)."""
    h, w = img.shape
    yy, xx = np.mgrid[0:h, 0:w]
    sx = np.rint(xx + amplitude * np.sin(2 * np.pi * yy / wavelength)).astype(np.int64)
    sy = np.rint(yy + amplitude * np.sin(2 * np.pi * xx / wavelength)).astype(np.int64)
    np.clip(sx, 0, w - 1, out=sx)
    np.clip(sy, 0, h - 1, out=sy)
    return img[sy, sx]


def render_non_illusion(spec: NonIllusionSpec):
    from . import render_stimulus  # dispatcher lives in the package root

    base_img, _ = render_stimulus(spec.base)
    p = spec.transform_params
    if spec.transform == "dot_insertion":
        img = insert_dots(base_img, spec.base, p)
    elif spec.transform == "orientation_change":
        img = rotate_image(base_img, p.angle_deg)
    else:
        img = warp_image(base_img, p.amplitude, p.wavelength)
    return img, np.zeros(img.shape, dtype=bool)


def differs_enough(img: np.ndarray, base_img: np.ndarray) -> bool:
    """Dataset-validation rule for non-illusions (>= 1% pixels changed)."""
    return np.mean(img != base_img) >= MIN_CHANGED_PIXEL_FRACTION
