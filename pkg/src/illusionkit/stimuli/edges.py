"""Edge-profile stimuli: Mach bands and the Cornsweet edge."""

import numpy as np

from .specs import CornsweetSpec, MachBandSpec


def mach_profile(spec: MachBandSpec) -> np.ndarray:
    """1-D luminance profile: low plateau, linear ramp, high plateau."""
    width, _ = spec.canvas
    a, b = spec.ramp_start, spec.ramp_end
    profile = np.full(width, spec.low, dtype=np.float64)
    x = np.arange(a, b)
    profile[a:b] = spec.low + (spec.high - spec.low) * (x - a + 1) / (spec.ramp_width + 1)
    profile[b:] = spec.high
    return np.rint(profile)


def mach_band_columns(spec: MachBandSpec):
    """Column ranges of the two masked knee bands (dark knee first)."""
    bw = spec.band_width
    lo = spec.ramp_start - (bw + 1) // 2
    hi = spec.ramp_end - (bw + 1) // 2
    return (lo, lo + bw), (hi, hi + bw)


def render_mach_band(spec: MachBandSpec):
    _, height = spec.canvas
    profile = mach_profile(spec).astype(np.uint8)
    img = np.repeat(profile[None, :], height, axis=0)
    mask = np.zeros(img.shape, dtype=bool)
    # thin bands at the two ramp knees; the low-side knee carries the
    # dark band, the high-side knee the bright one
    for x0, x1 in mach_band_columns(spec):
        mask[:, x0:x1] = True
    return img, mask


def cornsweet_plateaus(spec: CornsweetSpec):
    """Column ranges of the (left, right) plateaus."""
    width, _ = spec.canvas
    mid, rw = width // 2, spec.ramp_width
    return (0, mid - rw), (mid + rw, width)


def render_cornsweet(spec: CornsweetSpec):
    width, height = spec.canvas
    mid, rw, amp = width // 2, spec.ramp_width, spec.edge_amplitude
    profile = np.full(width, spec.plateau, dtype=np.float64)
    x_left = np.arange(mid - rw, mid)
    profile[mid - rw:mid] = spec.plateau + amp * (x_left - (mid - rw) + 1) / rw
    x_right = np.arange(mid, mid + rw)
    profile[mid:mid + rw] = spec.plateau - amp * (1 - (x_right - mid) / rw)
    img = np.repeat(np.rint(profile).astype(np.uint8)[None, :], height, axis=0)

    # the plateau on the dark-lip side of the edge appears darker
    mask = np.zeros(img.shape, dtype=bool)
    (_, _), (r0, r1) = cornsweet_plateaus(spec)
    mask[:, r0:r1] = True
    return img, mask
