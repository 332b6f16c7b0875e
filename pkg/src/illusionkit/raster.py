"""8-bit grayscale rasters and binary masks.

Images are (H, W) uint8 arrays, masks (H, W) bool arrays of the same
shape. On disk both are single-channel PNG; masks use {0, 255}.
"""

import base64
import io

import numpy as np
from PIL import Image

from .errors import DimensionError

DEFAULT_CANVAS = (256, 256)  # (width, height)

__all__ = [
    "DEFAULT_CANVAS",
    "new_canvas",
    "check_same_shape",
    "save_png",
    "load_image",
    "load_mask",
    "load_response_map",
    "encode_png_bytes",
    "encode_png_base64",
]


def new_canvas(canvas, fill=0):
    """Allocate a (H, W) uint8 image for a (width, height) canvas."""
    width, height = canvas
    if width < 1 or height < 1:
        raise DimensionError(f"canvas must be positive, got {canvas}")
    return np.full((height, width), fill, dtype=np.uint8)


def check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")


def _to_png_array(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == np.bool_:
        return (arr.astype(np.uint8)) * 255
    if arr.dtype != np.uint8:
        raise DimensionError(f"expected uint8 or bool array, got {arr.dtype}")
    return arr


def save_png(arr: np.ndarray, path) -> None:
    """Write an image or mask as single-channel PNG (masks become {0, 255})."""
    Image.fromarray(_to_png_array(arr), mode="L").save(path, format="PNG")


def encode_png_bytes(arr: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(_to_png_array(arr), mode="L").save(buf, format="PNG")
    return buf.getvalue()


def encode_png_base64(arr: np.ndarray) -> str:
    """Base64 PNG payload, as delivered in trial payloads."""
    return base64.b64encode(encode_png_bytes(arr)).decode("ascii")


def load_image(path) -> np.ndarray:
    with Image.open(path) as im:
        return np.asarray(im.convert("L"), dtype=np.uint8)


def load_mask(path) -> np.ndarray:
    """Read a {0, 255} PNG back into a bool mask (any nonzero counts as set)."""
    return load_image(path) > 0


def load_response_map(path) -> np.ndarray:
    """Read an 8-bit PNG as a float response map in [0, 1]."""
    return load_image(path).astype(np.float64) / 255.0
