"""8-bit PNG reading and writing for square grayscale and RGB images.

Pixels travel through the pipeline as float64 on the [0, 255] scale;
quantization (round-half-up, then clamp) happens only here at write time.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image


def load_image(path: str | Path) -> np.ndarray:
    """Load an 8-bit grayscale or RGB PNG as float64.

    Returns (n, n) for grayscale and channel-major (3, n, n) for RGB.
    Non-square images and other modes (palette, alpha, 16-bit) are rejected.
    """
    with Image.open(path) as img:
        if img.mode not in ("L", "RGB"):
            raise ValueError(
                f"unsupported image mode {img.mode!r} in {path}; expected 8-bit L or RGB"
            )
        arr = np.asarray(img, dtype=np.float64)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"image must be square, got {arr.shape[1]}x{arr.shape[0]} in {path}")
    if arr.ndim == 3:
        return np.ascontiguousarray(np.moveaxis(arr, 2, 0))
    return arr


def quantize(arr: np.ndarray) -> np.ndarray:
    """Round half up and clamp to the 8-bit range."""
    return np.floor(np.asarray(arr, dtype=np.float64) + 0.5).clip(0, 255).astype(np.uint8)


def save_image(path: str | Path, arr: np.ndarray) -> None:
    """Write a channel (n, n) or channel-major RGB (3, n, n) array as PNG."""
    data = quantize(arr)
    if data.ndim == 2:
        img = Image.fromarray(data, mode="L")
    elif data.ndim == 3 and data.shape[0] == 3:
        img = Image.fromarray(np.moveaxis(data, 0, 2), mode="RGB")
    else:
        raise ValueError(f"expected (n, n) or (3, n, n) image, got shape {data.shape}")
    img.save(path, format="PNG")
