"""Deterministic synthetic test images.

Four gray RGB fixtures around a bright base level with low contrast. The
contrast is deliberately small: relative noise levels are measured against
the whole image norm (dominated by the base level), so only low-contrast
content degrades visibly under a few percent of noise, which is what makes
before/after quality comparisons meaningful on these images.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .pngio import save_image

_BASE_LEVEL = 180.0
_BLOCK_SEED = 20240117


def _as_rgb(gray: np.ndarray) -> np.ndarray:
    return np.clip(np.stack([gray, gray, gray]), 0.0, 255.0)


def blocks(n: int = 64, amplitude: int = 4, cell: int = 8) -> np.ndarray:
    """Piecewise-constant random blocks of side ``cell``."""
    if n % cell:
        raise ValueError(f"cell size {cell} must divide image side {n}")
    rng = np.random.default_rng(_BLOCK_SEED)
    levels = rng.integers(-amplitude, amplitude + 1, size=(n // cell, n // cell))
    return _as_rgb(_BASE_LEVEL + np.kron(levels.astype(np.float64), np.ones((cell, cell))))


def gradient(n: int = 64, amplitude: float = 7.0) -> np.ndarray:
    """Linear ramp, mostly horizontal with a mild vertical tilt."""
    x = np.linspace(-1.0, 1.0, n)
    return _as_rgb(_BASE_LEVEL + amplitude * (0.7 * x[None, :] + 0.3 * x[:, None]))


def checkerboard(n: int = 64, amplitude: float = 4.0, cell: int = 8) -> np.ndarray:
    """Alternating bright and dark squares of side ``cell``."""
    i, j = np.indices((n, n))
    signs = ((i // cell + j // cell) % 2) * 2 - 1
    return _as_rgb(_BASE_LEVEL + amplitude * signs)


def texture(n: int = 64, amplitude: float = 4.0) -> np.ndarray:
    """Smooth low-frequency cosine texture."""
    i, j = np.indices((n, n)) / n
    waves = np.cos(2 * np.pi * 1.5 * i + 0.7) * np.cos(2 * np.pi * 2.5 * j)
    waves = waves + 0.5 * np.sin(2 * np.pi * 3.0 * (i + j))
    return _as_rgb(_BASE_LEVEL + amplitude * waves)


def fixture_set(n: int = 64) -> dict[str, np.ndarray]:
    """The four standard fixtures keyed by name, each a (3, n, n) array."""
    return {
        "blocks": blocks(n),
        "gradient": gradient(n),
        "checkerboard": checkerboard(n),
        "texture": texture(n),
    }


def write_fixture_set(directory: str | Path, n: int = 64) -> list[Path]:
    """Write the fixture set as PNGs into ``directory``; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, image in fixture_set(n).items():
        path = directory / f"{name}.png"
        save_image(path, image)
        paths.append(path)
    return paths
