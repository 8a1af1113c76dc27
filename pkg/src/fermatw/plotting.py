"""Binary PPM (P6) rendering: domain coloring for complex fields, log10
grayscale for residual fields. Masked or non-finite pixels render white."""

import numpy as np


def complex_to_rgb(values, mask=None):
    """Domain coloring: hue = arg/2pi, lightness = 1 - 2^(-|v|), saturation 1.

    Returns uint8 RGB of shape values.shape + (3,).
    """
    v = np.asarray(values, dtype=np.complex128)
    bad = ~np.isfinite(v)
    if mask is not None:
        bad = bad | np.asarray(mask, dtype=bool)
    safe = np.where(bad, 0.0, v)
    hue = (np.angle(safe) / (2.0 * np.pi)) % 1.0
    light = 1.0 - np.exp2(-np.abs(safe))
    chroma = 1.0 - np.abs(2.0 * light - 1.0)
    hp = hue * 6.0
    xval = chroma * (1.0 - np.abs(hp % 2.0 - 1.0))
    base = light - chroma / 2.0
    segment = np.floor(hp).astype(int) % 6
    r = np.choose(segment, [chroma, xval, np.zeros_like(xval), np.zeros_like(xval), xval, chroma])
    g = np.choose(segment, [xval, chroma, chroma, xval, np.zeros_like(xval), np.zeros_like(xval)])
    b = np.choose(segment, [np.zeros_like(xval), np.zeros_like(xval), xval, chroma, chroma, xval])
    rgb = np.stack([r + base, g + base, b + base], axis=-1)
    rgb[bad] = 1.0
    return (np.clip(rgb, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def residual_to_rgb(residuals, mask=None):
    """Grayscale log10 heatmap clamped to [-16, 0]: black = 1e-16, white = 1.

    Residuals below ~1e-9 all land in the dark band, so a correct field
    reads as a uniform near-black image.
    """
    r = np.asarray(residuals, dtype=float)
    bad = ~np.isfinite(r)
    if mask is not None:
        bad = bad | np.asarray(mask, dtype=bool)
    t = np.clip(np.log10(np.maximum(r, 1e-300)), -16.0, 0.0)
    gray = ((t + 16.0) / 16.0 * 255.0 + 0.5).astype(np.uint8)
    gray[bad] = 255
    return np.stack([gray, gray, gray], axis=-1)


def write_ppm(stream, rgb):
    """Write uint8 RGB (h, w, 3) as binary P6 with header 'P6\\n<w> <h>\\n255\\n'."""
    rgb = np.asarray(rgb, dtype=np.uint8)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError(f"expected (h, w, 3) uint8 array, got shape {rgb.shape}")
    h, w, _ = rgb.shape
    stream.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
    stream.write(rgb.tobytes())
