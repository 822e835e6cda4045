"""Laplacian pyramid analysis and synthesis.

One pyramid level splits an image into a half-resolution lowpass band and a
full-resolution residual. Reconstruction is exact by construction because the
residual is defined as the difference between the input and the expanded
lowpass band.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ConfigError, ShapeError
from .imagecore import as_image

__all__ = [
    "BURT_KERNEL",
    "LpLevel",
    "check_kernel",
    "pad_to_even",
    "lp_reduce",
    "lp_expand",
    "lp_analyze",
    "lp_synthesize",
]

BURT_KERNEL = (0.05, 0.25, 0.40, 0.25, 0.05)


@dataclass(frozen=True)
class LpLevel:
    coarse: np.ndarray
    residual: np.ndarray


def check_kernel(kernel):
    k = np.asarray(kernel, dtype=np.float64)
    if k.ndim != 1 or k.size % 2 == 0:
        raise ConfigError(f"lowpass kernel must have odd length, got {k.size}")
    if abs(k.sum() - 1.0) > 1e-12:
        raise ConfigError(f"lowpass kernel taps must sum to 1, got {k.sum()!r}")
    return k


def pad_to_even(img):
    """Pad the bottom row / right column by one mirrored sample where odd."""
    img = as_image(img)
    for axis in (0, 1):
        n = img.shape[axis]
        if n % 2:
            widths = [(0, 0)] * 3
            widths[axis] = (0, 1)
            # "reflect" mirrors without repeating the edge sample; a length-1
            # axis has nothing to mirror so it is replicated instead.
            img = np.pad(img, widths, mode="reflect" if n > 1 else "edge")
    return img


def _filter2(img, taps):
    out = ndimage.convolve1d(img, taps, axis=0, mode="mirror")
    return ndimage.convolve1d(out, taps, axis=1, mode="mirror")


def lp_reduce(img, kernel=BURT_KERNEL):
    """Lowpass filter with symmetric boundaries, then keep even samples."""
    k = check_kernel(kernel)
    return _filter2(as_image(img), k)[::2, ::2]


def lp_expand(img, target_h, target_w, kernel=BURT_KERNEL):
    """Zero-stuff ``img`` to ``(target_h, target_w)`` and interpolate.

    The interpolation filter is twice the analysis kernel per axis so the
    DC gain of reduce followed by expand is one.
    """
    k = check_kernel(kernel)
    img = as_image(img)
    h, w, c = img.shape
    if (target_h, target_w) != (2 * h, 2 * w):
        raise ShapeError(
            f"cannot expand {h}x{w} to {target_h}x{target_w}; targets must be 2x")
    up = np.zeros((target_h, target_w, c))
    up[::2, ::2] = img
    return _filter2(up, 2.0 * k)


def lp_analyze(img, kernel=BURT_KERNEL):
    """Split ``img`` into a coarse band and a highpass residual.

    Odd dimensions are padded to even first; the residual has the padded
    shape and the caller keeps track of the original size.
    """
    x = pad_to_even(img)
    coarse = lp_reduce(x, kernel)
    residual = x - lp_expand(coarse, x.shape[0], x.shape[1], kernel)
    return LpLevel(coarse=coarse, residual=residual)


def lp_synthesize(level, target_h, target_w, kernel=BURT_KERNEL):
    """Invert :func:`lp_analyze`, cropping back to ``target_h x target_w``."""
    coarse = as_image(level.coarse)
    residual = as_image(level.residual)
    ph, pw = residual.shape[:2]
    if ph % 2 or pw % 2 or coarse.shape != (ph // 2, pw // 2, residual.shape[2]):
        raise ShapeError(
            f"inconsistent level: coarse {coarse.shape}, residual {residual.shape}")
    if not (0 < target_h <= ph and ph - target_h <= 1
            and 0 < target_w <= pw and pw - target_w <= 1):
        raise ShapeError(f"target {target_h}x{target_w} does not match padded {ph}x{pw}")
    full = residual + lp_expand(coarse, ph, pw, kernel)
    return full[:target_h, :target_w]
