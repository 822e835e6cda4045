"""Competing streak extractors: single-level Haar DWT and a high/low split."""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ConfigError, ShapeError
from .imagecore import as_image
from .pyramid import pad_to_even

__all__ = [
    "DwtQuad",
    "HlPair",
    "dwt_haar_forward",
    "dwt_haar_inverse",
    "hl_split",
    "hl_merge",
]


@dataclass(frozen=True)
class DwtQuad:
    """Orthonormal Haar subbands plus the unpadded source size.

    ``lh`` holds vertical differences (horizontal edges), ``hl_band``
    horizontal differences (vertical edges) and ``hh`` the diagonal term.
    """

    ll: np.ndarray
    lh: np.ndarray
    hl_band: np.ndarray
    hh: np.ndarray
    shape: tuple = None

    def details(self):
        return {"lh": self.lh, "hl": self.hl_band, "hh": self.hh}


@dataclass(frozen=True)
class HlPair:
    low: np.ndarray
    high: np.ndarray


def dwt_haar_forward(img):
    img = as_image(img)
    x = pad_to_even(img)
    a, b = x[0::2, 0::2], x[0::2, 1::2]
    c, d = x[1::2, 0::2], x[1::2, 1::2]
    return DwtQuad(
        ll=(a + b + c + d) / 2,
        lh=(a + b - c - d) / 2,
        hl_band=(a - b + c - d) / 2,
        hh=(a - b - c + d) / 2,
        shape=img.shape[:2],
    )


def dwt_haar_inverse(quad):
    ll, lh, hl, hh = (as_image(q) for q in (quad.ll, quad.lh, quad.hl_band, quad.hh))
    if not ll.shape == lh.shape == hl.shape == hh.shape:
        raise ShapeError("Haar subbands disagree in shape")
    h, w, c = ll.shape
    out = np.empty((2 * h, 2 * w, c))
    out[0::2, 0::2] = (ll + lh + hl + hh) / 2
    out[0::2, 1::2] = (ll + lh - hl - hh) / 2
    out[1::2, 0::2] = (ll - lh + hl - hh) / 2
    out[1::2, 1::2] = (ll - lh - hl + hh) / 2
    if quad.shape is not None:
        out = out[:quad.shape[0], :quad.shape[1]]
    return out


def hl_split(img, sigma=2.0):
    """Gaussian lowpass (truncated at 4 sigma, unit DC gain) and its residual."""
    if not sigma > 0:
        raise ConfigError(f"sigma must be positive, got {sigma}")
    img = as_image(img)
    low = ndimage.gaussian_filter(img, sigma=(sigma, sigma, 0), mode="mirror", truncate=4.0)
    return HlPair(low=low, high=img - low)


def hl_merge(pair):
    return pair.low + pair.high
