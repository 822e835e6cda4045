"""Full-reference image quality metrics: MSE, PSNR, SSIM and CIEDE2000."""

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import ndimage

from .errors import ConfigError, ShapeError
from .imagecore import as_image, to_lab, to_luma

__all__ = [
    "MetricsReport",
    "mse",
    "psnr",
    "ssim",
    "ssim_gray",
    "gaussian_window",
    "ciede2000",
    "ciede2000_lab",
    "compare",
    "SSIM_WINDOW",
]

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03


@dataclass(frozen=True)
class MetricsReport:
    mse: float
    psnr: float
    ssim: float
    ciede2000: float = None

    def to_dict(self):
        return asdict(self)


def _pair(a, b):
    a, b = as_image(a), as_image(b)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def mse(a, b):
    a, b = _pair(a, b)
    return float(np.mean((a - b) ** 2))


def psnr(a, b, peak=1.0):
    """Peak signal-to-noise ratio in dB; ``inf`` for identical inputs."""
    err = mse(a, b)
    if err == 0:
        return math.inf
    return 10.0 * math.log10(peak * peak / err)


def gaussian_window(size=SSIM_WINDOW, sigma=SSIM_SIGMA):
    """Normalised 1-D gaussian taps; the 2-D window is their outer product."""
    x = np.arange(size) - (size - 1) / 2
    g = np.exp(-(x * x) / (2 * sigma * sigma))
    return g / g.sum()


def _local_mean(x, g):
    r = len(g) // 2
    y = ndimage.correlate1d(x, g, axis=0, mode="constant")
    y = ndimage.correlate1d(y, g, axis=1, mode="constant")
    return y[r:x.shape[0] - r, r:x.shape[1] - r]


def ssim_gray(a, b, data_range=1.0):
    """Mean SSIM of two 2-D arrays over every fully contained window."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 2:
        raise ShapeError(f"ssim_gray needs equal 2-D arrays, got {a.shape} and {b.shape}")
    if min(a.shape) < SSIM_WINDOW:
        raise ConfigError(
            f"image {a.shape[0]}x{a.shape[1]} is smaller than the {SSIM_WINDOW}x{SSIM_WINDOW} "
            "SSIM window; resize it first")
    g = gaussian_window()
    c1 = (SSIM_K1 * data_range) ** 2
    c2 = (SSIM_K2 * data_range) ** 2
    mu_a, mu_b = _local_mean(a, g), _local_mean(b, g)
    var_a = _local_mean(a * a, g) - mu_a * mu_a
    var_b = _local_mean(b * b, g) - mu_b * mu_b
    cov = _local_mean(a * b, g) - mu_a * mu_b
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return float(np.mean(num / den))


def ssim(a, b, luma=True):
    """SSIM with an 11x11 gaussian window (sigma 1.5), K1=0.01, K2=0.03.

    With ``luma=True`` colour inputs are reduced to Rec.601 luma first;
    otherwise the per-channel scores are averaged.
    """
    a, b = _pair(a, b)
    if luma:
        return ssim_gray(to_luma(a)[:, :, 0], to_luma(b)[:, :, 0])
    return float(np.mean([ssim_gray(a[:, :, c], b[:, :, c]) for c in range(a.shape[2])]))


def ciede2000_lab(lab1, lab2, kL=1.0, kC=1.0, kH=1.0):
    """Per-sample CIEDE2000 difference between two arrays of Lab triples."""
    lab1 = np.asarray(lab1, dtype=np.float64)
    lab2 = np.asarray(lab2, dtype=np.float64)
    if lab1.shape != lab2.shape or lab1.shape[-1] != 3:
        raise ShapeError(f"Lab arrays must match and end in 3, got {lab1.shape}, {lab2.shape}")
    L1, a1, b1 = np.moveaxis(lab1, -1, 0)
    L2, a2, b2 = np.moveaxis(lab2, -1, 0)
    pow25_7 = 25.0 ** 7

    c_bar = 0.5 * (np.hypot(a1, b1) + np.hypot(a2, b2))
    g = 0.5 * (1 - np.sqrt(c_bar ** 7 / (c_bar ** 7 + pow25_7)))
    a1p, a2p = (1 + g) * a1, (1 + g) * a2
    c1p, c2p = np.hypot(a1p, b1), np.hypot(a2p, b2)
    h1p = np.degrees(np.arctan2(b1, a1p)) % 360.0
    h2p = np.degrees(np.arctan2(b2, a2p)) % 360.0
    chroma0 = (c1p * c2p) == 0

    dL = L2 - L1
    dC = c2p - c1p
    dh = h2p - h1p
    dh = np.where(dh > 180, dh - 360, np.where(dh < -180, dh + 360, dh))
    dh = np.where(chroma0, 0.0, dh)
    dH = 2 * np.sqrt(c1p * c2p) * np.sin(np.radians(dh) / 2)

    L_bar = 0.5 * (L1 + L2)
    cp_bar = 0.5 * (c1p + c2p)
    hsum = h1p + h2p
    h_bar = np.where(np.abs(h1p - h2p) <= 180, hsum / 2,
                     np.where(hsum < 360, (hsum + 360) / 2, (hsum - 360) / 2))
    h_bar = np.where(chroma0, hsum, h_bar)

    t = (1 - 0.17 * np.cos(np.radians(h_bar - 30))
         + 0.24 * np.cos(np.radians(2 * h_bar))
         + 0.32 * np.cos(np.radians(3 * h_bar + 6))
         - 0.20 * np.cos(np.radians(4 * h_bar - 63)))
    d_theta = 30 * np.exp(-(((h_bar - 275) / 25) ** 2))
    rc = 2 * np.sqrt(cp_bar ** 7 / (cp_bar ** 7 + pow25_7))
    sl = 1 + 0.015 * (L_bar - 50) ** 2 / np.sqrt(20 + (L_bar - 50) ** 2)
    sc = 1 + 0.045 * cp_bar
    sh = 1 + 0.015 * cp_bar * t
    rt = -np.sin(np.radians(2 * d_theta)) * rc

    tl, tc, th = dL / (kL * sl), dC / (kC * sc), dH / (kH * sh)
    return np.sqrt(tl * tl + tc * tc + th * th + rt * tc * th)


def ciede2000(a, b):
    """Mean per-pixel CIEDE2000 between two sRGB images."""
    a, b = _pair(a, b)
    if a.shape[2] != 3:
        raise ShapeError(f"ciede2000 needs 3-channel images, got {a.shape[2]}")
    return float(np.mean(ciede2000_lab(to_lab(a), to_lab(b))))


def compare(a, b):
    """All metrics for one image pair; CIEDE2000 is omitted for gray input."""
    a, b = _pair(a, b)
    return MetricsReport(
        mse=mse(a, b),
        psnr=psnr(a, b),
        ssim=ssim(a, b),
        ciede2000=ciede2000(a, b) if a.shape[2] == 3 else None,
    )
