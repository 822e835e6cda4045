"""Synthetic rain: additive streak layers and heavy rain with a veil.

Moderate rain adds streak layers to the clean image::

    I = J + sum_i S_i

Heavy rain attenuates the streaked scene by a transmission map ``T`` and
blends in atmospheric light ``A``::

    I = T * (J + sum_i S_i) + (1 - T) * A

Randomness comes from numpy's Philox counter-based generator keyed by
``(seed, stream)``, so masks are reproducible bit for bit.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ConfigError, ShapeError
from .imagecore import as_image

__all__ = [
    "StreakLayerParams",
    "VeilParams",
    "rng_for",
    "streak_segments",
    "rasterize_segments",
    "gen_streak_layer",
    "apply_moderate",
    "depth_map",
    "gen_transmission",
    "apply_heavy",
    "synthetic_scene",
    "heavy_rain_pair",
    "bevelled_rain_scene",
]

RNG_NAME = "numpy.random.Philox(key=seed + 2**64 * stream)"


def rng_for(seed, stream=0):
    return np.random.Generator(np.random.Philox(key=int(seed) + (int(stream) << 64)))


@dataclass(frozen=True)
class StreakLayerParams:
    """One streak layer.

    ``angle`` is in degrees from vertical (positive leans right going down),
    ``density`` counts streaks per thousand pixels.
    """

    angle: float = 0.0
    length: float = 15.0
    width: float = 1.0
    density: float = 2.0
    intensity: float = 0.6
    seed: int = 0
    stream: int = 0

    def __post_init__(self):
        if not -45.0 <= self.angle <= 45.0:
            raise ConfigError(f"streak angle must lie in [-45, 45] degrees, got {self.angle}")
        if self.length < 1 or self.width < 1:
            raise ConfigError("streak length and width must be at least 1 pixel")
        if not self.density > 0:
            raise ConfigError(f"streak density must be positive, got {self.density}")
        if not 0 < self.intensity <= 1:
            raise ConfigError(f"streak intensity must lie in (0, 1], got {self.intensity}")
        if self.seed < 0 or self.stream < 0:
            raise ConfigError("seed and stream must be non-negative")


@dataclass(frozen=True)
class VeilParams:
    atmospheric_light: object = 0.8  # scalar or one value per channel
    beta: float = 1.0
    depth: np.ndarray = None

    def __post_init__(self):
        if self.beta < 0:
            raise ConfigError(f"beta must be non-negative, got {self.beta}")
        a = np.asarray(self.atmospheric_light, dtype=np.float64)
        if np.any(a < 0) or np.any(a > 1):
            raise ConfigError("atmospheric light must lie in [0, 1]")
        if self.depth is None:
            raise ConfigError("a depth map is required")


def streak_segments(h, w, p):
    """Draw the streak geometry for one layer.

    Returns ``(segments, values)`` where ``segments`` is ``(n, 4)`` holding
    ``x0, y0, x1, y1`` in pixel-centre coordinates and ``values`` the peak
    brightness of each streak.
    """
    if h < 1 or w < 1:
        raise ShapeError(f"degenerate raster {h}x{w}")
    rng = rng_for(p.seed, p.stream)
    count = rng.poisson(p.density * h * w / 1000.0)
    cx = rng.uniform(0.0, w, count)
    cy = rng.uniform(0.0, h, count)
    values = p.intensity * rng.uniform(0.7, 1.0, count)
    theta = np.deg2rad(p.angle)
    half = 0.5 * (p.length - 1)
    dx, dy = half * np.sin(theta), half * np.cos(theta)
    segments = np.stack([cx - dx, cy - dy, cx + dx, cy + dy], axis=1)
    return segments, values


def rasterize_segments(h, w, segments, values, width):
    """Anti-aliased rendering of line segments, combined by maximum.

    Coverage falls linearly from 1 to 0 over the pixel straddling the
    segment's half-width, so nothing lands farther than ``width / 2 + 0.5``
    from the segment.
    """
    out = np.zeros((h, w))
    reach = 0.5 * width + 0.5
    for (x0, y0, x1, y1), v in zip(segments, values):
        i0 = max(int(np.floor(min(y0, y1) - reach)), 0)
        i1 = min(int(np.ceil(max(y0, y1) + reach)) + 1, h)
        j0 = max(int(np.floor(min(x0, x1) - reach)), 0)
        j1 = min(int(np.ceil(max(x0, x1) + reach)) + 1, w)
        if i0 >= i1 or j0 >= j1:
            continue
        yy, xx = np.mgrid[i0:i1, j0:j1].astype(np.float64)
        dist = _segment_distance(xx, yy, x0, y0, x1, y1)
        cov = np.clip(reach - dist, 0.0, 1.0)
        np.maximum(out[i0:i1, j0:j1], v * cov, out=out[i0:i1, j0:j1])
    return out


def _segment_distance(px, py, x0, y0, x1, y1):
    vx, vy = x1 - x0, y1 - y0
    vv = vx * vx + vy * vy
    if vv == 0:
        t = 0.0
    else:
        t = np.clip(((px - x0) * vx + (py - y0) * vy) / vv, 0.0, 1.0)
    return np.hypot(px - (x0 + t * vx), py - (y0 + t * vy))


def gen_streak_layer(h, w, p):
    """Render one streak layer as an ``(h, w, 1)`` mask in ``[0, 1]``."""
    segments, values = streak_segments(h, w, p)
    return rasterize_segments(h, w, segments, values, p.width)[:, :, None]


def _mask(h, w, layers):
    mask = np.zeros((h, w, 1))
    for p in layers:
        mask += gen_streak_layer(h, w, p)
    return np.clip(mask, 0.0, 1.0)


def apply_moderate(clean, layers):
    """Add streak layers to ``clean``; returns ``(rain, mask)``."""
    clean = as_image(clean)
    mask = _mask(clean.shape[0], clean.shape[1], layers)
    return np.clip(clean + mask, 0.0, 1.0), mask


def depth_map(h, w, kind="ramp", value=1.0):
    """Synthetic unit-range depth: ``ramp`` (far at the top), ``radial`` or ``const``."""
    if kind == "ramp":
        d = np.linspace(1.0, 0.0, h)[:, None] * np.ones((1, w))
    elif kind == "radial":
        yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
        r = np.hypot(yy - (h - 1) / 2, xx - (w - 1) / 2)
        d = 1.0 - r / r.max() if r.max() > 0 else np.ones((h, w))
    elif kind == "const":
        d = np.full((h, w), float(value))
    else:
        raise ConfigError(f"unknown depth kind {kind!r}")
    return d[:, :, None]


def gen_transmission(v):
    """``T = exp(-beta * depth)``."""
    return np.exp(-v.beta * as_image(v.depth))


def apply_heavy(clean, layers, v):
    """Streaks plus veil; returns ``(rain, mask, transmission)``."""
    clean = as_image(clean)
    t = gen_transmission(v)
    if t.shape[:2] != clean.shape[:2]:
        raise ShapeError(f"depth map {t.shape[:2]} does not match image {clean.shape[:2]}")
    a = np.asarray(v.atmospheric_light, dtype=np.float64)
    streaked, mask = apply_moderate(clean, layers)
    rain = np.clip(t * streaked + (1.0 - t) * a, 0.0, 1.0)
    return rain, mask, t


def synthetic_scene(h, w, seed, channels=3, n_leaves=1500, rmin=2.0, rmax=40.0):
    """Dead-leaves clean image.

    Opaque disks with power-law radii (density ~ r**-3 between ``rmin`` and
    ``rmax``) are dropped front to back until the canvas is covered, which
    gives edges at every orientation and a natural-image-like spectrum. A
    light blur removes aliasing.
    """
    rng = rng_for(seed, stream=1000)
    u = rng.uniform(0.0, 1.0, n_leaves)
    radii = (rmin ** -2 - u * (rmin ** -2 - rmax ** -2)) ** -0.5
    cx = rng.uniform(-rmax / 2, w + rmax / 2, n_leaves)
    cy = rng.uniform(-rmax / 2, h + rmax / 2, n_leaves)
    colours = rng.uniform(0.1, 0.9, (n_leaves, channels))
    img = np.full((h, w, channels), 0.5)
    free = np.ones((h, w), dtype=bool)
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    for k in range(n_leaves):
        hit = free & ((xx - cx[k]) ** 2 + (yy - cy[k]) ** 2 < radii[k] ** 2)
        img[hit] = colours[k]
        free &= ~hit
        if not free.any():
            break
    return ndimage.gaussian_filter(img, (0.7, 0.7, 0), mode="mirror")


def heavy_rain_pair(seed, size=128, beta=1.0, atmospheric_light=0.8):
    """Clean scene and its heavy-rain rendering: two dense layers plus veil."""
    clean = synthetic_scene(size, size, seed)
    layers = [
        StreakLayerParams(angle=-10.0, length=25, width=1, density=6.0,
                          intensity=0.6, seed=seed, stream=0),
        StreakLayerParams(angle=15.0, length=15, width=1, density=4.0,
                          intensity=0.5, seed=seed, stream=1),
    ]
    veil = VeilParams(atmospheric_light, beta, depth_map(size, size, "ramp"))
    rain, mask, _ = apply_heavy(clean, layers, veil)
    return clean, rain, mask


def bevelled_rain_scene(seed, size=128, angle=30.0):
    """Clean scene, rain image and streak mask with slanted streaks."""
    clean = synthetic_scene(size, size, seed)
    layer = StreakLayerParams(angle=angle, length=21, width=1, density=3.0,
                              intensity=0.7, seed=seed, stream=0)
    rain, mask = apply_moderate(clean, [layer])
    return clean, rain, mask
