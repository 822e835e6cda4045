"""Nonsubsampled directional filter bank built from frequency-domain wedges.

The half-plane of orientations ``[0, pi)`` is cut into ``2**k`` equal
angular wedges, each paired with its antipode so the windows are real and
even. Neighbouring wedges overlap through a raised-cosine crossfade chosen
so that the squared windows sum to one at every frequency bin; analysis
followed by synthesis is therefore the identity.

Orientation is the angle of the frequency vector ``(omega_x, omega_y)``
measured from the horizontal frequency axis. Direction ``d`` is centred at
``pi * d / n``, so direction 0 holds horizontal frequencies (vertical
structures such as vertical rain streaks) and direction ``n / 2`` holds
vertical frequencies.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import fft as sfft

from .errors import ConfigError, ShapeError
from .imagecore import as_image

__all__ = [
    "WedgeBank",
    "build_wedge_bank",
    "wedge_of_angle",
    "dfb_analyze",
    "dfb_synthesize",
]


@dataclass(frozen=True, eq=False)
class WedgeBank:
    num_directions: int
    height: int
    width: int
    transition_frac: float
    windows: np.ndarray  # (num_directions, height, width), read-only

    @property
    def centers(self):
        return np.pi * np.arange(self.num_directions) / self.num_directions


def _is_pow2(n):
    return n >= 1 and n & (n - 1) == 0


def frequency_angles(h, w):
    """Orientation in ``[0, pi)`` of every DFT bin of an ``h x w`` raster."""
    fy = np.fft.fftfreq(h)[:, None]
    fx = np.fft.fftfreq(w)[None, :]
    return np.mod(np.arctan2(fy, fx), np.pi)


def _wedge_window(theta, center, width, transition):
    u = np.abs(np.mod(theta - center + np.pi / 2, np.pi) - np.pi / 2)
    lo = width / 2 - transition / 2
    s = np.clip((u - lo) / transition, 0.0, 1.0)
    return np.cos(0.5 * np.pi * s)


def _negate_bins(a):
    # a[..., k] -> a[..., -k mod n] over the last two axes
    return np.roll(a[..., ::-1, ::-1], 1, axis=(-2, -1))


@lru_cache(maxsize=64)
def _cached_bank(h, w, n, frac):
    theta = frequency_angles(h, w)
    width = np.pi / n
    sq = np.empty((n, h, w))
    for d in range(n):
        sq[d] = _wedge_window(theta, np.pi * d / n, width, frac * width) ** 2
    # Nyquist rows/columns are their own negation modulo n, where the angle
    # rule alone is not even; averaging the squared windows with their
    # mirror makes them even without breaking the partition of unity.
    sq = 0.5 * (sq + _negate_bins(sq))
    sq[:, 0, 0] = 1.0 / n
    windows = np.sqrt(sq)
    windows.setflags(write=False)
    return WedgeBank(n, h, w, frac, windows)


def build_wedge_bank(h, w, num_directions, transition_frac=0.3):
    """Construct (or fetch from cache) the wedge bank for an ``h x w`` raster.

    Parameters
    ----------
    h, w : int
        Raster size, each at least 2.
    num_directions : int
        Power of two in ``[2, 64]``.
    transition_frac : float
        Fraction of a wedge's angular width spent in the crossfade,
        ``0 < transition_frac <= 0.5``.
    """
    n = int(num_directions)
    if not _is_pow2(n) or not 2 <= n <= 64:
        raise ConfigError(f"num_directions must be a power of two in [2, 64], got {num_directions}")
    if not 0 < transition_frac <= 0.5:
        raise ConfigError(f"transition_frac must lie in (0, 0.5], got {transition_frac}")
    if h < 2 or w < 2:
        raise ShapeError(f"wedge bank needs h, w >= 2, got {h}x{w}")
    return _cached_bank(int(h), int(w), n, float(transition_frac))


def wedge_of_angle(theta, num_directions):
    """Index of the wedge whose centre is nearest to orientation ``theta``."""
    return int(np.round(np.mod(theta, np.pi) / (np.pi / num_directions))) % num_directions


def _check(band, bank):
    if band.shape[:2] != (bank.height, bank.width):
        raise ShapeError(
            f"band is {band.shape[0]}x{band.shape[1]}, bank is {bank.height}x{bank.width}")


def dfb_analyze(band, bank):
    """Split ``band`` into ``bank.num_directions`` full-resolution subbands.

    Multichannel input is filtered channel by channel.
    """
    band = as_image(band)
    _check(band, bank)
    spectrum = sfft.fft2(band, axes=(0, 1))
    return [sfft.ifft2(win[:, :, None] * spectrum, axes=(0, 1)).real
            for win in bank.windows]


def dfb_synthesize(subbands, bank):
    """Recombine directional subbands; exact inverse of :func:`dfb_analyze`."""
    if len(subbands) != bank.num_directions:
        raise ShapeError(
            f"expected {bank.num_directions} subbands, got {len(subbands)}")
    subs = [as_image(s) for s in subbands]
    for s in subs:
        _check(s, bank)
        if s.shape != subs[0].shape:
            raise ShapeError("subbands disagree in shape")
    acc = np.zeros(subs[0].shape, dtype=np.complex128)
    for win, s in zip(bank.windows, subs):
        acc += win[:, :, None] * sfft.fft2(s, axes=(0, 1))
    return sfft.ifft2(acc, axes=(0, 1)).real
