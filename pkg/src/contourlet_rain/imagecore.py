"""Image rasters, file I/O and colour conversions.

Images are plain ``numpy.ndarray`` objects of shape ``(height, width,
channels)`` holding float64 samples, with ``channels`` either 1 or 3.
Images read from disk are always in ``[0, 1]``; subbands and residuals
produced elsewhere in the package use the same layout but may be signed.
"""

import os

import numpy as np
import png

from .errors import DecodeError, ShapeError

__all__ = [
    "as_image",
    "load_image",
    "save_image",
    "srgb_to_linear",
    "linear_to_xyz",
    "xyz_to_lab",
    "to_lab",
    "to_luma",
    "LUMA_WEIGHTS",
]

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])

# sRGB primaries, D65 white, 2 degree observer
_RGB_TO_XYZ = np.array([
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
])
# White point taken from the matrix rows so that RGB (1, 1, 1) lands exactly
# on L* = 100, a* = b* = 0.
_WHITE_XYZ = _RGB_TO_XYZ.sum(axis=1)


def as_image(arr):
    """Return ``arr`` as a float64 ``(H, W, C)`` array.

    Two-dimensional input gains a trailing singleton channel axis.
    """
    a = np.asarray(arr, dtype=np.float64)
    if a.ndim == 2:
        a = a[:, :, None]
    if a.ndim != 3:
        raise ShapeError(f"expected a 2-D or 3-D array, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ShapeError(f"image dimensions must be positive, got {a.shape[:2]}")
    return a


def _read_pnm(path, raw):
    # Header: magic, width, height, maxval separated by whitespace, with
    # '#' comments allowed, then exactly one whitespace byte before the data.
    tokens = []
    pos = 2
    while len(tokens) < 3:
        if pos >= len(raw):
            raise DecodeError(f"{path}: truncated PNM header")
        c = raw[pos:pos + 1]
        if c == b"#":
            end = raw.find(b"\n", pos)
            pos = len(raw) if end < 0 else end + 1
        elif c.isspace():
            pos += 1
        else:
            start = pos
            while pos < len(raw) and not raw[pos:pos + 1].isspace():
                pos += 1
            tokens.append(raw[start:pos])
    pos += 1
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise DecodeError(f"{path}: malformed PNM header") from None
    if width < 1 or height < 1 or not 0 < maxval < 65536:
        raise DecodeError(f"{path}: unsupported PNM geometry or maxval {maxval}")
    channels = 3 if raw[:2] == b"P6" else 1
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    count = width * height * channels
    data = raw[pos:pos + count * dtype.itemsize]
    if len(data) < count * dtype.itemsize:
        raise DecodeError(f"{path}: truncated PNM pixel data")
    samples = np.frombuffer(data, dtype=dtype).astype(np.float64) / maxval
    return samples.reshape(height, width, channels)


def _read_png(path):
    try:
        width, height, rows, info = png.Reader(filename=path).asDirect()
        pixels = np.array([np.asarray(r, dtype=np.float64) for r in rows])
    except (png.Error, EOFError, ValueError, OSError) as exc:
        raise DecodeError(f"{path}: {exc}") from None
    bitdepth = info["bitdepth"]
    if bitdepth not in (8, 16):
        raise DecodeError(f"{path}: unsupported PNG bit depth {bitdepth}")
    planes = info["planes"]
    if pixels.shape != (height, width * planes):
        raise DecodeError(f"{path}: truncated PNG pixel data")
    img = pixels.reshape(height, width, planes) / (2 ** bitdepth - 1)
    if info["alpha"]:
        img = img[:, :, :-1]
    return img


def load_image(path):
    """Read a PNG (8/16-bit, gray or RGB) or binary PGM/PPM file.

    Returns an ``(H, W, C)`` float64 array scaled to ``[0, 1]``. Any alpha
    channel is dropped.

    Raises
    ------
    DecodeError
        If the file is unreadable, truncated or of an unsupported type.
    """
    path = os.fspath(path)
    try:
        with open(path, "rb") as fh:
            head = fh.read(8)
    except OSError as exc:
        raise DecodeError(f"{path}: {exc.strerror}") from None
    if head.startswith(b"\x89PNG"):
        return _read_png(path)
    if head[:2] in (b"P5", b"P6"):
        with open(path, "rb") as fh:
            return _read_pnm(path, fh.read())
    raise DecodeError(f"{path}: not a PNG or binary PNM file")


def save_image(img, path):
    """Write ``img`` as an 8-bit PNG after clamping to ``[0, 1]``."""
    img = as_image(img)
    h, w, c = img.shape
    if c not in (1, 3):
        raise ShapeError(f"cannot save an image with {c} channels")
    q = np.round(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)
    writer = png.Writer(width=w, height=h, greyscale=(c == 1), bitdepth=8)
    with open(os.fspath(path), "wb") as fh:
        writer.write(fh, q.reshape(h, w * c))


def srgb_to_linear(v):
    v = np.asarray(v, dtype=np.float64)
    return np.where(v <= 0.04045, v / 12.92, ((v + 0.055) / 1.055) ** 2.4)


def linear_to_xyz(rgb):
    return np.asarray(rgb, dtype=np.float64) @ _RGB_TO_XYZ.T


def xyz_to_lab(xyz):
    t = np.asarray(xyz, dtype=np.float64) / _WHITE_XYZ
    delta = 6.0 / 29.0
    f = np.where(t > delta ** 3, np.cbrt(t), t / (3 * delta ** 2) + 4.0 / 29.0)
    L = 116.0 * f[..., 1] - 16.0
    a = 500.0 * (f[..., 0] - f[..., 1])
    b = 200.0 * (f[..., 1] - f[..., 2])
    return np.stack([L, a, b], axis=-1)


def to_lab(img):
    """Convert an sRGB image to CIE L*a*b* (D65, 2 degree observer).

    Uses the exact piecewise sRGB transfer curve.
    """
    img = as_image(img)
    if img.shape[2] != 3:
        raise ShapeError(f"to_lab needs 3 channels, got {img.shape[2]}")
    return xyz_to_lab(linear_to_xyz(srgb_to_linear(img)))


def to_luma(img):
    """Rec.601 luma. Single-channel input is returned unchanged."""
    img = as_image(img)
    if img.shape[2] == 1:
        return img
    if img.shape[2] != 3:
        raise ShapeError(f"to_luma needs 1 or 3 channels, got {img.shape[2]}")
    return (img @ LUMA_WEIGHTS)[:, :, None]
