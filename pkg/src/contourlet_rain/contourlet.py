"""Hierarchical contourlet transform.

Each level runs one Laplacian pyramid split on the current semantic
(lowpass) band and sends the residual through the directional filter bank.
Only the semantic band is decomposed further, so a transform with ``L``
levels yields ``L`` sets of multi-direction subbands plus one bottom
semantic band.

Decompositions can be written to and read from a directory holding a
``manifest.json`` plus one ``.ctsb`` binary blob per band.
"""

import hashlib
import json
import os
import struct
from dataclasses import asdict, dataclass, field

import numpy as np

from .dfb import build_wedge_bank, dfb_analyze, dfb_synthesize
from .errors import ConfigError, FormatError, ManifestError, ShapeError
from .imagecore import as_image
from .pyramid import BURT_KERNEL, LpLevel, check_kernel, lp_analyze, lp_synthesize

__all__ = [
    "CtConfig",
    "ContourletDecomposition",
    "AggregateComponent",
    "POOL_OPS",
    "ct_forward",
    "ct_inverse",
    "multi_pool",
    "aggregate_component",
    "stored_sample_count",
    "write_band",
    "read_band",
    "serialize_decomposition",
    "deserialize_decomposition",
]

MAX_LEVELS = 8


@dataclass(frozen=True)
class CtConfig:
    levels: int = 4
    num_directions: int = 16
    lp_kernel: tuple = BURT_KERNEL
    transition_frac: float = 0.3

    def __post_init__(self):
        if not 1 <= self.levels <= MAX_LEVELS:
            raise ConfigError(f"levels must lie in [1, {MAX_LEVELS}], got {self.levels}")
        n = self.num_directions
        if not (2 <= n <= 64 and n & (n - 1) == 0):
            raise ConfigError(f"num_directions must be a power of two in [2, 64], got {n}")
        if not 0 < self.transition_frac <= 0.5:
            raise ConfigError(f"transition_frac must lie in (0, 0.5], got {self.transition_frac}")
        object.__setattr__(self, "lp_kernel", tuple(float(t) for t in self.lp_kernel))
        check_kernel(self.lp_kernel)

    def bank(self, h, w):
        return build_wedge_bank(h, w, self.num_directions, self.transition_frac)


@dataclass(frozen=True)
class ContourletDecomposition:
    """Bottom semantic band, per-level direction subbands and the SS chain.

    ``ms[l]`` is the list of direction subbands of level ``l + 1``; all of
    them share the padded shape of the semantic band entering that level.
    ``ss_chain[l]`` is the semantic band produced by level ``l + 1``.
    """

    ss: np.ndarray
    ms: list
    ss_chain: list
    original_h: int
    original_w: int
    config: CtConfig = field(default_factory=CtConfig)

    @property
    def levels(self):
        return len(self.ms)

    def level_input_shapes(self):
        """Unpadded ``(h, w)`` of the band entering each level."""
        return [(self.original_h, self.original_w)] + [s.shape[:2] for s in self.ss_chain[:-1]]


@dataclass(frozen=True)
class AggregateComponent:
    level_index: int
    planes: np.ndarray
    source_manifest: list


def ct_forward(img, cfg=None):
    """Decompose ``img`` into multi-direction subbands and a semantic band."""
    cfg = CtConfig() if cfg is None else cfg
    current = as_image(img)
    h, w = current.shape[:2]
    ms, chain = [], []
    for _ in range(cfg.levels):
        split = lp_analyze(current, cfg.lp_kernel)
        bank = cfg.bank(*split.residual.shape[:2])
        ms.append(dfb_analyze(split.residual, bank))
        chain.append(split.coarse)
        current = split.coarse
    return ContourletDecomposition(ss=chain[-1], ms=ms, ss_chain=chain,
                                   original_h=h, original_w=w, config=cfg)


def ct_inverse(dec):
    """Reconstruct the image from a :class:`ContourletDecomposition`."""
    cfg = dec.config
    if len(dec.ms) != len(dec.ss_chain) or not dec.ms:
        raise ShapeError("ms and ss_chain must have the same nonzero length")
    targets = dec.level_input_shapes()
    current = as_image(dec.ss)
    for lvl in reversed(range(len(dec.ms))):
        th, tw = targets[lvl]
        ph, pw = th + th % 2, tw + tw % 2
        if current.shape[:2] != (ph // 2, pw // 2):
            raise ShapeError(
                f"level {lvl + 1}: semantic band {current.shape[:2]} does not fit {th}x{tw}")
        residual = dfb_synthesize(dec.ms[lvl], cfg.bank(ph, pw))
        current = lp_synthesize(LpLevel(current, residual), th, tw, cfg.lp_kernel)
    return current


POOL_OPS = ("avg", "max")


def multi_pool(img, factor, ops=POOL_OPS):
    """Channel-concatenated pooling with window = stride = ``factor``.

    Dimensions that are not multiples of ``factor`` are edge-padded first.
    The output holds one block of input channels per pooling operator, in
    the order given by ``ops``.
    """
    img = as_image(img)
    factor = int(factor)
    if factor < 1 or factor & (factor - 1):
        raise ConfigError(f"pooling factor must be a power of two, got {factor}")
    h, w, c = img.shape
    ph, pw = -h % factor, -w % factor
    if ph or pw:
        img = np.pad(img, ((0, ph), (0, pw), (0, 0)), mode="edge")
    blocks = img.reshape(img.shape[0] // factor, factor, img.shape[1] // factor, factor, c)
    pooled = []
    for op in ops:
        if op == "avg":
            pooled.append(blocks.mean(axis=(1, 3)))
        elif op == "max":
            pooled.append(blocks.max(axis=(1, 3)))
        else:
            raise ConfigError(f"unknown pooling operator {op!r}")
    return np.concatenate(pooled, axis=2)


def aggregate_component(img, ss_chain_prefix, level_index, ops=POOL_OPS):
    """Pool the input and the earlier semantic bands to the level grid.

    For level ``i`` the input image is pooled by ``2**(i-1)`` and ``SS_j``
    by ``2**(i-1-j)``; the results are concatenated along channels in the
    order I, SS_1, ..., SS_{i-1}.
    """
    img = as_image(img)
    i = int(level_index)
    if i < 1 or len(ss_chain_prefix) != i - 1:
        raise ShapeError(
            f"level {i} needs {i - 1} semantic bands, got {len(ss_chain_prefix)}")
    target = (-(-img.shape[0] // 2 ** (i - 1)), -(-img.shape[1] // 2 ** (i - 1)))
    sources = [("I", img, 2 ** (i - 1))]
    sources += [(f"SS_{j}", as_image(ss), 2 ** (i - 1 - j))
                for j, ss in enumerate(ss_chain_prefix, start=1)]
    planes, manifest = [], []
    for name, src, factor in sources:
        pooled = multi_pool(src, factor, ops)
        if pooled.shape[:2] != target:
            raise ShapeError(
                f"{name} pools to {pooled.shape[:2]}, level {i} grid is {target}")
        planes.append(pooled)
        for op in ops:
            for ch in range(src.shape[2]):
                manifest.append({"source": name, "op": op, "channel": ch, "factor": factor})
    return AggregateComponent(i, np.concatenate(planes, axis=2), manifest)


def stored_sample_count(dec):
    n = dec.ss.size
    for bands in dec.ms:
        n += sum(b.size for b in bands)
    return n


# -- serialization -----------------------------------------------------------

MAGIC = b"CTSB"
VERSION = 1
_HEADER = struct.Struct("<4sHIIH")


def write_band(band, path):
    """Write one band as a CTSB blob and return the blob's sha256 digest."""
    band = as_image(band)
    h, w, c = band.shape
    blob = _HEADER.pack(MAGIC, VERSION, h, w, c) + band.astype("<f4").tobytes()
    with open(path, "wb") as fh:
        fh.write(blob)
    return hashlib.sha256(blob).hexdigest()


def _parse_band(blob, path):
    if len(blob) < _HEADER.size:
        raise FormatError(f"{path}: truncated band header")
    magic, version, h, w, c = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported band version {version}")
    payload = blob[_HEADER.size:]
    if len(payload) != 4 * h * w * c:
        raise FormatError(f"{path}: expected {h}x{w}x{c} samples, got {len(payload)} bytes")
    return np.frombuffer(payload, dtype="<f4").astype(np.float64).reshape(h, w, c)


def read_band(path, sha256=None):
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except FileNotFoundError:
        raise ManifestError(f"{path}: band file missing") from None
    band = _parse_band(blob, path)
    if sha256 is not None and hashlib.sha256(blob).hexdigest() != sha256:
        raise FormatError(f"{path}: checksum mismatch")
    return band


def serialize_decomposition(dec, directory):
    """Write ``dec`` as ``manifest.json`` plus one ``.ctsb`` blob per band."""
    os.makedirs(directory, exist_ok=True)
    bands = []

    def put(name, arr, role, level, direction=None):
        digest = write_band(arr, os.path.join(directory, name))
        bands.append({"file": name, "role": role, "level": level,
                      "direction": direction, "shape": list(arr.shape),
                      "sha256": digest})

    for lvl, ss in enumerate(dec.ss_chain, start=1):
        put(f"ss_{lvl}.ctsb", ss, "ss", lvl)
    for lvl, subs in enumerate(dec.ms, start=1):
        for d, sub in enumerate(subs):
            put(f"ms_{lvl}_{d:02d}.ctsb", sub, "ms", lvl, d)
    cfg = asdict(dec.config)
    cfg["lp_kernel"] = list(cfg["lp_kernel"])
    manifest = {
        "format": "contourlet-decomposition",
        "version": VERSION,
        "byte_order": "little",
        "sample_type": "float32",
        "config": cfg,
        "original_h": dec.original_h,
        "original_w": dec.original_w,
        "pool_ops": list(POOL_OPS),
        "checksum": "sha256",
        "bands": bands,
    }
    with open(os.path.join(directory, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def deserialize_decomposition(directory):
    """Load a decomposition written by :func:`serialize_decomposition`."""
    mpath = os.path.join(directory, "manifest.json")
    try:
        with open(mpath) as fh:
            manifest = json.load(fh)
    except FileNotFoundError:
        raise ManifestError(f"{mpath}: manifest missing") from None
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{mpath}: {exc}") from None
    if manifest.get("version") != VERSION or manifest.get("byte_order") != "little":
        raise FormatError(f"{mpath}: unsupported manifest version or byte order")
    try:
        cfg = CtConfig(**manifest["config"])
        chain = [None] * cfg.levels
        ms = [[None] * cfg.num_directions for _ in range(cfg.levels)]
        for entry in manifest["bands"]:
            band = read_band(os.path.join(directory, entry["file"]), entry["sha256"])
            if list(band.shape) != list(entry["shape"]):
                raise FormatError(f"{entry['file']}: shape disagrees with manifest")
            lvl = entry["level"] - 1
            if entry["role"] == "ss":
                chain[lvl] = band
            else:
                ms[lvl][entry["direction"]] = band
        h, w = manifest["original_h"], manifest["original_w"]
    except (KeyError, IndexError, TypeError) as exc:
        raise ManifestError(f"{mpath}: malformed manifest ({exc!r})") from None
    if any(b is None for b in chain) or any(b is None for subs in ms for b in subs):
        raise ManifestError(f"{mpath}: manifest does not list every band")
    return ContourletDecomposition(ss=chain[-1], ms=ms, ss_chain=chain,
                                   original_h=h, original_w=w, config=cfg)
