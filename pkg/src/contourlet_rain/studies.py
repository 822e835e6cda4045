"""The two analytical studies and their report writer.

``run_level_study`` measures how far a rain image's semantic band is from
the clean one as the number of contourlet levels grows.
``run_extraction_compare`` scores how well contourlet, Haar DWT and
high/low-split bands line up with a known rain-streak mask.

Study rows are plain dicts; column order for each study is fixed by
``LEVEL_COLUMNS`` / ``COMPARE_COLUMNS``.
"""

import csv
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np

from .baselines import dwt_haar_forward, hl_split
from .contourlet import MAX_LEVELS, CtConfig, ct_forward
from .errors import DatasetError, ShapeError
from .imagecore import as_image, load_image, to_luma
from .metrics import SSIM_WINDOW, mse, ssim_gray

__all__ = [
    "PairedDataset",
    "LEVEL_COLUMNS",
    "COMPARE_COLUMNS",
    "run_level_study",
    "run_extraction_compare",
    "minmax_normalize",
    "emit_report",
]

log = logging.getLogger(__name__)

IMAGE_EXTENSIONS = (".png", ".ppm", ".pgm")
LEVEL_COLUMNS = ["kind", "image", "level", "ss_h", "ss_w", "mse", "ssim", "ssim_skipped", "note"]
COMPARE_COLUMNS = ["method", "band", "kind", "score", "note"]
NORMALIZATION_NOTE = "bands min-max normalised to [0,1] per band before SSIM against the mask"


@dataclass(frozen=True)
class PairedDataset:
    """(rain, clean) file pairs matched by filename stem."""

    pairs: tuple

    @property
    def count(self):
        return len(self.pairs)

    @classmethod
    def from_dirs(cls, rain_dir, clean_dir):
        def index(d):
            found = {}
            for name in sorted(os.listdir(d)):
                stem, ext = os.path.splitext(name)
                if ext.lower() in IMAGE_EXTENSIONS:
                    found[stem] = os.path.join(d, name)
            return found

        rain, clean = index(rain_dir), index(clean_dir)
        for stem in sorted(set(rain) ^ set(clean)):
            log.warning("skipping %r: no counterpart in the other folder", stem)
        pairs = tuple((rain[s], clean[s]) for s in sorted(set(rain) & set(clean)))
        return cls(pairs)

    def load(self, i):
        rain_path, clean_path = self.pairs[i]
        rain, clean = load_image(rain_path), load_image(clean_path)
        if rain.shape != clean.shape:
            raise DatasetError(
                f"{rain_path} is {rain.shape}, {clean_path} is {clean.shape}")
        return rain, clean


def _feasible_levels(h, w, max_level):
    # a level needs at least a 2x2 band to halve
    n = 0
    while n < max_level and min(h, w) >= 2:
        n += 1
        h, w = -(-h // 2), -(-w // 2)
    return n


def _channel_ssim(a, b):
    return float(np.mean([ssim_gray(a[:, :, c], b[:, :, c]) for c in range(a.shape[2])]))


def _level_rows(rain, clean, max_level, cfg, name):
    levels = _feasible_levels(rain.shape[0], rain.shape[1], min(max_level, MAX_LEVELS))
    rows = []
    if levels:
        cfg = replace(cfg, levels=levels)
        # The chain is hierarchical: the semantic band after l levels does
        # not depend on deeper levels, so one decomposition serves them all.
        ss_rain = ct_forward(rain, cfg).ss_chain
        ss_clean = ct_forward(clean, cfg).ss_chain
        for lvl, (a, b) in enumerate(zip(ss_rain, ss_clean), start=1):
            small = min(a.shape[:2]) < SSIM_WINDOW
            rows.append({
                "kind": "image", "image": name, "level": lvl,
                "ss_h": a.shape[0], "ss_w": a.shape[1],
                "mse": mse(a, b),
                "ssim": None if small else _channel_ssim(a, b),
                "ssim_skipped": small, "note": "",
            })
    return rows, levels


def run_level_study(ds, max_level, cfg=None, threads=1):
    """Semantic-band MSE / SSIM between rain and clean images per level.

    Emits one row per image and level, then one aggregate (mean) row per
    level. SSIM is skipped, and flagged, once the band is smaller than the
    SSIM window. Levels that cannot be reached because the band is already
    1 pixel high or wide are replaced by a single warning row.
    """
    if max_level < 1:
        raise DatasetError(f"max_level must be at least 1, got {max_level}")
    if ds.count == 0:
        raise DatasetError("dataset is empty")
    cfg = CtConfig(levels=1) if cfg is None else cfg
    max_level = int(max_level)

    def work(i):
        rain, clean = ds.load(i)
        name = os.path.splitext(os.path.basename(ds.pairs[i][0]))[0]
        return _level_rows(rain, clean, max_level, cfg, name)

    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as pool:
        results = list(pool.map(work, range(ds.count)))
    rows = [r for image_rows, _ in results for r in image_rows]
    reached = min(levels for _, levels in results)
    for lvl in range(1, reached + 1):
        at = [r for r in rows if r["level"] == lvl]
        ssims = [r["ssim"] for r in at if r["ssim"] is not None]
        rows.append({
            "kind": "aggregate", "image": "*", "level": lvl,
            "ss_h": at[0]["ss_h"], "ss_w": at[0]["ss_w"],
            "mse": float(np.mean([r["mse"] for r in at])),
            "ssim": float(np.mean(ssims)) if len(ssims) == len(at) else None,
            "ssim_skipped": len(ssims) != len(at), "note": "",
        })
    if reached < max_level:
        rows.append({
            "kind": "warning", "image": "*", "level": reached + 1,
            "ss_h": None, "ss_w": None, "mse": None, "ssim": None, "ssim_skipped": True,
            "note": f"no further level possible; stopped after level {reached}",
        })
    return rows


def minmax_normalize(band):
    band = np.asarray(band, dtype=np.float64)
    lo, hi = band.min(), band.max()
    if hi <= lo:
        return np.zeros_like(band)
    return (band - lo) / (hi - lo)


def _upsample_nearest(band, h, w):
    return np.repeat(np.repeat(band, 2, axis=0), 2, axis=1)[:h, :w]


def run_extraction_compare(clean, rain, mask, cfg=None, hl_sigma=2.0):
    """Score each extractor's bands against the ground-truth streak mask.

    All bands come from the luma of ``rain``. Contourlet rows cover every
    level-1 direction subband and every unordered pair of them summed; Haar
    rows cover the three detail bands (nearest-upsampled to full size); the
    high/low split contributes its high band. Each method's best score is
    reported in a ``best`` row unless the mask is empty, in which case a
    ``degenerate`` row replaces the ranking.
    """
    cfg = CtConfig() if cfg is None else cfg
    clean, rain, mask = as_image(clean), as_image(rain), as_image(mask)
    if mask.shape[2] != 1:
        raise ShapeError(f"mask must have one channel, got {mask.shape[2]}")
    if not clean.shape[:2] == rain.shape[:2] == mask.shape[:2]:
        raise ShapeError("clean, rain and mask must share height and width")
    y = to_luma(rain)[:, :, 0]
    m = mask[:, :, 0]
    h, w = y.shape

    def score(band):
        return ssim_gray(m, minmax_normalize(band))

    rows = []
    dec = ct_forward(y, replace(cfg, levels=1))
    subs = [b[:h, :w, 0] for b in dec.ms[0]]
    for d, band in enumerate(subs):
        rows.append({"method": "CT", "band": f"d{d:02d}", "kind": "single", "score": score(band)})
    for i, j in combinations(range(len(subs)), 2):
        rows.append({"method": "CT", "band": f"d{i:02d}+d{j:02d}", "kind": "pair",
                     "score": score(subs[i] + subs[j])})

    quad = dwt_haar_forward(y)
    for name, band in quad.details().items():
        rows.append({"method": "DWT", "band": name, "kind": "single",
                     "score": score(_upsample_nearest(band[:, :, 0], h, w))})

    rows.append({"method": "HL", "band": "high", "kind": "single",
                 "score": score(hl_split(y, hl_sigma).high[:, :, 0])})

    if m.max() <= 0:
        rows.append({"method": "*", "band": "*", "kind": "degenerate", "score": None,
                     "note": "mask is empty; methods are not ranked"})
    else:
        for method in ("CT", "DWT", "HL"):
            best = max((r for r in rows if r["method"] == method), key=lambda r: r["score"])
            rows.append({"method": method, "band": best["band"], "kind": "best",
                         "score": best["score"]})
    rows.append({"method": "*", "band": "*", "kind": "meta", "score": None,
                 "note": NORMALIZATION_NOTE})
    for r in rows:
        r.setdefault("note", "")
    return rows


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            return str(v)
        return format(v, ".9g")
    if v is None:
        return ""
    return str(v)


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return float(format(v, ".9g")) if math.isfinite(v) else str(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def emit_report(rows, path, fmt=None, columns=None):
    """Write study rows as CSV (RFC 4180) or as a JSON array of objects.

    ``fmt`` defaults to the file extension. Floats carry 9 significant
    digits.
    """
    if fmt is None:
        fmt = "json" if str(path).lower().endswith(".json") else "csv"
    if columns is None:
        columns = []
        for r in rows:
            columns.extend(k for k in r if k not in columns)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\r\n")
            writer.writerow(columns)
            for r in rows:
                writer.writerow([_fmt(r.get(c)) for c in columns])
    elif fmt == "json":
        data = [{c: _json_value(r.get(c)) for c in columns} for r in rows]
        with open(path, "w") as fh:
            json.dump(data, fh, indent=1)
            fh.write("\n")
    else:
        raise ValueError(f"unknown report format {fmt!r}")
