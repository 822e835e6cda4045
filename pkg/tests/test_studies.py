import csv
import json
import logging

import numpy as np
import pytest

from contourlet_rain.contourlet import CtConfig
from contourlet_rain.errors import ConfigError, DatasetError, ShapeError
from contourlet_rain.imagecore import save_image
from contourlet_rain.rainsynth import StreakLayerParams, apply_moderate, synthetic_scene
from contourlet_rain.studies import (
    COMPARE_COLUMNS,
    LEVEL_COLUMNS,
    PairedDataset,
    emit_report,
    minmax_normalize,
    run_extraction_compare,
    run_level_study,
)


def _write_pairs(tmp_path, images, rain_images=None):
    rain_dir, clean_dir = tmp_path / "rain", tmp_path / "clean"
    rain_dir.mkdir()
    clean_dir.mkdir()
    for k, img in enumerate(images):
        save_image(img, clean_dir / f"{k:03d}.png")
        save_image(img if rain_images is None else rain_images[k], rain_dir / f"{k:03d}.png")
    return rain_dir, clean_dir


def test_identical_pairs(tmp_path, rng):
    rain_dir, clean_dir = _write_pairs(tmp_path, [rng.random((128, 128, 3)) for _ in range(2)])
    rows = run_level_study(PairedDataset.from_dirs(rain_dir, clean_dir), 3, CtConfig(1, 8))
    assert len(rows) == 2 * 3 + 3
    assert all(r["mse"] == 0 for r in rows)
    assert all(r["ssim"] == pytest.approx(1.0, abs=1e-12) for r in rows)
    assert [r["kind"] for r in rows[-3:]] == ["aggregate"] * 3
    assert [r["ss_h"] for r in rows[:3]] == [64, 32, 16]


def test_small_band_ssim_flagged(tmp_path, rng):
    rain_dir, clean_dir = _write_pairs(tmp_path, [rng.random((40, 40))])
    rows = run_level_study(PairedDataset.from_dirs(rain_dir, clean_dir), 3, CtConfig(1, 4))
    image_rows = [r for r in rows if r["kind"] == "image"]
    assert [r["ssim_skipped"] for r in image_rows] == [False, True, True]
    assert image_rows[1]["ssim"] is None


def test_truncation_warning(tmp_path, rng):
    rain_dir, clean_dir = _write_pairs(tmp_path, [rng.random((8, 8))])
    rows = run_level_study(PairedDataset.from_dirs(rain_dir, clean_dir), 6, CtConfig(1, 4))
    assert rows[-1]["kind"] == "warning" and rows[-1]["level"] == 4
    assert max(r["level"] for r in rows if r["kind"] == "image") == 3


def test_dataset_errors(tmp_path, rng, caplog):
    rain_dir, clean_dir = _write_pairs(tmp_path, [rng.random((16, 16))])
    save_image(rng.random((16, 16)), rain_dir / "orphan.png")
    with caplog.at_level(logging.WARNING):
        ds = PairedDataset.from_dirs(rain_dir, clean_dir)
    assert ds.count == 1 and "orphan" in caplog.text
    save_image(rng.random((16, 17)), rain_dir / "000.png")
    with pytest.raises(DatasetError):
        run_level_study(ds, 2)
    with pytest.raises(DatasetError):
        run_level_study(PairedDataset(()), 2)
    with pytest.raises(DatasetError):
        run_level_study(ds, 0)


def test_thread_count_does_not_change_rows(tmp_path, rng):
    imgs = [rng.random((32, 32, 3)) for _ in range(5)]
    rain = [np.clip(i + 0.1, 0, 1) for i in imgs]
    ds = PairedDataset.from_dirs(*_write_pairs(tmp_path, imgs, rain))
    assert run_level_study(ds, 3, threads=1) == run_level_study(ds, 3, threads=4)


def test_minmax_normalize():
    np.testing.assert_array_equal(minmax_normalize(np.array([-1.0, 0.0, 3.0])), [0, 0.25, 1])
    assert not minmax_normalize(np.full(4, 2.0)).any()


def test_degenerate_mask(rng):
    clean = rng.random((32, 32, 3))
    rows = run_extraction_compare(clean, clean, np.zeros((32, 32, 1)), CtConfig(1, 8))
    kinds = [r["kind"] for r in rows]
    assert "degenerate" in kinds and "best" not in kinds
    assert kinds[-1] == "meta"


def test_compare_row_inventory(rng):
    clean = synthetic_scene(48, 48, 0)
    rain, mask = apply_moderate(clean, [StreakLayerParams(angle=30, density=3, seed=0)])
    rows = run_extraction_compare(clean, rain, mask, CtConfig(1, 16))
    by = lambda m, k: [r for r in rows if r["method"] == m and r["kind"] == k]
    assert len(by("CT", "single")) == 16 and len(by("CT", "pair")) == 120
    assert [r["band"] for r in by("DWT", "single")] == ["lh", "hl", "hh"]
    assert len(by("HL", "single")) == 1
    for method in ("CT", "DWT", "HL"):
        best, = by(method, "best")
        pool = [r["score"] for r in rows if r["method"] == method and r["kind"] != "best"]
        assert best["score"] == max(pool)


def test_vertical_streaks_pick_vertical_wedge():
    clean = np.full((64, 64, 3), 0.3)
    rain, mask = apply_moderate(clean, [StreakLayerParams(angle=0, length=31, density=4,
                                                          intensity=0.7, seed=5)])
    rows = run_extraction_compare(clean, rain, mask, CtConfig(1, 8))
    singles = [r for r in rows if r["method"] == "CT" and r["kind"] == "single"]
    winner = max(singles, key=lambda r: r["score"])
    assert winner["band"] == "d00"


def test_compare_errors(rng):
    x = rng.random((32, 32, 3))
    with pytest.raises(ShapeError):
        run_extraction_compare(x, x, x)
    with pytest.raises(ShapeError):
        run_extraction_compare(x, x, x[:16, :, :1])
    with pytest.raises(ConfigError):
        run_extraction_compare(x[:8, :8], x[:8, :8], x[:8, :8, :1])


def test_emit_empty_csv(tmp_path):
    emit_report([], tmp_path / "r.csv", columns=LEVEL_COLUMNS)
    assert (tmp_path / "r.csv").read_bytes() == (",".join(LEVEL_COLUMNS) + "\r\n").encode()


def test_emit_one_row_csv(tmp_path):
    row = {"method": "CT", "band": "d00+d01", "kind": "pair", "score": 1 / 3,
           "note": 'has, comma "quoted"'}
    emit_report([row], tmp_path / "r.csv", columns=COMPARE_COLUMNS)
    lines = (tmp_path / "r.csv").read_bytes().split(b"\r\n")
    assert lines[-1] == b"" and len(lines) == 3
    with open(tmp_path / "r.csv", newline="") as fh:
        parsed = list(csv.DictReader(fh))
    assert parsed[0]["score"] == "0.333333333"
    assert parsed[0]["note"] == row["note"]


def test_emit_json_roundtrip(tmp_path):
    rows = [{"kind": "image", "image": "a", "level": 1, "ss_h": 4, "ss_w": 4, "mse": 0.125,
             "ssim": None, "ssim_skipped": True, "note": ""}]
    emit_report(rows, tmp_path / "r.json", columns=LEVEL_COLUMNS)
    assert json.loads((tmp_path / "r.json").read_text()) == rows


def test_emit_unwritable(tmp_path):
    with pytest.raises(OSError):
        emit_report([], tmp_path / "missing" / "r.csv")
