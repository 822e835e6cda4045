import json
import subprocess
import sys

import numpy as np
import pytest

from contourlet_rain import __version__
from contourlet_rain.cli import main
from contourlet_rain.imagecore import load_image, save_image
from contourlet_rain.rainsynth import synthetic_scene


@pytest.fixture
def scene(tmp_path):
    path = tmp_path / "clean.png"
    save_image(synthetic_scene(48, 40, 2), path)
    return path


def _error_line(capsys):
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1
    return err[0]


def test_decompose_reconstruct(tmp_path, scene):
    out = tmp_path / "bands"
    assert main(["decompose", str(scene), "--out", str(out), "--levels", "3", "--dirs", "8"]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["levels"] == 3 and len(manifest["bands"]) == 3 + 24
    assert main(["reconstruct", str(out), "--out", str(tmp_path / "back.png")]) == 0
    assert np.array_equal(load_image(tmp_path / "back.png"), load_image(scene))


def test_synth_rain_heavy(tmp_path, scene):
    out = tmp_path / "rain"
    argv = ["synth-rain", str(scene), "--mode", "heavy", "--out", str(out), "--layers", "2",
            "--angle", "20", "--seed", "7", "--depth", "radial"]
    assert main(argv) == 0
    assert sorted(p.name for p in out.iterdir()) == ["mask.png", "params.json", "rain.png",
                                                     "t.png"]
    params = json.loads((out / "params.json").read_text())
    assert [l["stream"] for l in params["layers"]] == [0, 1]
    assert params["rng"].startswith("numpy.random.Philox")
    assert params["depth"] == "radial"


def test_synth_rain_moderate(tmp_path, scene):
    out = tmp_path / "rain"
    assert main(["synth-rain", str(scene), "--mode", "moderate", "--out", str(out)]) == 0
    assert not (out / "t.png").exists()


def test_metrics_json(scene, capsys):
    assert main(["metrics", str(scene), str(scene), "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["mse"] == 0 and report["psnr"] == "inf" and report["ciede2000"] == 0


def test_metrics_text(tmp_path, scene, capsys):
    other = tmp_path / "other.png"
    save_image(np.clip(load_image(scene) + 0.1, 0, 1), other)
    assert main(["metrics", str(scene), str(other)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [l.split(":")[0] for l in lines] == ["mse", "psnr", "ssim", "ciede2000"]


def test_dataset_and_level_study(tmp_path):
    data = tmp_path / "data"
    assert main(["synth-dataset", "--out", str(data), "--count", "2", "--size", "64"]) == 0
    report = tmp_path / "levels.json"
    assert main(["--threads", "2", "level-study", "--rain-dir", str(data / "rain"),
                 "--clean-dir", str(data / "clean"), "--max-level", "3",
                 "--out", str(report)]) == 0
    rows = json.loads(report.read_text())
    assert [r["kind"] for r in rows].count("aggregate") == 3


def test_extract_compare(tmp_path, scene):
    rain_dir = tmp_path / "rain"
    main(["synth-rain", str(scene), "--out", str(rain_dir), "--angle", "30", "--density", "4"])
    report = tmp_path / "cmp.csv"
    assert main(["extract-compare", "--clean", str(scene), "--rain", str(rain_dir / "rain.png"),
                 "--mask", str(rain_dir / "mask.png"), "--out", str(report)]) == 0
    lines = report.read_text().splitlines()
    assert lines[0] == "method,band,kind,score,note"
    assert sum(1 for l in lines if ",best," in l) == 3


@pytest.mark.parametrize("argv,code", [
    (["metrics", "nope.png", "nope.png"], "E_DECODE"),
    (["decompose", "nope.png", "--out", "x", "--dirs", "12"], "E_DECODE"),
    (["reconstruct", "missing_dir", "--out", "x.png"], "E_MANIFEST"),
])
def test_error_codes(tmp_path, monkeypatch, capsys, argv, code):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 2
    assert _error_line(capsys).startswith(code + ": ")


def test_config_error_code(tmp_path, scene, capsys):
    assert main(["decompose", str(scene), "--out", str(tmp_path / "o"), "--dirs", "12"]) == 2
    assert _error_line(capsys).startswith("E_CONFIG: ")


def test_small_image_metrics(tmp_path, capsys):
    p = tmp_path / "tiny.png"
    save_image(np.zeros((5, 5, 3)), p)
    assert main(["metrics", str(p), str(p)]) == 2
    assert _error_line(capsys).startswith("E_CONFIG: ")


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["synth-rain"])
    assert exc.value.code == 2
    assert _error_line(capsys).startswith("E_USAGE: ")
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "contourlet_rain", "--version"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == __version__
