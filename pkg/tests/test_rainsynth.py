import math

import numpy as np
import pytest

from contourlet_rain.errors import ConfigError, ShapeError
from contourlet_rain.rainsynth import (
    StreakLayerParams,
    VeilParams,
    apply_heavy,
    apply_moderate,
    bevelled_rain_scene,
    depth_map,
    gen_streak_layer,
    gen_transmission,
    heavy_rain_pair,
    streak_segments,
)


def _single_streak_seed(h, w, p):
    for seed in range(1000):
        q = StreakLayerParams(**{**p.__dict__, "seed": seed})
        if len(streak_segments(h, w, q)[0]) == 1:
            return q
    raise AssertionError("no single-streak seed found")


def test_tiny_density_gives_empty_mask():
    p = StreakLayerParams(density=1e-6, seed=3)
    assert len(streak_segments(32, 32, p)[0]) == 0
    assert not gen_streak_layer(32, 32, p).any()


def test_deterministic():
    p = StreakLayerParams(angle=20, density=5, seed=11, stream=2)
    a, b = gen_streak_layer(40, 50, p), gen_streak_layer(40, 50, p)
    assert a.tobytes() == b.tobytes()
    other = gen_streak_layer(40, 50, StreakLayerParams(angle=20, density=5, seed=11, stream=3))
    assert not np.array_equal(a, other)


def test_layer_range():
    m = gen_streak_layer(64, 64, StreakLayerParams(angle=-30, width=2.5, density=8, seed=1))
    assert m.shape == (64, 64, 1)
    assert m.min() >= 0 and m.max() <= 1 and m.max() > 0


def test_geometric_oracle():
    h = w = 40
    p = _single_streak_seed(h, w, StreakLayerParams(angle=0, length=9, width=1, density=1.0))
    (x0, y0, x1, y1), = streak_segments(h, w, p)[0]
    assert x0 == pytest.approx(x1) and abs(y1 - y0) == pytest.approx(8)
    m = gen_streak_layer(h, w, p)[:, :, 0]
    ys, xs = np.nonzero(m)
    assert len(ys) > 0
    for y, x in zip(ys, xs):
        t = min(max((y - y0) / (y1 - y0), 0.0), 1.0)
        dist = math.hypot(x - x0, y - (y0 + t * (y1 - y0)))
        assert dist < 1.0
    # pixels on the segment axis inside the raster are fully covered
    j = int(round(x0))
    if abs(j - x0) < 1e-9:
        for i in range(max(int(math.ceil(min(y0, y1))), 0), min(int(max(y0, y1)), h - 1) + 1):
            assert m[i, j] > 0


def test_params_validation():
    with pytest.raises(ConfigError):
        StreakLayerParams(angle=60)
    with pytest.raises(ConfigError):
        StreakLayerParams(density=0)
    with pytest.raises(ConfigError):
        StreakLayerParams(intensity=1.5)
    with pytest.raises(ConfigError):
        VeilParams(beta=-1, depth=np.ones((2, 2)))
    with pytest.raises(ConfigError):
        VeilParams()


def test_degenerate_dims():
    with pytest.raises(ShapeError):
        gen_streak_layer(0, 10, StreakLayerParams())


def test_moderate_examples(rng):
    clean = rng.random((24, 24, 3))
    rain, mask = apply_moderate(clean, [])
    assert np.array_equal(rain, clean) and not mask.any()

    layer = StreakLayerParams(density=10, seed=4)
    rain, mask = apply_moderate(np.zeros((24, 24, 1)), [layer])
    assert np.array_equal(rain, mask)

    rain, _ = apply_moderate(np.ones((24, 24, 3)), [layer])
    assert np.all(rain == 1.0)


def test_mask_clamped_after_sum():
    layers = [StreakLayerParams(density=40, intensity=1.0, seed=1, stream=s) for s in range(3)]
    _, mask = apply_moderate(np.zeros((32, 32)), layers)
    assert mask.max() == 1.0 and mask.min() >= 0


def test_transmission_examples():
    d = np.ones((4, 5, 1))
    assert np.all(gen_transmission(VeilParams(beta=0.0, depth=d)) == 1.0)
    np.testing.assert_allclose(gen_transmission(VeilParams(beta=math.log(2), depth=d)), 0.5,
                               rtol=1e-15)
    t = gen_transmission(VeilParams(beta=1.0, depth=depth_map(10, 3, "ramp")))[:, 0, 0]
    assert np.all(np.diff(t) > 0)  # depth falls down the image, so T rises


def test_transmission_monotone_in_beta():
    d = depth_map(16, 16, "radial")
    prev = None
    for beta in (0.0, 0.1, 0.5, 1.0, 2.0, 5.0):
        t = gen_transmission(VeilParams(beta=beta, depth=d))
        if prev is not None:
            assert np.all(t <= prev)
        prev = t


def test_heavy_reduces_to_moderate(rng):
    clean = rng.random((30, 30, 3))
    layers = [StreakLayerParams(angle=10, density=6, seed=2)]
    mod_rain, mod_mask = apply_moderate(clean, layers)
    rain, mask, t = apply_heavy(clean, layers, VeilParams(0.8, 0.0, depth_map(30, 30)))
    assert np.all(t == 1.0)
    assert rain.tobytes() == mod_rain.tobytes() and mask.tobytes() == mod_mask.tobytes()


def test_heavy_zero_transmission(rng):
    clean = rng.random((12, 12, 3))
    layers = [StreakLayerParams(density=6, seed=2)]
    # exp(-800) underflows to exactly zero
    rain, _, _ = apply_heavy(clean, layers, VeilParams(0.3, 800.0, np.ones((12, 12))))
    assert np.all(rain == 0.3)


def test_heavy_half_transmission():
    d = np.ones((8, 8))
    layers = [StreakLayerParams(density=1e-6)]
    rain, _, _ = apply_heavy(np.zeros((8, 8)), layers, VeilParams(1.0, math.log(2), d))
    np.testing.assert_allclose(rain, 0.5, rtol=1e-15)


def test_heavy_shape_mismatch():
    with pytest.raises(ShapeError):
        apply_heavy(np.zeros((8, 8)), [], VeilParams(0.5, 1.0, np.ones((8, 9))))


def test_depth_maps():
    assert depth_map(5, 4, "const", 0.3).max() == 0.3
    r = depth_map(9, 9, "radial")[:, :, 0]
    assert r[4, 4] == 1.0 and r.min() == 0.0
    with pytest.raises(ConfigError):
        depth_map(4, 4, "spiral")


def test_study_scenes_deterministic():
    a = heavy_rain_pair(3, size=48)
    b = heavy_rain_pair(3, size=48)
    for x, y in zip(a, b):
        assert x.tobytes() == y.tobytes()
    clean, rain, mask = bevelled_rain_scene(1, size=48)
    assert mask.shape == (48, 48, 1) and rain.shape == clean.shape == (48, 48, 3)
    assert 0 <= rain.min() and rain.max() <= 1
