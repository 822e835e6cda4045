"""Quality metrics on a ladder of increasingly degraded images."""

import numpy as np

from contourlet_rain.metrics import ciede2000_lab, compare
from contourlet_rain.rainsynth import synthetic_scene

clean = synthetic_scene(64, 64, seed=5)
noise = np.random.default_rng(5).standard_normal(clean.shape)

print(f"{'noise':>6} {'mse':>10} {'psnr':>8} {'ssim':>7} {'dE00':>7}")
for amp in (0.0, 0.01, 0.03, 0.1, 0.3):
    rep = compare(clean, np.clip(clean + amp * noise, 0, 1))
    print(f"{amp:>6} {rep.mse:>10.2e} {rep.psnr:>8.2f} {rep.ssim:>7.4f} {rep.ciede2000:>7.3f}")

# one pair from the published CIEDE2000 verification data
print("dE00((50, 2.6772, -79.7751), (50, 0, -82.7485)) =",
      round(float(ciede2000_lab([50, 2.6772, -79.7751], [50, 0, -82.7485])), 4))
