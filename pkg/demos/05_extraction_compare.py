"""Which extractor's bands best line up with a known streak mask?

Scores every level-1 contourlet subband (and every pair of them), the three
Haar detail bands and the high band of a gaussian high/low split against
the streak mask of a slanted-rain scene.
"""

from contourlet_rain import CtConfig
from contourlet_rain.rainsynth import bevelled_rain_scene
from contourlet_rain.studies import run_extraction_compare

clean, rain, mask = bevelled_rain_scene(seed=0, size=128, angle=30.0)
rows = run_extraction_compare(clean, rain, mask, CtConfig(1, 16))

for r in rows:
    if r["kind"] == "best":
        print(f"{r['method']:>4}: best band {r['band']:<8} SSIM vs mask {r['score']:.3f}")
singles = sorted((r for r in rows if r["method"] == "CT" and r["kind"] == "single"),
                 key=lambda r: -r["score"])
print("top contourlet directions:", ", ".join(f"{r['band']} ({r['score']:.3f})"
                                              for r in singles[:3]))
print(rows[-1]["note"])
