"""Command-line front end.

Every failure exits with status 2 and prints exactly one line of the form
``E_CODE: message`` to stderr.
"""

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import asdict

from . import __version__
from .contourlet import CtConfig, ct_forward, ct_inverse, deserialize_decomposition, serialize_decomposition
from .errors import ContourletRainError
from .imagecore import load_image, save_image
from .metrics import compare
from .rainsynth import (
    RNG_NAME,
    StreakLayerParams,
    VeilParams,
    apply_heavy,
    apply_moderate,
    depth_map,
    heavy_rain_pair,
)
from .studies import (
    COMPARE_COLUMNS,
    LEVEL_COLUMNS,
    PairedDataset,
    emit_report,
    run_extraction_compare,
    run_level_study,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"E_USAGE: {message}\n")


def _ct_config(args, levels=None):
    return CtConfig(levels=levels if levels is not None else args.levels,
                    num_directions=args.dirs, transition_frac=args.transition)


def cmd_decompose(args):
    img = load_image(args.input)
    dec = ct_forward(img, _ct_config(args))
    serialize_decomposition(dec, args.out)


def cmd_reconstruct(args):
    save_image(ct_inverse(deserialize_decomposition(args.dir)), args.out)


def cmd_synth_rain(args):
    clean = load_image(args.clean)
    layers = [
        StreakLayerParams(angle=args.angle, length=args.length, width=args.width,
                          density=args.density, intensity=args.intensity,
                          seed=args.seed, stream=i)
        for i in range(args.layers)
    ]
    os.makedirs(args.out, exist_ok=True)
    params = {
        "mode": args.mode,
        "clean": os.path.abspath(args.clean),
        "height": clean.shape[0],
        "width": clean.shape[1],
        "layers": [asdict(p) for p in layers],
        "rng": RNG_NAME,
        "clamping": "mask clamped to [0,1] after summing layers; rain clamped after "
                    "streak addition and again after veiling",
    }
    if args.mode == "moderate":
        rain, mask = apply_moderate(clean, layers)
    else:
        depth = depth_map(clean.shape[0], clean.shape[1], args.depth)
        veil = VeilParams(atmospheric_light=args.alight, beta=args.beta, depth=depth)
        rain, mask, t = apply_heavy(clean, layers, veil)
        save_image(t, os.path.join(args.out, "t.png"))
        params.update(beta=args.beta, atmospheric_light=args.alight, depth=args.depth)
    save_image(rain, os.path.join(args.out, "rain.png"))
    save_image(mask, os.path.join(args.out, "mask.png"))
    with open(os.path.join(args.out, "params.json"), "w") as fh:
        json.dump(params, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_synth_dataset(args):
    rain_dir = os.path.join(args.out, "rain")
    clean_dir = os.path.join(args.out, "clean")
    os.makedirs(rain_dir, exist_ok=True)
    os.makedirs(clean_dir, exist_ok=True)
    for seed in range(args.count):
        clean, rain, _ = heavy_rain_pair(seed, size=args.size)
        save_image(clean, os.path.join(clean_dir, f"{seed:04d}.png"))
        save_image(rain, os.path.join(rain_dir, f"{seed:04d}.png"))


def cmd_metrics(args):
    report = compare(load_image(args.a), load_image(args.b)).to_dict()
    if args.json:
        out = {k: (str(v) if isinstance(v, float) and math.isinf(v) else v)
               for k, v in report.items()}
        print(json.dumps(out, sort_keys=True))
    else:
        for k, v in report.items():
            print(f"{k}: {'n/a' if v is None else format(v, '.9g')}")


def cmd_level_study(args):
    ds = PairedDataset.from_dirs(args.rain_dir, args.clean_dir)
    cfg = _ct_config(args, levels=1)
    rows = run_level_study(ds, args.max_level, cfg, threads=args.threads)
    emit_report(rows, args.out, columns=LEVEL_COLUMNS)


def cmd_extract_compare(args):
    clean = load_image(args.clean)
    rain = load_image(args.rain)
    mask = load_image(args.mask)
    if mask.shape[2] == 3:
        mask = mask[:, :, :1]
    rows = run_extraction_compare(clean, rain, mask, _ct_config(args, levels=1),
                                  hl_sigma=args.hl_sigma)
    emit_report(rows, args.out, columns=COMPARE_COLUMNS)


def _add_ct_flags(p, levels=True):
    if levels:
        p.add_argument("--levels", type=int, default=4)
    p.add_argument("--dirs", type=int, default=16)
    p.add_argument("--transition", type=float, default=0.3)


def build_parser():
    parser = _Parser(prog="contourlet-rain", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--threads", type=int, default=1, help="worker threads for studies")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decompose", help="contourlet-decompose an image into a band directory")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    _add_ct_flags(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("reconstruct", help="invert a band directory back to an image")
    p.add_argument("dir")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("synth-rain", help="render synthetic rain over a clean image")
    p.add_argument("clean")
    p.add_argument("--mode", choices=("moderate", "heavy"), default="moderate")
    p.add_argument("--out", required=True)
    p.add_argument("--angle", type=float, default=0.0)
    p.add_argument("--length", type=float, default=15.0)
    p.add_argument("--width", type=float, default=1.0)
    p.add_argument("--density", type=float, default=2.0)
    p.add_argument("--intensity", type=float, default=0.6)
    p.add_argument("--layers", type=int, default=1)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--alight", type=float, default=0.8)
    p.add_argument("--depth", choices=("ramp", "radial", "const"), default="ramp")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth_rain)

    p = sub.add_parser("synth-dataset", help="write a synthetic heavy-rain paired dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--size", type=int, default=128)
    p.set_defaults(func=cmd_synth_dataset)

    p = sub.add_parser("metrics", help="MSE / PSNR / SSIM / CIEDE2000 between two images")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("level-study", help="semantic-band distance versus CT level")
    p.add_argument("--rain-dir", required=True)
    p.add_argument("--clean-dir", required=True)
    p.add_argument("--max-level", type=int, default=6)
    p.add_argument("--out", required=True, help="report path (.csv or .json)")
    _add_ct_flags(p, levels=False)
    p.set_defaults(func=cmd_level_study)

    p = sub.add_parser("extract-compare", help="CT vs DWT vs HL streak retrieval")
    p.add_argument("--clean", required=True)
    p.add_argument("--rain", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--hl-sigma", type=float, default=2.0)
    p.add_argument("--out", required=True, help="report path (.csv or .json)")
    _add_ct_flags(p, levels=False)
    p.set_defaults(func=cmd_extract_compare)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except ContourletRainError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"E_IO: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"E_VALUE: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
