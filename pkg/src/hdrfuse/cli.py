"""Command-line interface: ``hdrfuse {fuse,select-exposures,simulate-bracket,bench-scaling,bench-backends}``.

Exit status: 0 success, 1 I/O failure, 2 invalid input.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from hdrfuse import kernels
from hdrfuse.bench import (
    DEFAULT_SIZES,
    bench_backends,
    bench_scaling,
    format_backends,
    format_scaling,
    write_scaling_csv,
)
from hdrfuse.bracket_sim import SCENES, CameraResponse, IrradianceMap, expose, make_test_scene
from hdrfuse.clustering import cluster_luminance
from hdrfuse.exposure import TARGET_GRAY, CharacteristicFn, CharacteristicFnError, select_exposures
from hdrfuse.image_core import ImageIOError, load_image, rgb_to_ycbcr, save_image
from hdrfuse.pipeline import FAST_S_G, FusionConfig, fuse_images

log = logging.getLogger("hdrfuse")

EXIT_OK = 0
EXIT_IO = 1
EXIT_INVALID = 2

BRACKET_NAMES = ("under.png", "normal.png", "over.png")


class ValidationError(Exception):
    pass


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def cmd_fuse(args) -> int:
    imgs = [load_image(p) for p in (args.under, args.normal, args.over)]
    shapes = {im.shape for im in imgs}
    if len(shapes) != 1:
        raise ValidationError(f"input images differ in size: {sorted(shapes)}")
    s_g = args.s_g if args.s_g is not None else (FAST_S_G if args.fast else 0)
    try:
        cfg = FusionConfig(s_lambda=args.s_lambda, guided_r=args.guided_r, guided_eps=args.guided_eps, s_g=s_g)
        cfg.guided  # validates filter parameters
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    out = fuse_images(*imgs, cfg)
    save_image(args.output, out)
    log.info("wrote %s (%dx%d)", args.output, out.shape[1], out.shape[0])
    return EXIT_OK


def cmd_select_exposures(args) -> int:
    if not args.t_auto > 0:
        raise ValidationError("--t-auto must be positive")
    try:
        cf = CharacteristicFn.load(args.cf) if args.cf else CharacteristicFn.default()
    except OSError as exc:
        raise ImageIOError(f"cannot read characteristic function: {exc}") from exc
    except CharacteristicFnError as exc:
        raise ValidationError(str(exc)) from exc
    img = load_image(args.image)
    maps = cluster_luminance(rgb_to_ycbcr(img).y)
    triple = select_exposures(maps, args.t_auto, cf, args.target_gray, third_stops=args.third_stops)
    for w in triple.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"t_ue {triple.t_ue:.9g}")
    print(f"t_ne {triple.t_ne:.9g}")
    print(f"t_oe {triple.t_oe:.9g}")
    return EXIT_OK


def cmd_simulate_bracket(args) -> int:
    times = args.times
    if len(times) != 3 or any(t <= 0 for t in times):
        raise ValidationError("--times needs three positive exposure times (under,normal,over)")
    if sorted(times) != times:
        raise ValidationError("--times must be ascending: under <= normal <= over")
    try:
        if args.pfm:
            scene = IrradianceMap.from_pfm(args.pfm)
        else:
            scene = make_test_scene(args.scene, args.width, args.height)
        resp = CameraResponse(gamma=args.gamma)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ImageIOError(f"cannot create {out}: {exc}") from exc
    for i, (name, t) in enumerate(zip(BRACKET_NAMES, times)):
        seed = None if args.seed is None else args.seed + i
        save_image(out / name, expose(scene, t, resp, args.noise, seed))
        print(out / name)
    return EXIT_OK


def cmd_bench_scaling(args) -> int:
    sizes = args.sizes
    if not sizes or sorted(sizes) != sizes or any(n < 64 for n in sizes):
        raise ValidationError("--sizes must be ascending, each >= 64")
    fit = bench_scaling(sizes, repeats=args.repeats)
    print(f"backend: {kernels.backend_name()}")
    print(format_scaling(fit))
    if args.csv:
        write_scaling_csv(args.csv, fit)
    return EXIT_OK


def cmd_bench_backends(args) -> int:
    if args.size < 16:
        raise ValidationError("--size must be >= 16")
    print(format_backends(bench_backends(args.size, args.repeats), args.size))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hdrfuse", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--backend", choices=kernels.available_backends(), help="kernel backend (default: compiled if built)")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("fuse", help="fuse an under/normal/over exposure bracket")
    f.add_argument("under")
    f.add_argument("normal")
    f.add_argument("over")
    f.add_argument("-o", "--output", required=True)
    f.add_argument("--s-lambda", type=float, default=2.0, help="lambda = diagonal / 2**s_lambda (default 2)")
    f.add_argument("--fast", action="store_true", help=f"guided filter on maps down-sampled by 2**{FAST_S_G}")
    f.add_argument("--guided-r", type=int, default=1)
    f.add_argument("--guided-eps", type=float, default=1.0)
    f.add_argument("--s-g", type=int, default=None, help="guided-filter down-sample exponent (overrides --fast)")
    f.set_defaults(func=cmd_fuse)

    s = sub.add_parser("select-exposures", help="compute bracket exposure times from an auto-exposed frame")
    s.add_argument("image")
    s.add_argument("--cf", help="characteristic function table ('log2_time gray' per line); built-in curve if omitted")
    s.add_argument("--t-auto", type=float, required=True, help="auto exposure time in seconds")
    s.add_argument("--target-gray", type=float, default=TARGET_GRAY)
    s.add_argument("--third-stops", action="store_true", help="round shifts to 1/3-stop steps")
    s.set_defaults(func=cmd_select_exposures)

    b = sub.add_parser("simulate-bracket", help="render a synthetic exposure bracket")
    b.add_argument("--scene", choices=SCENES, default="split-window")
    b.add_argument("--pfm", help="irradiance map (PFM) instead of a procedural scene")
    b.add_argument("--width", type=int, default=512)
    b.add_argument("--height", type=int, default=512)
    b.add_argument("--times", type=_float_list, required=True, help="t_under,t_normal,t_over in seconds")
    b.add_argument("--gamma", type=float, default=2.2)
    b.add_argument("--noise", type=float, default=0.0, help="Gaussian noise sigma in gray levels")
    b.add_argument("--seed", type=int, default=None)
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_simulate_bracket)

    c = sub.add_parser("bench-scaling", help="fit runtime to C * N^2 log N")
    c.add_argument("--sizes", type=_int_list, default=list(DEFAULT_SIZES))
    c.add_argument("--repeats", type=int, default=3)
    c.add_argument("--csv")
    c.set_defaults(func=cmd_bench_scaling)

    k = sub.add_parser("bench-backends", help="compare compiled and numpy kernels")
    k.add_argument("--size", type=int, default=512)
    k.add_argument("--repeats", type=int, default=3)
    k.set_defaults(func=cmd_bench_backends)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.backend:
        kernels.set_backend(args.backend)
    try:
        return args.func(args)
    except (ImageIOError, OSError) as exc:
        print(f"hdrfuse: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValidationError, ValueError) as exc:
        print(f"hdrfuse: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
