"""Command-line front end.

    pasmef fuse DIR -o OUT.png [--metric] [--dump-weights] [...]
    pasmef score DIR FUSED.png
    pasmef evaluate ROOT -o OUTDIR
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
from pathlib import Path

from .core import FusionConfig, list_image_files, load_stack, read_image, write_png
from .errors import EmptyStack, PasMefError
from .metric import mef_ssim
from .pipeline import fuse_stack

logger = logging.getLogger("pasmef")

THREADS_ENV = "PASMEF_THREADS"


def _levels(text):
    if text == "auto":
        return "auto"
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("levels must be >= 1")
    return value


def _threads(text):
    if text == "auto":
        return os.cpu_count() or 1
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1")
    return value


def _add_fusion_flags(p):
    p.add_argument("--levels", type=_levels, default="auto", help="pyramid levels or 'auto'")
    p.add_argument("--gf-radius", type=int, default=8, help="guided filter radius (px)")
    p.add_argument("--gf-eps", type=float, default=0.01, help="guided filter regulariser")
    p.add_argument("--pca-sigma", type=float, default=2.0, dest="pca_smooth_sigma",
                   help="Gaussian sigma for PCA weight smoothing (px)")
    p.add_argument("--saliency-width", type=int, default=64, help="saliency working width (px)")
    p.add_argument("--threads", type=_threads, default=None,
                   help=f"worker threads or 'auto' (default: ${THREADS_ENV}, else auto)")


def build_parser():
    parser = argparse.ArgumentParser(prog="pasmef", description="Multi-exposure image fusion.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fuse", help="fuse one exposure stack")
    p.add_argument("input_dir", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True, dest="output_path")
    p.add_argument("--dump-weights", action="store_true",
                   help="write P, A, S, W maps as grayscale PNGs next to the output")
    p.add_argument("--metric", action="store_true", help="print the MEF-SSIM score")
    _add_fusion_flags(p)

    p = sub.add_parser("score", help="MEF-SSIM of an existing fused image")
    p.add_argument("input_dir", type=Path)
    p.add_argument("fused", type=Path)

    p = sub.add_parser("evaluate", help="fuse and score every stack under a root directory")
    p.add_argument("root", type=Path)
    p.add_argument("-o", "--output-dir", type=Path, required=True)
    _add_fusion_flags(p)
    return parser


def config_from_args(parser, args) -> FusionConfig:
    try:
        return FusionConfig(
            gf_radius=args.gf_radius,
            gf_eps=args.gf_eps,
            pca_smooth_sigma=args.pca_smooth_sigma,
            saliency_width=args.saliency_width,
            pyramid_levels=args.levels,
        )
    except ValueError as exc:
        parser.error(str(exc))


def resolve_threads(parser, requested):
    if requested is not None:
        return requested
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return _threads(env.strip())
        except argparse.ArgumentTypeError as exc:
            parser.error(f"{THREADS_ENV}: {exc}")
    return os.cpu_count() or 1


def weights_dir(output_path: Path) -> Path:
    return output_path.with_name(output_path.stem + "_weights")


def dump_weights(output_path: Path, result, names=()):
    from .report import weights_overview

    out = weights_dir(output_path)
    out.mkdir(parents=True, exist_ok=True)
    for label, maps in (("P", result.pca), ("A", result.exposedness),
                        ("S", result.saliency), ("W", result.weights)):
        for n, m in enumerate(maps, start=1):
            write_png(out / f"{label}_{n:02d}.png", m)
    figure = output_path.with_name(output_path.stem + "_weights_overview.png")
    weights_overview(figure, result.pca, result.exposedness, result.saliency,
                     result.weights, names=names)
    return out


def cmd_fuse(parser, args) -> int:
    config = config_from_args(parser, args)
    threads = resolve_threads(parser, args.threads)
    stack = load_stack(args.input_dir, config)
    result = fuse_stack(stack, config, threads=threads)
    args.output_path.parent.mkdir(parents=True, exist_ok=True)
    write_png(args.output_path, result.fused)
    if args.dump_weights:
        dump_weights(args.output_path, result, stack.names)
    if args.metric:
        print(f"{mef_ssim(stack, result.fused):.3f}")
    return 0


def cmd_score(parser, args) -> int:
    stack = load_stack(args.input_dir)
    fused = read_image(args.fused)
    print(f"{mef_ssim(stack, fused):.3f}")
    return 0


def cmd_evaluate(parser, args) -> int:
    from .report import score_chart

    config = config_from_args(parser, args)
    threads = resolve_threads(parser, args.threads)
    stacks = sorted(d for d in args.root.iterdir() if d.is_dir() and list_image_files(d))
    if not stacks:
        raise EmptyStack(f"no stack directories with decodable images under {args.root}")
    args.output_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    for d in stacks:
        stack = load_stack(d, config)
        result = fuse_stack(stack, config, threads=threads)
        write_png(args.output_dir / f"{d.name}.png", result.fused)
        score = mef_ssim(stack, result.fused)
        h, w = stack.shape
        rows.append((d.name, stack.n_exposures, w, h, f"{score:.3f}", f"{result.seconds:.3f}"))

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("stack", "n_exposures", "width", "height", "mef_ssim", "seconds"))
    writer.writerows(rows)
    scores = [float(r[4]) for r in rows]
    seconds = [float(r[5]) for r in rows]
    writer.writerow(("avg", "", "", "", f"{sum(scores) / len(scores):.3f}",
                     f"{sum(seconds) / len(seconds):.3f}"))
    (args.output_dir / "scores.csv").write_text(buf.getvalue())
    sys.stdout.write(buf.getvalue())
    score_chart(args.output_dir / "scores.png", [r[0] for r in rows], scores, seconds)
    return 0


COMMANDS = {"fuse": cmd_fuse, "score": cmd_score, "evaluate": cmd_evaluate}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](parser, args)
    except EmptyStack as exc:
        print(f"pasmef: no decodable images ({exc})", file=sys.stderr)
        return 1
    except (PasMefError, FileNotFoundError) as exc:
        print(f"pasmef: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
