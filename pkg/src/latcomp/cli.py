"""Command-line front door.

Subcommands: compensate, perceive, scanline, pattern, kernel-info, serve.
Flag overrides win over config-file values; every run echoes the fully
resolved configuration on stderr.  Errors exit nonzero with a machine
readable category: Config (2), IO (3), NoConvergence (4), Degenerate (5).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import patterns, pipeline, png_io
from .config import (
    CompensationConfig,
    ConfigError,
    config_from_dict,
    default_config,
    load_config,
)
from .model import DegenerateDenominator, NoConvergence

EXIT_CODES = {"Config": 2, "IO": 3, "NoConvergence": 4, "Degenerate": 5}


class CliError(Exception):
    def __init__(self, category: str, message: str):
        self.category = category
        super().__init__(message)


def _add_override_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--alpha", type=float, help="compensation level")
    p.add_argument("--sigma", type=float, dest="sigma_px", help="kernel scale in pixels")
    p.add_argument("--distance-in", type=float, help="viewing distance, inches")
    p.add_argument("--ppi", type=float, help="display pixel density, pixels/inch")
    p.add_argument("--beta", type=float, help="nonlinear inhibition level")
    p.add_argument("--normalization", choices=["unit-sum", "paper-literal"])
    p.add_argument("--color-mode", choices=["chromatically-blind", "channel-independent"])
    p.add_argument("--model", choices=["hartline-ratliff", "barlow-lange"])
    p.add_argument("--detail", action="store_true", default=None,
                   help="enable detail preservation")
    p.add_argument("--no-detail", dest="detail", action="store_false")
    p.add_argument("--sigma-s", type=float, help="bilateral spatial sigma, pixels")
    p.add_argument("--sigma-r", type=float, help="bilateral range sigma, fraction of span")
    p.add_argument("--tol", type=float, help="solver tolerance")
    p.add_argument("--max-iter", type=int, help="solver iteration cap")


def _overrides_dict(args) -> dict:
    """Collect the nested config fragment expressed by the flags."""
    out: dict = {}

    def put(section, key, value):
        if value is not None:
            out.setdefault(section, {})[key] = value

    put("inhibition", "alpha", args.alpha)
    put("inhibition", "sigma_px", args.sigma_px)
    put("inhibition", "beta", args.beta)
    put("inhibition", "normalization", args.normalization)
    put("viewing", "distance_in", args.distance_in)
    put("viewing", "density_ppi", args.ppi)
    put("detail", "enabled", args.detail)
    put("detail", "sigma_s", args.sigma_s)
    put("detail", "sigma_r", args.sigma_r)
    put("solver", "tol", args.tol)
    put("solver", "max_iter", args.max_iter)
    if args.color_mode is not None:
        out["color_mode"] = args.color_mode
    if args.model is not None:
        out["model"] = args.model
    return out


def _build_config(args) -> CompensationConfig:
    try:
        base = load_config(args.config) if args.config else default_config()
        return config_from_dict(_overrides_dict(args), base)
    except ConfigError as exc:
        raise CliError("Config", str(exc)) from exc
    except OSError as exc:
        raise CliError("IO", str(exc)) from exc


def _load_input(args) -> np.ndarray:
    if getattr(args, "pattern", None):
        try:
            return patterns.generate(args.pattern, args.width, args.height)
        except ValueError as exc:
            raise CliError("Config", str(exc)) from exc
    if not args.input:
        raise CliError("Config", "either an input image or --pattern is required")
    try:
        return png_io.load_image(args.input)
    except (OSError, png_io.PngError) as exc:
        raise CliError("IO", f"cannot read {args.input}: {exc}") from exc


def _save_output(path: str, img: np.ndarray, depth: int):
    try:
        png_io.save_image(path, img, depth)
    except OSError as exc:
        raise CliError("IO", f"cannot write {path}: {exc}") from exc


def _echo_resolved(resolved: dict):
    print(json.dumps({"resolved_config": resolved}), file=sys.stderr)


def cmd_compensate(args) -> int:
    cfg = _build_config(args)
    img = _load_input(args)
    try:
        out, report = pipeline.compensate_image_report(img, cfg)
    except NoConvergence as exc:
        raise CliError("NoConvergence", str(exc)) from exc
    except DegenerateDenominator as exc:
        raise CliError("Degenerate", str(exc)) from exc
    _save_output(args.output, out, args.depth)
    _echo_resolved(report.resolved)
    return 0


def cmd_perceive(args) -> int:
    cfg = _build_config(args)
    img = _load_input(args)
    try:
        rc = cfg.resolve()
        out = pipeline.render_perceived(img, rc)
    except NoConvergence as exc:
        raise CliError("NoConvergence", str(exc)) from exc
    _save_output(args.output, out, args.depth)
    _echo_resolved(rc.echo())
    return 0


def scanline_csv(img: np.ndarray, row: int, col0: int, col1: int,
                 cfg: CompensationConfig) -> str:
    """CSV with perceived totals of the input and of its compensation."""
    rc = cfg.resolve()
    perceived_in = pipeline.perceive_scanline(img, row, (col0, col1), rc)
    compensated = pipeline.compensate_image(img, rc)
    perceived_out = pipeline.perceive_scanline(compensated, row, (col0, col1), rc)
    lines = ["col_index,perceived_input_total,perceived_compensated_total"]
    for i, (a, b) in enumerate(zip(perceived_in, perceived_out)):
        lines.append(f"{col0 + i},{a:.12g},{b:.12g}")
    return "\n".join(lines) + "\n"


def cmd_scanline(args) -> int:
    cfg = _build_config(args)
    img = _load_input(args)
    try:
        text = scanline_csv(img, args.row, args.col0, args.col1, cfg)
    except NoConvergence as exc:
        raise CliError("NoConvergence", str(exc)) from exc
    except ValueError as exc:
        raise CliError("Config", str(exc)) from exc
    if args.output == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError("IO", f"cannot write {args.output}: {exc}") from exc
    _echo_resolved(cfg.resolve().echo())
    return 0


def cmd_pattern(args) -> int:
    try:
        img = patterns.generate(args.name, args.width, args.height)
    except ValueError as exc:
        raise CliError("Config", str(exc)) from exc
    _save_output(args.output, img, args.depth)
    return 0


def cmd_kernel_info(args) -> int:
    cfg = _build_config(args)
    rc = cfg.resolve()
    info = rc.echo()
    info["kernel"] = {
        "taps": rc.kernel.taps.tolist(),
        "gaussian_sum_2d": rc.kernel.gaussian_sum_2d,
        "effective_sum": rc.kernel.effective_sum,
    }
    print(json.dumps(info, indent=2))
    return 0


def cmd_serve(args) -> int:
    from .server import run_server

    cfg = _build_config(args)
    run_server(args.host, args.port, cfg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latcomp",
        description="Compute laterally-compensated images and predict perceived appearance.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, needs_output=True):
        p.add_argument("input", nargs="?", help="input PNG (omit when using --pattern)")
        if needs_output:
            p.add_argument("output", help="output path")
        p.add_argument("--pattern", choices=patterns.pattern_names(),
                       help="generate this pattern instead of reading a file")
        p.add_argument("--width", type=int, default=512)
        p.add_argument("--height", type=int, default=512)

    p = sub.add_parser("compensate", help="write the laterally-compensated image")
    add_io(p)
    p.add_argument("--depth", type=int, choices=[8, 16], default=16)
    _add_override_flags(p)
    p.set_defaults(func=cmd_compensate)

    p = sub.add_parser("perceive", help="render the predicted perceived image")
    add_io(p)
    p.add_argument("--depth", type=int, choices=[8, 16], default=16)
    _add_override_flags(p)
    p.set_defaults(func=cmd_perceive)

    p = sub.add_parser("scanline", help="CSV of perceived values along a segment")
    add_io(p)
    p.add_argument("--row", type=int, required=True)
    p.add_argument("--col0", type=int, required=True)
    p.add_argument("--col1", type=int, required=True)
    _add_override_flags(p)
    p.set_defaults(func=cmd_scanline)

    p = sub.add_parser("pattern", help="write a deterministic test pattern")
    p.add_argument("name", choices=patterns.pattern_names())
    p.add_argument("output")
    p.add_argument("--width", type=int, default=512)
    p.add_argument("--height", type=int, default=512)
    p.add_argument("--depth", type=int, choices=[8, 16], default=16)
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("kernel-info", help="print the resolved kernel as JSON")
    _add_override_flags(p)
    p.set_defaults(func=cmd_kernel_info)

    p = sub.add_parser("serve", help="run the HTTP preview service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8787)
    _add_override_flags(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc.category}: {exc}", file=sys.stderr)
        return EXIT_CODES.get(exc.category, 1)


if __name__ == "__main__":
    sys.exit(main())
