"""``piecewise-mobius`` command line.

Every command takes a scene, either a JSON scene file or ``preset:NAME``
(with ``--param key=value`` overrides), writes its artefacts and prints a
short human-readable summary.  JSON reports always echo the effective
configuration.

Exit codes: 0 ok, 2 configuration error, 3 resource cap hit,
4 internal invariant violated.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .analysis import (SignatureConfig, StabilityConfig, attractors_for, alpha_sample,
                       find_periodic, parameter_sweep, stability_report)
from .errors import BadParameter, DepthOverflow, NoRegion, SceneError
from .presets import PRESETS, family
from .raster import (PlaneWindow, SphereWindow, alpha_heat, basin_color, legend,
                     raster_classify, to_rgb, write_image)
from .report import write_report
from .scene import Scene, describe, load_scene, parse_complex, scene_from_dict
from .spiderweb import ARC_CAP, MIN_ARC, backward_arcs, format_word, write_arcs

EXIT_CONFIG = 2
EXIT_CAP = 3
EXIT_INVARIANT = 4
PIXEL_CAP = 16_000_000


class PixelCapExceeded(RuntimeError):
    pass


def _param(text: str) -> tuple[str, object]:
    if "=" not in text:
        raise SceneError(f"--param expects key=value, got {text!r}")
    key, val = text.split("=", 1)
    key, val = key.strip(), val.strip()
    try:
        return key, float(val)
    except ValueError:
        pass
    z = parse_complex(val)
    return key, z


def load(args) -> Scene:
    params = dict(_param(p) for p in (args.param or []))
    if args.scene.startswith("preset:"):
        name = args.scene.split(":", 1)[1]
        data: dict = {"preset": name}
        if params:
            data["params"] = {k: ([v.real, v.imag] if isinstance(v, complex) else v)
                              for k, v in params.items()}
        return scene_from_dict(data)
    if params:
        scene = load_scene(args.scene)
        if scene.preset is None:
            raise SceneError("--param only applies to preset scenes")
        raw = dict(scene.raw)
        raw["params"] = {**raw.get("params", {}),
                         **{k: ([v.real, v.imag] if isinstance(v, complex) else v)
                            for k, v in params.items()}}
        return scene_from_dict(raw)
    return load_scene(args.scene)


def _pick(cli_value, section: dict, key: str, default):
    if cli_value is not None:
        return cli_value
    return section.get(key, default)


# -- commands ------------------------------------------------------------------

def cmd_render(args) -> int:
    scene = load(args)
    F, cfg = scene.pmt, scene.render
    pixels = _pick(args.pixels, cfg, "pixels", 400)
    sphere = args.sphere or cfg.get("sphere", False)
    n_pix = pixels * pixels * (2 if sphere else 1)
    if n_pix > PIXEL_CAP:
        raise PixelCapExceeded(f"{n_pix} pixels exceeds the cap of {PIXEL_CAP}")
    if sphere:
        window = SphereWindow(pixels)
    else:
        center = parse_complex(args.center) if args.center is not None else \
            parse_complex(cfg.get("center", 0))
        half = _pick(args.half_width, cfg, "half_width", 2.0)
        if not half > 0:
            raise BadParameter("half_width must be positive")
        window = PlaneWindow.centered(center, half, pixels)
    N = _pick(args.N, cfg, "N", 60)
    eps_b = _pick(args.eps_b, cfg, "eps_b", None)
    tol_conv = _pick(args.tol_conv, cfg, "tol_conv", 1e-6)
    max_len = _pick(args.max_len, cfg, "max_len", 6)
    points = find_periodic(F, max_len)
    attractors = attractors_for(points)
    R = raster_classify(F, window, N, eps_b, attractors, tol_conv)
    heat = None
    if args.heat or cfg.get("heat", False):
        depth = _pick(args.heat_depth, cfg, "heat_depth", 8)
        S = backward_arcs(F, depth)
        heat = alpha_heat(R, alpha_sample(F, S, periodic=points, max_len=max_len))
    write_image(args.out, to_rgb(R, heat))
    if args.legend:
        with open(args.legend, "w", encoding="utf-8") as fh:
            fh.write(legend(R))
    counts = R.counts()
    total = sum(counts.values())
    print(f"wrote {args.out} ({R.shape[1]}x{R.shape[0]})")
    for k, v in counts.items():
        print(f"  {k:12s} {v:9d}  {v / total:.4f}")
    if args.report:
        write_report(args.report, {"scene": describe(F), "render": R.params(),
                                   "max_len": max_len, "counts": counts,
                                   "attractors": [{"id": a.id, "name": a.name,
                                                   "points": list(a.points)}
                                                  for a in attractors]})
    return 0


def cmd_spiderweb(args) -> int:
    scene = load(args)
    F, cfg = scene.pmt, scene.spiderweb
    depth = _pick(args.depth, cfg, "depth", 6)
    min_arc = _pick(args.min_arc, cfg, "min_arc", MIN_ARC)
    cap = _pick(args.cap, cfg, "cap", ARC_CAP)
    S = backward_arcs(F, depth, min_arc, cap)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            write_arcs(S, fh)
    print("level  arcs  truncated")
    for n, (c, t) in enumerate(zip(S.counts, S.truncated_counts)):
        print(f"{n:5d} {c:5d} {t:10d}")
    print(f"truncated chordal length {sum(S.truncated_lengths):.3e}")
    if args.report:
        write_report(args.report, {"scene": describe(F),
                                   "config": {"depth": depth, "min_arc": min_arc, "cap": cap},
                                   "counts": S.counts, "truncated_counts": S.truncated_counts,
                                   "truncated_lengths": S.truncated_lengths})
    return 0


def cmd_periodics(args) -> int:
    scene = load(args)
    F = scene.pmt
    max_len = _pick(args.max_len, scene.analysis, "max_len", 6)
    pts = find_periodic(F, max_len)
    print(f"{'point':>32s}  {'word':10s} {'|multiplier|':>13s}  kind")
    for p in pts:
        z = p.point
        zs = "inf" if math.isinf(z.real) else f"{z.real:.10f}{z.imag:+.10f}i"
        print(f"{zs:>32s}  {format_word(p.word):10s} {abs(p.multiplier):13.6g}  {p.kind.value}")
    if args.report:
        write_report(args.report, {"scene": describe(F), "config": {"max_len": max_len},
                                   "periodic": [p.as_dict() for p in pts]})
    return 0


def cmd_check(args) -> int:
    scene = load(args)
    F = scene.pmt
    cfg = StabilityConfig(**scene.analysis)
    overrides = {k: v for k, v in {"max_len": args.max_len, "depth": args.depth,
                                   "alpha_depth": args.alpha_depth, "nmax": args.nmax,
                                   "seeds": args.seeds, "seed": args.seed}.items()
                 if v is not None}
    cfg = replace(cfg, **overrides)
    rep = stability_report(F, cfg)
    d = rep.as_dict()
    print(f"loxodromic components     {rep.loxodromic_components}")
    print(f"hyperbolic                {d['hyperbolicity']['verdict']}")
    print(f"alpha-expanding           {d['alpha_expanding']['status']}")
    print(f"schottky hypothesis       {rep.schottky.passed}")
    print(f"sufficient conditions met {rep.sufficient_conditions_met}")
    out = {"scene": describe(F), "config": cfg.as_dict(), "report": d}
    if args.report:
        write_report(args.report, out)
    return 0


def cmd_sweep(args) -> int:
    if not args.scene.startswith("preset:"):
        scene = load(args)
        if scene.preset is None:
            raise SceneError("sweep needs a preset scene (a one-parameter family)")
        name, fixed = scene.preset, scene.params
        cfg = scene.sweep
    else:
        name = args.scene.split(":", 1)[1]
        if name not in PRESETS:
            raise SceneError(f"unknown preset {name!r}")
        fixed = dict(_param(p) for p in (args.param or []))
        cfg = {}
    info = PRESETS[name]
    if info.family_param is None:
        raise SceneError(f"preset {name!r} has no complex parameter to sweep")
    fixed.pop(info.family_param, None)
    re_range = tuple(_pick(args.re, cfg, "re", None) or ())
    im_range = tuple(_pick(args.im, cfg, "im", None) or ())
    if len(re_range) != 2 or len(im_range) != 2:
        raise SceneError("sweep needs --re LO HI and --im LO HI")
    shape = tuple(_pick(args.shape, cfg, "shape", (40, 40)))
    sig = SignatureConfig(max_len=_pick(args.max_len, cfg, "max_len", 4),
                          arc_depth=_pick(args.arc_depth, cfg, "arc_depth", 3))
    fam = family(name, **fixed)
    grid = parameter_sweep(fam, re_range, im_range, shape, sig)
    out = {"preset": name, "fixed": fixed, "config": {"re": re_range, "im": im_range,
                                                      "shape": shape, "max_len": sig.max_len,
                                                      "arc_depth": sig.arc_depth},
           "grid": grid.as_dict()}
    out["grid"].pop("seconds")  # keep the report byte-stable
    write_report(args.out, out)
    if args.image:
        ids = grid.ids()
        img = np.array([[basin_color(i) for i in row] for row in ids], dtype=np.uint8)
        img[grid.change] = (0, 0, 0)
        write_image(args.image, img[::-1])  # imaginary axis pointing up
    print(f"{shape[0]}x{shape[1]} cells, {len(grid.distinct())} signatures, "
          f"{int(grid.change.sum())} change cells, {grid.seconds:.1f}s")
    for i, s in enumerate(grid.distinct()):
        print(f"  [{i}] {s}")
    return 0


def cmd_presets(args) -> int:
    for name, info in PRESETS.items():
        params = ", ".join(f"{k}={v}" for k, v in info.defaults.items()) or "-"
        sweep = f" sweep:{info.family_param}" if info.family_param else ""
        print(f"{name:20s} {info.summary}  [{params}]{sweep}")
    return 0


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="piecewise-mobius",
                                description="Piecewise Möbius transformations on the Riemann sphere.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def scene_cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("scene", help="scene JSON file or preset:NAME")
        sp.add_argument("--param", action="append", metavar="KEY=VALUE",
                        help="preset parameter override (complex as 1+2i)")
        sp.add_argument("--report", help="write a JSON report here")
        return sp

    r = scene_cmd("render", "rasterise boundary depths and basins")
    r.add_argument("--out", required=True, help="PNG or PPM path")
    r.add_argument("--legend", help="legend text file")
    r.add_argument("--pixels", type=int)
    r.add_argument("--center")
    r.add_argument("--half-width", type=float)
    r.add_argument("--sphere", action="store_true", help="two-chart view of the whole sphere")
    r.add_argument("-N", type=int, help="iterations")
    r.add_argument("--eps-b", type=float, help="boundary band (chordal)")
    r.add_argument("--tol-conv", type=float)
    r.add_argument("--max-len", type=int, help="period bound for the attractor census")
    r.add_argument("--heat", action="store_true", help="shade by distance to the alpha sample")
    r.add_argument("--heat-depth", type=int)
    r.set_defaults(func=cmd_render)

    s = scene_cmd("spiderweb", "export pre-discontinuity arcs")
    s.add_argument("--depth", type=int)
    s.add_argument("--min-arc", type=float)
    s.add_argument("--cap", type=int)
    s.add_argument("--out", help="arcs text file")
    s.set_defaults(func=cmd_spiderweb)

    q = scene_cmd("periodics", "periodic point census")
    q.add_argument("--max-len", type=int)
    q.set_defaults(func=cmd_periodics)

    c = scene_cmd("check", "hyperbolicity, alpha-expansion and Schottky checks")
    c.add_argument("--max-len", type=int)
    c.add_argument("--depth", type=int)
    c.add_argument("--alpha-depth", type=int)
    c.add_argument("--nmax", type=int)
    c.add_argument("--seeds", type=int)
    c.add_argument("--seed", type=int, help="RNG seed for sampling")
    c.set_defaults(func=cmd_check)

    w = scene_cmd("sweep", "signature sweep over the family parameter")
    w.add_argument("--re", type=float, nargs=2, metavar=("LO", "HI"))
    w.add_argument("--im", type=float, nargs=2, metavar=("LO", "HI"))
    w.add_argument("--shape", type=int, nargs=2, metavar=("ROWS", "COLS"))
    w.add_argument("--max-len", type=int)
    w.add_argument("--arc-depth", type=int)
    w.add_argument("--out", required=True, help="grid JSON")
    w.add_argument("--image", help="change-locus image")
    w.set_defaults(func=cmd_sweep, report=None)

    pr = sub.add_parser("presets", help="list built-in presets")
    pr.set_defaults(func=cmd_presets)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SceneError, BadParameter) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DepthOverflow, PixelCapExceeded) as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (NoRegion, ValueError) as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
