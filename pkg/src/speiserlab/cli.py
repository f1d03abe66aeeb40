"""Command-line surface.

Subcommands:
  gen       octagonal | gamma | lambda | extend | subdivide4 | dual
  analyze   vel | resistance | nash-williams | doyle | ratio-trend | fatness
  theorem1  run both evidence legs and write the report

Exit codes: 0 success, 2 usage error (bad flags, missing files), 3 numeric
non-convergence (diagnostics still written).  Identical argv and input files
produce byte-identical outputs; every report embeds the seed it used.
``SPEISER_LAB_THREADS`` caps internal parallelism.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import SolverError, SpeiserLabError
from .graph_core import bfs_layers, build_graph, dual, to_json
from .lattices import triangular_ball
from .refinement import subdivide4
from .speiser import (
    GrowthSchedule,
    build_octagonal_speiser,
    extend_speiser,
    lambda_triangulation,
    speiser_ball,
    tree_replace,
)
from .theorem1 import Theorem1Config, run_theorem1

DEFAULT_SEED = 20080


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _read_graph(path: str):
    p = Path(path)
    if not p.exists():
        raise UsageError(f"graph file not found: {path}")
    return build_graph(p.read_text())


class UsageError(Exception):
    pass


def _parse_schedule(text: str) -> GrowthSchedule:
    try:
        lengths = tuple(int(x) for x in text.split(","))
        return GrowthSchedule(lengths)
    except (ValueError, SpeiserLabError) as exc:
        raise UsageError(f"bad schedule {text!r}: {exc}") from exc


def _parse_annuli(text: str) -> list[tuple[int, int]]:
    out = []
    try:
        for part in text.split(","):
            a, b = part.split(":")
            out.append((int(a), int(b)))
    except ValueError as exc:
        raise UsageError(f"bad annuli spec {text!r}") from exc
    return out


def _json_report(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _cmd_gen(args) -> int:
    kind = args.kind
    if kind == "octagonal":
        g = build_octagonal_speiser(args.depth)
    elif kind == "gamma":
        schedule = _parse_schedule(args.schedule)
        ball, layers = speiser_ball(min(args.depth, len(schedule)))
        g = tree_replace(ball, layers, schedule)
    elif kind == "lambda":
        g = lambda_triangulation(_read_graph(args.graph), outer_face=args.outer_face)
    elif kind == "extend":
        g = extend_speiser(
            _read_graph(args.graph), args.grid_depth, outer_face=args.outer_face
        )
    elif kind == "subdivide4":
        g, _ = subdivide4(_read_graph(args.graph), outer_face=args.outer_face)
    elif kind == "dual":
        g = dual(_read_graph(args.graph))
    else:
        raise UsageError(f"unknown generator {kind!r}")
    _write(args.output, to_json(g))
    return 0


def _cmd_analyze(args) -> int:
    kind = args.kind
    if kind == "vel":
        from .vel import vel_type_trend

        g = _read_graph(args.graph)
        report = vel_type_trend(g, args.root, _parse_annuli(args.annuli))
        _write(args.output, _json_report(report.to_dict()))
    elif kind == "resistance":
        from .walk import resistance_curve

        g = _read_graph(args.graph)
        layers = bfs_layers(g, args.root)
        n_list = list(range(1, args.n_max + 1))
        curve = resistance_curve(g, args.root, n_list, layers=layers)
        _write(args.output, _json_report(curve.to_dict()))
    elif kind == "nash-williams":
        from .walk import nash_williams_sum

        g = _read_graph(args.graph)
        layers = bfs_layers(g, args.root)
        sums = nash_williams_sum(layers)
        _write(
            args.output,
            _json_report(
                {"partial_sums": sums, "cut_sizes": layers.cut_sizes()}
            ),
        )
    elif kind == "doyle":
        from .walk import doyle_test

        g = _read_graph(args.graph)
        report = doyle_test(g, args.grid_depth, args.root, args.n_max)
        _write(args.output, _json_report(report.to_dict()))
    elif kind == "ratio-trend":
        from .packing import ratio_trend

        family = args.family
        if family == "hex":
            builder = lambda n: triangular_ball(6, n)  # noqa: E731
        elif family == "tri8":
            builder = lambda n: triangular_ball(8, n)  # noqa: E731
        else:
            raise UsageError(f"unknown family {family!r} (hex or tri8)")
        ns = [int(x) for x in args.ns.split(",")]
        report = ratio_trend(builder, ns)
        _write(args.output, _json_report(report.to_dict()))
    elif kind == "fatness":
        from .fatness import PlanarSet, fatness_estimate

        disks = []
        for part in args.disks.split(";"):
            x, y, r = (float(t) for t in part.split(","))
            disks.append((complex(x, y), r))
        s = PlanarSet(tuple(disks))
        tau = fatness_estimate(
            s, n_samples=args.samples, n_radii=args.n_radii, seed=args.seed
        )
        _write(
            args.output,
            _json_report(
                {"tau_hat": tau, "seed": args.seed, "n_samples": args.samples}
            ),
        )
    else:
        raise UsageError(f"unknown analysis {kind!r}")
    return 0


def _cmd_theorem1(args) -> int:
    if args.config == "default":
        config = Theorem1Config(seed=args.seed)
    else:
        p = Path(args.config)
        if not p.exists():
            raise UsageError(f"config file not found: {args.config}")
        raw = json.loads(p.read_text())
        raw["schedule"] = tuple(raw.get("schedule", (21, 8103)))
        raw["resistance_radii"] = tuple(raw.get("resistance_radii", (1, 2, 3, 4, 5, 6)))
        raw["vel_annuli"] = tuple(
            tuple(a) for a in raw.get("vel_annuli", ((1, 2), (2, 4), (3, 6)))
        )
        raw["ratio_ns"] = tuple(raw.get("ratio_ns", (2, 3, 4, 5, 6)))
        config = Theorem1Config(**raw)
    report = run_theorem1(config)
    _write(args.output, report.to_json())
    if args.svg is not None:
        from .packing import EUCLIDEAN, pack_disk, packing_to_svg

        psi = build_octagonal_speiser(3)
        tri = triangular_ball(8, 3)
        packed = pack_disk(tri, boundary=EUCLIDEAN)
        Path(args.svg).write_text(packing_to_svg(packed, nerve=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="speiserlab",
        description="Speiser-graph constructions, extremal length, circle "
        "packings and recurrence tests.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate or transform graphs")
    gen.add_argument(
        "kind",
        choices=["octagonal", "gamma", "lambda", "extend", "subdivide4", "dual"],
    )
    gen.add_argument("--depth", type=int, default=2, help="ball radius")
    gen.add_argument(
        "--schedule", default="21,8103", help="comma-separated odd tree lengths"
    )
    gen.add_argument("--graph", help="input graph JSON (for transforms)")
    gen.add_argument("--grid-depth", type=int, default=4)
    gen.add_argument("--outer-face", type=int, default=None)
    gen.add_argument("-o", "--output", default=None)
    gen.set_defaults(func=_cmd_gen)

    an = sub.add_parser("analyze", help="run an estimator on a graph")
    an.add_argument(
        "kind",
        choices=[
            "vel",
            "resistance",
            "nash-williams",
            "doyle",
            "ratio-trend",
            "fatness",
        ],
    )
    an.add_argument("--graph", help="input graph JSON")
    an.add_argument("--root", type=int, default=0)
    an.add_argument("--n-max", type=int, default=6)
    an.add_argument("--grid-depth", type=int, default=8)
    an.add_argument("--annuli", default="1:2,2:4,3:6")
    an.add_argument("--family", default="hex", help="ratio-trend family (hex, tri8)")
    an.add_argument("--ns", default="2,3,4,5", help="ratio-trend ball radii")
    an.add_argument("--disks", default="0,0,1", help="fatness x,y,r;x,y,r;...")
    an.add_argument("--samples", type=int, default=100_000)
    an.add_argument("--n-radii", type=int, default=8)
    an.add_argument("--seed", type=int, default=DEFAULT_SEED)
    an.add_argument("-o", "--output", default=None)
    an.set_defaults(func=_cmd_analyze)

    th = sub.add_parser("theorem1", help="full two-leg evidence run")
    th.add_argument("--config", default="default", help="'default' or a JSON file")
    th.add_argument("--seed", type=int, default=DEFAULT_SEED)
    th.add_argument("--svg", default=None, help="also draw a packed patch to this file")
    th.add_argument("-o", "--output", default=None)
    th.set_defaults(func=_cmd_theorem1)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        diag = _json_report({"error": str(exc), "diagnostics": exc.diagnostics})
        if getattr(args, "output", None):
            _write(args.output, diag)
        print(f"solver failed: {exc}", file=sys.stderr)
        return 3
    except SpeiserLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
