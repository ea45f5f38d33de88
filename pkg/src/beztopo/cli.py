"""Command-line interface.

Subcommands: reproduce, generate, verify, subdivide, serve.  Deterministic
commands write a run manifest next to their output so results can be
replayed and compared bit-for-bit.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import fixtures, geometry, selfx, workbench
from .errors import InputFormatError
from .geometry import BezierCurve, load_polygon, polygon_to_json


def _write_output(path: Path, text: str, command: str, params: dict,
                  inputs: dict, seed=None):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    manifest = workbench.build_manifest(
        command, params, inputs,
        outputs={path.name: workbench.sha256_text(text)}, seed=seed)
    workbench.write_manifest(path.with_suffix(path.suffix + ".manifest.json"), manifest)


def cmd_reproduce(args) -> int:
    polygon = fixtures.load_fixture(args.case)
    if args.case == "trefoil":
        checks = workbench.reproduce_trefoil(polygon)
    else:
        checks = workbench.reproduce_equilateral(polygon)
    for check in checks:
        print(check.line())
    failed = [c for c in checks if not c.passed]
    report = {
        "api": workbench.API_VERSION,
        "case": args.case,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
        "passed": not failed,
    }
    out = Path(args.out) / f"reproduce-{args.case}.json"
    _write_output(out, workbench.dump_json(report), "reproduce",
                  {"case": args.case},
                  {args.case: workbench.sha256_text(polygon_to_json(polygon))})
    print(f"report written to {out}")
    if failed:
        print(f"{len(failed)} check(s) failed: {', '.join(c.name for c in failed)}")
        return 1
    return 0


def cmd_generate(args) -> int:
    config = selfx.GeneratorConfig()
    result = selfx.generate_counterexample(args.degree, args.restarts, args.seed, config)
    payload = {
        "api": workbench.API_VERSION,
        "found": result.found,
        "degree": result.degree,
        "restarts": result.restarts,
        "seed": result.seed,
        "best_sf": result.best_sf,
        "report": result.report.to_dict() if result.report else None,
        "records": [{
            "index": r.index, "sf": r.sf, "effective_sf": r.effective_sf,
            "s": r.s, "t": r.t, "evals_used": r.evals_used,
            "converged": r.converged, "accepted": r.accepted, "reason": r.reason,
        } for r in result.records],
    }
    params = {"degree": args.degree, "restarts": args.restarts,
              "epsilon_root": config.epsilon_root, "epsilon_edge": config.epsilon_edge}
    _write_output(Path(args.out), workbench.dump_json(payload), "generate", params,
                  inputs={}, seed=args.seed)
    if result.found:
        w = result.report.witness
        print(f"found: SF = {result.report.sf:.3e}, witness (s, t) = "
              f"({w.s:.4f}, {w.t:.4f}), residual {w.residual:.3e}, gap {w.gap:.3e}")
        print(f"report written to {args.out}")
        return 0
    print(f"not found: best SF seen = {result.best_sf:.3e} "
          f"(report with per-restart records written to {args.out})")
    return 2


def cmd_verify(args) -> int:
    try:
        polygon = load_polygon(args.polygon)
    except InputFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    result = workbench.run_verification(polygon, checks)
    text = workbench.dump_json(result)
    if args.out:
        _write_output(Path(args.out), text, "verify",
                      {"checks": checks},
                      {Path(args.polygon).name: workbench.sha256_text(
                          Path(args.polygon).read_text(encoding="utf-8"))})
        print(f"report written to {args.out}")
    else:
        print(text, end="")
    return 0


def cmd_subdivide(args) -> int:
    try:
        polygon = load_polygon(args.polygon)
    except InputFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    curve = BezierCurve.from_polygon(polygon)
    pieces = geometry.subdivision_polygons(curve, args.u, args.depth)
    payload = {
        "api": workbench.API_VERSION,
        "u": args.u,
        "depth": args.depth,
        "polygons": [[list(map(float, p)) for p in piece.control_points]
                     for piece in pieces],
    }
    text = workbench.dump_json(payload)
    if args.out:
        _write_output(Path(args.out), text, "subdivide",
                      {"u": args.u, "depth": args.depth},
                      {Path(args.polygon).name: workbench.sha256_text(
                          Path(args.polygon).read_text(encoding="utf-8"))})
        print(f"{len(pieces)} sub-polygons written to {args.out}")
    else:
        print(text, end="")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app
    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beztopo",
        description="Topological disagreement between Bezier curves and their "
                    "control polygons: reproduce the bundled counterexamples, "
                    "generate new ones, verify polygon files, serve the editing API.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reproduce", help="re-run a bundled example and check every number")
    p.add_argument("case", choices=["trefoil", "equilateral"])
    p.add_argument("--out", default="runs", help="output directory (default: runs)")
    p.set_defaults(fn=cmd_reproduce)

    p = sub.add_parser("generate", help="search for an equilateral self-intersection counterexample")
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="generated.json")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("verify", help="run checks against a polygon file")
    p.add_argument("polygon")
    p.add_argument("--checks", default="simple,selfx",
                   help="comma list of simple,selfx,knot,pushes")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("subdivide", help="de Casteljau subdivision of a polygon file")
    p.add_argument("polygon")
    p.add_argument("--u", type=float, default=0.5)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_subdivide)

    p = sub.add_parser("serve", help="run the session HTTP API")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
