"""Command-line front end: generate, run, export, sweep, verify.

Exit status is 0 on success, 1 when a verification fails and 2 on usage
errors (bad flags, unreadable files, malformed numbers).
"""

from __future__ import annotations

import argparse
import pathlib
import re
import sys

from .engine import classify_escape, iteration_log_csv, run, verify_trajectory, PatternError
from .family import FamilyParams, augment_instance, build_instance, first_negative_g
from .model import ModelError, export_mps, format_instance, parse_instance
from .numeric import Backend, DecimalParseError, format_scalar
from .pricing import PricingRule
from .ratio import ExpandState
from .sweep import AxisRange, MuRule, emit_region_csv, emit_region_svg, region_sweep

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# argparse would read "-2.15/2.3" as an unknown flag
_NUMBERISH = re.compile(r"-[\d.]")


class UsageError(Exception):
    pass


def _join_negative_values(argv: list[str]) -> list[str]:
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NUMBERISH.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        pathlib.Path(path).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def _read(path: str) -> str:
    try:
        return pathlib.Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _backend(args) -> Backend:
    return Backend(args.arith)


def _family(args, backend: Backend) -> FamilyParams:
    return FamilyParams.parse(args.a11, args.a12, args.mu, getattr(args, "scale", "1"), backend=backend)


def _expand_state(args, backend: Backend) -> ExpandState:
    return ExpandState(backend.parse(args.tau), backend.parse(args.u0), reset_period=args.reset)


def cmd_generate(args) -> int:
    backend = Backend.EXACT
    inst = build_instance(_family(args, backend), name=args.name)
    if args.steepest_edge_row is not None:
        parts = args.steepest_edge_row.split(",")
        if len(parts) != 2:
            raise UsageError("--steepest-edge-row takes two comma-separated numbers")
        inst = augment_instance(inst, [backend.parse(v) for v in parts], backend.parse(args.rhs))
    if args.output is None and args.mps is None:
        _write(None, format_instance(inst))
    if args.output is not None:
        _write(args.output, format_instance(inst))
    if args.mps is not None:
        _write(args.mps, export_mps(inst))
    return EXIT_OK


def cmd_export(args) -> int:
    inst = parse_instance(_read(args.instance), name=pathlib.Path(args.instance).stem)
    _write(args.output, export_mps(inst))
    return EXIT_OK


def cmd_run(args) -> int:
    backend = _backend(args)
    inst = parse_instance(_read(args.instance), backend, name=pathlib.Path(args.instance).stem)
    expand = _expand_state(args, backend) if args.ratio == "expand" else None
    report = run(inst, PricingRule(args.pricing), expand, args.max_iters)
    if args.log is not None:
        _write(args.log, iteration_log_csv(report))
    if args.figure is not None:
        from .plotting import save_trajectory_figure

        save_trajectory_figure(report, args.figure)
    print(report.outcome)
    return EXIT_OK


def cmd_sweep(args) -> int:
    grid = region_sweep(
        AxisRange.parse(args.a11),
        AxisRange.parse(args.a12),
        MuRule.parse(args.mu),
        max_iters=args.max_iters,
        workers=args.workers,
    )
    if args.csv is not None:
        _write(args.csv, emit_region_csv(grid))
    if args.svg is not None:
        _write(args.svg, emit_region_svg(grid))
    if args.figure is not None:
        from .plotting import save_region_figure

        save_region_figure(grid, args.figure)
    cells = grid.flat()
    bad = grid.disagreements()
    print(f"cells={len(cells)} boundary={sum(c.boundary for c in cells)} disagreements={len(bad)}")
    for c in bad[:10]:
        print(f"  disagreement at a11={format_scalar(c.a11)} a12={format_scalar(c.a12)} mu={format_scalar(c.mu)}")
    return EXIT_FAIL if bad else EXIT_OK


def cmd_verify(args) -> int:
    backend = _backend(args)
    p = _family(args, backend)
    state = _expand_state(args, backend)
    report = run(build_instance(p), PricingRule.DANTZIG, state, args.iters)
    mismatches = verify_trajectory(report, p, state.tau)
    try:
        escape = classify_escape(report)
    except PatternError as exc:
        print(f"FAIL {exc}")
        return EXIT_FAIL
    k_hat = first_negative_g(p, state.u0, max(1, args.iters))
    if not mismatches and escape is None:
        print(f"PASS 2/6 pattern and closed-form trajectory hold for {len(report.records)} iterations ({report.outcome})")
        return EXIT_OK
    print(f"FAIL {report.outcome}")
    if escape is not None:
        print(f"pattern broken at even iteration {escape.n}, unbounded at iteration {escape.unbounded_at}")
    if k_hat is not None:
        print(f"first negative G_k at k={k_hat} (row-2 pivot unacceptable in iteration {2 * k_hat + 2})")
    if mismatches:
        print(f"first mismatch: {mismatches[0]}")
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lpcycle", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def family_args(p):
        p.add_argument("--a11", required=True)
        p.add_argument("--a12", required=True)
        p.add_argument("--mu", required=True, help="decimal or quotient, e.g. -2.15/2.3")

    def expand_args(p, tau, u0, reset):
        p.add_argument("--tau", default=tau)
        p.add_argument("--u0", default=u0)
        p.add_argument("--reset", type=int, default=reset, help="reset period K")

    g = sub.add_parser("generate", help="write a 2/6-cycle instance")
    family_args(g)
    g.add_argument("--scale", default="1")
    g.add_argument("--steepest-edge-row", metavar="A,B")
    g.add_argument("--rhs", default="1")
    g.add_argument("--name", default="family")
    g.add_argument("-o", "--output")
    g.add_argument("--mps")
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("export", help="convert an instance file to MPS")
    e.add_argument("--instance", required=True)
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_export)

    r = sub.add_parser("run", help="run the simplex method on an instance file")
    r.add_argument("--instance", required=True)
    r.add_argument("--pricing", choices=[x.value for x in PricingRule], default="dantzig")
    r.add_argument("--ratio", choices=["standard", "expand"], default="standard")
    r.add_argument("--arith", choices=[b.value for b in Backend], default="exact")
    r.add_argument("--max-iters", type=int, default=10000)
    expand_args(r, "0.00000000005", "10000", 10000)
    r.add_argument("--log", "-o", help="iteration log CSV")
    r.add_argument("--figure", help="trajectory plot (png/svg/pdf)")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="map the cycling region")
    s.add_argument("--a11", required=True, metavar="LO:HI:N")
    s.add_argument("--a12", required=True, metavar="LO:HI:N")
    s.add_argument("--mu", default="mid", help="'mid' or 'fixed:<value>'")
    s.add_argument("--max-iters", type=int, default=600)
    s.add_argument("--workers", type=int)
    s.add_argument("--csv")
    s.add_argument("--svg")
    s.add_argument("--figure", help="additional raster/vector figure")
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="check an EXPAND run against the closed-form trajectory")
    family_args(v)
    v.add_argument("--iters", type=int, default=200)
    v.add_argument("--arith", choices=[b.value for b in Backend], default="exact")
    expand_args(v, "1", "1", None)
    v.set_defaults(func=cmd_verify)
    return parser


def dispatch(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ModelError, DecimalParseError, ValueError) as exc:
        print(f"lpcycle {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())
