"""Command-line surface: sweeps, analysis, randomized audits and verification.

Exit status: 0 = all checks pass, 1 = a verified-false condition
(bound or causality violation), 2 = input/usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

from . import io
from .channels import channel_M, depolarizing_choi
from .config import DEFAULT_TOL
from .linalg import DensityMatrix, LinalgError
from .metrics import audit_bounds, correlation_report
from .processes import (
    RandomSpec,
    build_from_circuit,
    nm_depolarizing_process,
    random_process,
    verify_causality,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _parse_dims(text: str) -> list[int]:
    try:
        dims = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated dimension list: {text!r}")
    if not dims or any(d < 2 for d in dims):
        raise argparse.ArgumentTypeError(f"dimensions must be >= 2: {text!r}")
    return dims


def _grid(points: int) -> list[float]:
    return [j / (points - 1) for j in range(points)]


def cmd_sweep_depolarizing(args: argparse.Namespace) -> int:
    if args.grid < 2:
        print("error: --grid must be >= 2", file=sys.stderr)
        return EXIT_USAGE
    rows = []
    for d in args.d:
        for p in _grid(args.grid):
            rows.append((float(d), p, channel_M(depolarizing_choi(d, p))))
    io.write_csv(args.out, ("d", "p", "M_nats"), rows)
    return EXIT_OK


def cmd_emit_figure(args: argparse.Namespace) -> int:
    if args.figure == "fig2":
        return cmd_sweep_depolarizing(args)
    rows = []
    for p in _grid(args.grid):
        rep = correlation_report(nm_depolarizing_process(p))
        rows.append((p, rep.step_markov[0], rep.step_markov[1], rep.non_markov, rep.total))
    io.write_csv(args.out, ("p", "M1", "M2", "N", "I"), rows)
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    spec = io.load_process_spec(args.infile)
    pt = build_from_circuit(spec)
    causality = verify_causality(pt, args.tol if args.tol else DEFAULT_TOL.causal)
    report = correlation_report(pt)
    audit = audit_bounds(report)
    lines = io.causality_lines(causality) + io.report_lines(report) + io.audit_lines(audit)
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if (causality.passed and audit.passed) else EXIT_VIOLATION


def cmd_audit_random(args: argparse.Namespace) -> int:
    if args.samples < 1:
        print("error: --samples must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    t0 = time.monotonic()
    tol = args.tol if args.tol else DEFAULT_TOL.xcheck
    worst_causality = 0.0
    min_slacks: dict[str, float] = {}
    violations = 0
    for k in range(args.samples):
        spec = RandomSpec(n=args.n, d=args.d, d_env=args.denv, seed=args.seed + k)
        pt = random_process(spec)
        causality = verify_causality(pt)
        worst_causality = max(
            worst_causality, causality.base_residual, *causality.residuals
        )
        audit = audit_bounds(correlation_report(pt), tol)
        slacks = {
            "unordered": min(audit.unordered_slack),
            "ordered": min(audit.ordered_slack),
            "max_nonmarkov": audit.max_nonmarkov_slack,
            "markov_tradeoff": audit.markov_tradeoff_slack,
            "total_tradeoff": audit.total_tradeoff_slack,
        }
        for name, s in slacks.items():
            min_slacks[name] = min(min_slacks.get(name, math.inf), s)
        if not (audit.passed and causality.passed):
            violations += 1
    elapsed = time.monotonic() - t0
    lines = [
        f"samples = {args.samples}",
        f"n = {args.n}",
        f"d = {args.d}",
        f"d_env = {args.denv}",
        f"seed = {args.seed}",
    ]
    for name in ("unordered", "ordered", "max_nonmarkov", "markov_tradeoff", "total_tradeoff"):
        lines.append(f"min_slack_{name} = {io.fmt(min_slacks[name])}")
    lines.append(f"worst_causality_residual = {io.fmt(worst_causality)}")
    lines.append(f"violations = {violations}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    # keep the summary file deterministic; timing goes to stderr only
    print(f"audit wall time: {elapsed:.2f}s", file=sys.stderr)
    return EXIT_OK if violations == 0 else EXIT_VIOLATION


def cmd_verify(args: argparse.Namespace) -> int:
    path = Path(args.infile)
    head = path.read_text(encoding="utf-8", errors="replace")[: len(io.CHOI_MAGIC)]
    if head == io.CHOI_MAGIC:
        state: DensityMatrix = io.load_choi(path)
    else:
        state = build_from_circuit(io.load_process_spec(path)).state
    tol = args.tol if args.tol else DEFAULT_TOL.causal
    report = verify_causality(state, tol)
    text = "\n".join(io.causality_lines(report)) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proctensor",
        description="Temporal correlations of multitime quantum processes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", default=None, help="output file path")
        p.add_argument("--tol", type=float, default=None, help="tolerance override")

    p = sub.add_parser("sweep-depolarizing", help="CSV of channel correlation vs p")
    p.add_argument("--d", type=_parse_dims, default=[2], help="comma-separated dims")
    p.add_argument("--grid", type=int, default=101, help="number of p-grid points")
    common(p)
    p.set_defaults(func=cmd_sweep_depolarizing)

    p = sub.add_parser("emit-figure", help="CSV data for the reference figures")
    p.add_argument("--figure", choices=("fig2", "fig6"), required=True)
    p.add_argument("--d", type=_parse_dims, default=[2])
    p.add_argument("--grid", type=int, default=101)
    common(p)
    p.set_defaults(func=cmd_emit_figure)

    p = sub.add_parser("analyze", help="full report for a process-spec file")
    p.add_argument("--in", dest="infile", required=True, help="process-spec JSON")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("audit-random", help="randomized bound audit")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--denv", type=int, default=4)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_audit_random)

    p = sub.add_parser("verify", help="causality check of a spec or Choi file")
    p.add_argument("--in", dest="infile", required=True, help="spec JSON or Choi file")
    common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (io.SpecFileError, ValueError, LinalgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
