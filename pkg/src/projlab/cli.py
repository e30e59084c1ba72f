"""Command line entry point: ``projlab <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict
from typing import Any, Sequence

from .errors import ProjlabError
from .estimators import hoeffding_T
from .experiments import commutator_compare, res_identity_dump, schmidt_scan, sym_anti_table, werner_row
from .states import parse_state_spec
from .verify import MODULES, MUTATIONS, run_checks

DEFAULT_WERNER_STATES = ("singlet", "pizza", "werner:p=0.3", "00", "11", "random_pure:seed=7")


def fmt(x: Any) -> Any:
    """Round floats to 12 significant digits; leave everything else alone."""
    if isinstance(x, float):
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {str(k): fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [fmt(v) for v in x]
    return x


def _cell(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def render(rows: list[dict], fmt_name: str) -> str:
    if fmt_name == "json":
        return json.dumps(fmt(rows), indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(v) for k, v in row.items()})
    return buf.getvalue()


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def resolve_shots(args: argparse.Namespace) -> int | None:
    if args.epsilon is not None or args.delta is not None:
        if args.epsilon is None or args.delta is None:
            raise ProjlabError("--epsilon and --delta must be given together")
        return hoeffding_T(args.epsilon, args.delta)
    return args.shots


def cmd_werner_table(args: argparse.Namespace) -> int:
    shots = resolve_shots(args)
    rows = []
    for spec in args.state or DEFAULT_WERNER_STATES:
        rows.append(asdict(werner_row(parse_state_spec(spec), shots, args.seed)))
    emit(render(rows, args.format), args.out)
    return 0


def cmd_schmidt_scan(args: argparse.Namespace) -> int:
    named = parse_state_spec(args.state)
    cut = args.cut.split(",") if args.cut else None
    scan = schmidt_scan(named, cut, args.r_max, resolve_shots(args), args.seed)
    if args.format == "json":
        emit(json.dumps(fmt(asdict(scan)), indent=2) + "\n", args.out)
    else:
        rows = [
            {
                "r": r,
                "exact": scan.exact[r],
                "oracle": scan.oracle[r],
                "sampled": scan.sampled[r] if scan.sampled else None,
            }
            for r in sorted(scan.exact)
        ]
        emit(render(rows, "csv"), args.out)
    return 0


def cmd_sym_anti(args: argparse.Namespace) -> int:
    rows = sym_anti_table(parse_state_spec(args.state), args.rep, resolve_shots(args), args.seed)
    emit(render(rows, args.format), args.out)
    return 0


def cmd_res_identity(args: argparse.Namespace) -> int:
    rows = res_identity_dump(parse_state_spec(args.state), args.unitary, resolve_shots(args), args.seed)
    emit(render(rows, args.format), args.out)
    return 0


def cmd_commutator(args: argparse.Namespace) -> int:
    row = commutator_compare(args.A, args.B, args.mode, args.input)
    emit(render([row], args.format), args.out)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    report = run_checks(args.scope, args.tolerance, frozenset(args.mutate or ()), args.seed)
    emit(json.dumps(report, indent=2) + "\n", args.out)
    return 0 if report["passed"] else 1


def _add_io(p: argparse.ArgumentParser, default_format: str = "csv") -> None:
    p.add_argument("--format", choices=("csv", "json"), default=default_format)
    p.add_argument("--out", help="write to this file instead of stdout")


def _add_sampling(p: argparse.ArgumentParser, shots: int | None = None) -> None:
    p.add_argument("--shots", type=int, default=shots, help="number of simulated shots (omit for exact values only)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, help="target accuracy; with --delta overrides --shots")
    p.add_argument("--delta", type=float, help="failure probability for the Hoeffding shot count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="projlab", description="Projector tests on simulated circuits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("werner-table", help="two-copy Werner test on a list of states")
    p.add_argument("--state", action="append", help="state spec, repeatable (default: the standard six rows)")
    _add_sampling(p, shots=100_000)
    _add_io(p)
    p.set_defaults(func=cmd_werner_table)

    p = sub.add_parser("schmidt-scan", help="zero-outcome probability of the Schmidt rank test for r = 1..r_max")
    p.add_argument("--state", required=True)
    p.add_argument("--cut", help="comma-separated registers on the first side (default: the state's own cut)")
    p.add_argument("--r-max", type=int, default=2)
    _add_sampling(p)
    _add_io(p, "json")
    p.set_defaults(func=cmd_schmidt_scan)

    p = sub.add_parser("sym-anti", help="joint symmetric/antisymmetric outcome table")
    p.add_argument("--state", required=True)
    p.add_argument("--rep", default="standard", choices=("standard", "s3-two-qubit"))
    _add_sampling(p)
    _add_io(p)
    p.set_defaults(func=cmd_sym_anti)

    p = sub.add_parser("res-identity", help="cross-norm estimates for a resolution of the identity")
    p.add_argument("--state", required=True)
    p.add_argument("--unitary", default="cycle", choices=("cycle", "swap"))
    _add_sampling(p)
    _add_io(p)
    p.set_defaults(func=cmd_res_identity)

    p = sub.add_parser("commutator", help="commutator test versus the direct norm")
    p.add_argument("--A", required=True, help="e.g. X, XZ, CNOT, SWAP")
    p.add_argument("--B", required=True)
    p.add_argument("--mode", choices=("plain", "bch"), default="plain")
    p.add_argument("--input", default=None, help="bitstring, 'mixed' or 'max' (default: all zeros)")
    _add_io(p)
    p.set_defaults(func=cmd_commutator)

    p = sub.add_parser("verify", help="run the oracle-versus-circuit check registry")
    p.add_argument("--scope", default="all", choices=("all",) + MODULES)
    p.add_argument("--tolerance", type=float, help="override every check's tolerance")
    p.add_argument("--mutate", action="append", choices=MUTATIONS, help="inject a known defect (negative control)")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "input", "x") is None:
        args.input = "0" * len(args.A.replace("CNOT", "XX").replace("SWAP", "XX"))
    try:
        return args.func(args)
    except (ProjlabError, OSError) as exc:
        print(f"projlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
