"""Command-line front end.

Exit codes: 0 success, 1 inequality violation, 2 usage or parse error,
3 invalid state input.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import os
import sys

from . import figures, linalg, relations, states
from .errors import FigureViolation, ImkitError, UnknownName
from .measures import measure_panel, purity
from .stateio import StateFormatError, load_states

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_INVALID_STATE = 0, 1, 2, 3

# --tol KEY=VAL targets
TOLERANCES = {
    "herm": (linalg, "HERM_TOL"),
    "psd": (linalg, "PSD_TOL"),
    "roundoff": (linalg, "ROUNDOFF_FACTOR"),
    "state_herm": (states, "STATE_HERM_TOL"),
    "trace": (states, "TRACE_TOL"),
    "real": (states, "REAL_TOL"),
    "bound": (relations, "BOUND_TOL"),
    "equality": (relations, "EQUALITY_TOL"),
    "strict": (relations, "STRICT_TOL"),
}


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _alpha(text: str) -> float:
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1), got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="imkit", description="Imaginarity measures, bound audits and figure data.")
    p.add_argument("--cmd", required=True, choices=["compute", "audit", "sweep", "figure"])
    p.add_argument("--in", dest="input_path", help="state file (compute)")
    p.add_argument("--out", dest="output_path", help="output file; standard output if omitted")
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--seed", type=int, default=None, help="RNG seed; falls back to $IMKIT_SEED, then 0")
    p.add_argument("--n", dest="n_states", type=_positive_int, default=None)
    p.add_argument("--dim", type=_positive_int, default=2)
    p.add_argument("--rank", type=_positive_int, default=None)
    p.add_argument("--alpha", type=_alpha, action="append", default=None)
    p.add_argument("--check", action="append", default=None,
                   help=f"repeatable; one of {', '.join(relations.CHECKS)}; default all applicable")
    p.add_argument("--figure", type=int, default=None)
    p.add_argument("--tol", action="append", default=[], metavar="KEY=VAL",
                   help=f"override a tolerance; keys: {', '.join(TOLERANCES)}")
    p.add_argument("--family", default="eq13", help=f"sweep family: {', '.join(figures.FAMILIES)}")
    p.add_argument("--measure", action="append", default=None, help="sweep measure (repeatable)")
    p.add_argument("--grid", default=None, help="sweep grid: 'a,b,c' or 'start:stop:step'")
    return p


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("IMKIT_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"IMKIT_SEED is not an integer: {env!r}") from None


def _parse_tolerances(items: list[str]) -> dict[str, float]:
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep or key not in TOLERANCES:
            raise UsageError(f"bad --tol {item!r}; expected KEY=VAL with KEY in {', '.join(TOLERANCES)}")
        try:
            v = float(val)
        except ValueError:
            raise UsageError(f"bad --tol value {val!r}") from None
        if not v >= 0:
            raise UsageError(f"tolerance must be nonnegative: {item}")
        out[key] = v
    return out


@contextlib.contextmanager
def tolerance_overrides(values: dict[str, float]):
    saved = []
    try:
        for key, v in values.items():
            mod, attr = TOLERANCES[key]
            saved.append((mod, attr, getattr(mod, attr)))
            setattr(mod, attr, v)
        yield
    finally:
        for mod, attr, old in reversed(saved):
            setattr(mod, attr, old)


def _rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        header = list(rows[0])
        w.writerow(header)
        for row in rows:
            w.writerow([figures._cell(row.get(k)) for k in header])
    return buf.getvalue()


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


# -- commands -----------------------------------------------------------------


def cmd_compute(args) -> int:
    if not args.input_path:
        raise UsageError("--cmd compute needs --in")
    try:
        loaded = load_states(args.input_path)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input_path}: {exc}") from None
    alphas = args.alpha or [0.5]
    rows = [measure_panel(s, alphas, state_id=sid).to_row() for sid, s in loaded]
    if args.format == "json":
        text = json.dumps(rows, indent=1) + "\n"
    else:
        text = _rows_to_csv(rows)
    _emit(text, args.output_path)
    return EXIT_OK


def _default_checks(dim: int) -> list[str]:
    return [n for n, spec in relations.CHECKS.items() if spec.dims is None or dim in spec.dims]


def cmd_audit(args) -> int:
    checks = args.check or _default_checks(args.dim)
    n = 1000 if args.n_states is None else args.n_states
    config = relations.AuditConfig(dim=args.dim, n_states=n, seed=args.seed, checks=checks, rank=args.rank)
    audit = relations.run_audit(config)
    _emit(audit.to_json() + "\n" if args.format == "json" else audit.to_csv(), args.output_path)

    out = sys.stdout if args.output_path else sys.stderr
    print(f"{'check':<20}{'trials':>8}{'violations':>12}  worst_slack", file=out)
    for s in audit.summary():
        print(f"{s['check']:<20}{s['trials']:>8}{s['violations']:>12}  {s['worst_slack']:.6e}", file=out)
    if "qutrit_compl" in checks:
        _print_deciles(config, audit, out)
    return EXIT_OK if audit.violations == 0 else EXIT_VIOLATION


def _print_deciles(config, audit, out):
    reps = [r for r in audit.reports if r.name == "qutrit_compl"]
    purities = [purity(states.random_mixed(config.dim, config.rank, relations.state_rng(config.seed, i, 0)))
                for i in range(config.n_states)]
    bins = relations.min_slack_by_purity_bins(purities, [r.slack for r in reps])
    print("purity decile       min slack", file=out)
    for lo, hi, s in bins:
        print(f"[{lo:.4f}, {hi:.4f}]  {s:.6f}", file=out)


def cmd_figure(args) -> int:
    if args.figure is None:
        raise UsageError("--cmd figure needs --figure 1..5")
    if args.figure not in range(1, 6):
        raise UsageError(f"unknown figure {args.figure}; expected 1..5")
    table = figures.figure(args.figure, args.n_states, args.seed)
    _emit(figures.table_to_json(table) + "\n" if args.format == "json" else figures.table_to_csv(table),
          args.output_path)
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        grid = figures.parse_grid(args.grid)
    except ValueError as exc:
        raise UsageError(f"bad --grid {args.grid!r}: {exc}") from None
    if args.measure is None:
        measures = ["m_re"]
    else:
        measures = [m.strip() for item in args.measure for m in item.split(",") if m.strip()]
    table = figures.sweep(args.family, grid, measures, args.alpha or [0.5])
    _emit(figures.table_to_json(table) + "\n" if args.format == "json" else figures.table_to_csv(table),
          args.output_path)
    return EXIT_OK


COMMANDS = {"compute": cmd_compute, "audit": cmd_audit, "figure": cmd_figure, "sweep": cmd_sweep}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        args.seed = _resolve_seed(args.seed)
        tols = _parse_tolerances(args.tol)
        with tolerance_overrides(tols):
            return COMMANDS[args.cmd](args)
    except (UsageError, StateFormatError, UnknownName) as exc:
        print(f"imkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FigureViolation as exc:
        print(f"imkit: violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except ImkitError as exc:
        print(f"imkit: invalid state: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID_STATE


if __name__ == "__main__":
    sys.exit(main())
