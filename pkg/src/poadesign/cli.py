"""Command-line experiment runner.

Subcommands expose every library operation and reproduce the two headline
experiments as delimited data (plus a rendered figure next to the data file
when writing to disk).  Exit codes: 0 success, 2 validation failure,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .design import optimal_design, poa_class
from .game import BasisPair, BudgetExceeded, game_to_dict, poa_of_instance
from .lp import NumericalFailure
from .oracle import brute_force_class_poa
from .setcover import (
    build_worstcase_game,
    mismatch_poa,
    optimal_design_finite,
    optimal_design_limit,
    optimal_poa_finite,
    optimal_poa_limit,
    setcover_poa,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _floats(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals: {text}") from exc


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _basis_from_args(args: argparse.Namespace) -> BasisPair:
    if args.basis is not None:
        data = json.loads(Path(args.basis).read_text())
        n = len(data["w"]) - 1
        return BasisPair(n, data["w"], data["u"])
    if args.u is None:
        raise ValueError("provide --u (utility values for coverage 1..n) or --basis FILE")
    u = args.u
    n = args.n if args.n is not None else len(u)
    if len(u) != n:
        raise ValueError(f"--u lists u(1..n): expected {n} values, got {len(u)}")
    full_u = (0.0, *u)
    if args.set_cover:
        return BasisPair.set_covering(n, full_u)
    if args.w is None:
        raise ValueError("provide either --set-cover or --w")
    if len(args.w) != n:
        raise ValueError(f"--w lists w(1..n): expected {n} values, got {len(args.w)}")
    return BasisPair(n, (0.0, *args.w), full_u)


def _welfare_from_args(args: argparse.Namespace) -> tuple[list[float], int]:
    if args.set_cover:
        if args.n is None:
            raise ValueError("--set-cover needs --n")
        return [0.0] + [1.0] * args.n, args.n
    if args.w is None:
        raise ValueError("provide either --set-cover or --w")
    n = args.n if args.n is not None else len(args.w)
    if len(args.w) != n:
        raise ValueError(f"--w lists w(1..n): expected {n} values, got {len(args.w)}")
    return [0.0, *args.w], n


def _emit_rows(
    rows: list[dict], header: Sequence[str], args: argparse.Namespace
) -> str:
    if args.format == "json":
        text = json.dumps(rows, indent=None, separators=(",", ":")) + "\n"
    else:
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(row[key]) if isinstance(row[key], float)
                                   else str(row[key]) for key in header))
        text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return text


def _figure_path(out: str) -> str:
    return str(Path(out).with_suffix(".png"))


def _cmd_poa(args: argparse.Namespace) -> int:
    basis = _basis_from_args(args)
    report = poa_class(basis, args.delta)
    payload = json.dumps(report.to_dict())
    if args.out:
        Path(args.out).write_text(payload + "\n")
    else:
        print(payload)
    return EXIT_OK


def _cmd_design(args: argparse.Namespace) -> int:
    w, n = _welfare_from_args(args)
    design, report = optimal_design(w, n, args.delta)
    payload = json.dumps({"design": design.to_dict(), "report": report.to_dict()})
    if args.out:
        Path(args.out).write_text(payload + "\n")
    else:
        print(payload)
    return EXIT_OK


def _cmd_setcover_poa(args: argparse.Namespace) -> int:
    n = args.n if args.n is not None else len(args.u)
    if len(args.u) != n:
        raise ValueError(f"--u lists u(1..n): expected {n} values, got {len(args.u)}")
    value = setcover_poa((0.0, *args.u), args.delta, n)
    print(json.dumps({"poa": value, "method": "closed_form", "certificate": "coverage-bound"}))
    return EXIT_OK


def _cmd_setcover_design(args: argparse.Namespace) -> int:
    if args.limit:
        design = optimal_design_limit(args.delta, args.j_max)
        poa = optimal_poa_limit(args.delta)
    else:
        if args.n is None:
            raise ValueError("finite design needs --n (or pass --limit)")
        design, poa = optimal_design_finite(args.n, args.delta)
    payload = json.dumps({"design": design.to_dict(), "poa": poa})
    if args.out:
        Path(args.out).write_text(payload + "\n")
    else:
        print(payload)
    return EXIT_OK


def _cmd_setcover_mismatch(args: argparse.Namespace) -> int:
    rows = []
    for delta_true in args.delta_true:
        for delta_design in args.delta_design:
            report = mismatch_poa(delta_design, delta_true)
            rows.append(
                {
                    "delta_design": delta_design,
                    "delta_true": delta_true,
                    "poa": report.poa,
                    "regime": report.regime,
                }
            )
    _emit_rows(rows, ["delta_design", "delta_true", "poa", "regime"], args)
    return EXIT_OK


def _cmd_worstcase(args: argparse.Namespace) -> int:
    game = build_worstcase_game(args.n, args.delta)
    measured = poa_of_instance(game, tol=args.tol)
    formula = optimal_poa_finite(args.n, args.delta)
    if args.out:
        Path(args.out).write_text(json.dumps(game_to_dict(game)) + "\n")
    print(f"({measured:.4f}, {formula:.4f})")
    return EXIT_OK


def _cmd_oracle_sweep(args: argparse.Namespace) -> int:
    rows = []
    for delta in args.delta:
        basis = _basis_from_args(args)
        worst, witness = brute_force_class_poa(
            basis,
            delta,
            args.m,
            args.values,
            full_valuation_grid=args.grid_valuations,
            tol=args.tol,
        )
        class_poa = poa_class(basis, delta).poa
        config = (
            f"n={basis.n};m={args.m};delta={_fmt(delta)};"
            f"values={'|'.join(_fmt(v) for v in args.values)}"
        )
        rows.append(
            {
                "config": config,
                "worst_poa": worst,
                "class_poa": class_poa,
                "gap": worst - class_poa,
            }
        )
        if args.witness_dir:
            directory = Path(args.witness_dir)
            directory.mkdir(parents=True, exist_ok=True)
            name = f"witness_delta_{_fmt(delta)}.json"
            (directory / name).write_text(json.dumps(game_to_dict(witness)) + "\n")
    _emit_rows(rows, ["config", "worst_poa", "class_poa", "gap"], args)
    return EXIT_OK


def _delta_grid(step: float) -> list[float]:
    """Grid 0, step, 2*step, ... strictly below 1."""
    count = round(1.0 / step)
    if abs(count * step - 1.0) < 1e-9:
        return [i / count for i in range(count)]
    grid = []
    value, i = 0.0, 0
    while value < 1.0 - 1e-12:
        grid.append(value)
        i += 1
        value = i * step
    return grid


def sample_concave_welfare(rng: np.random.Generator, n: int) -> tuple[float, ...]:
    """Concave nondecreasing welfare: sorted positive increments, cumulated.

    Increments are drawn in (0, 1], sorted descending and cumulated, then the
    whole curve is scaled so coverage one has value exactly 1.
    """
    increments = np.sort(1.0 - rng.random(n))[::-1]
    cumulative = np.cumsum(increments) / increments[0]
    return (0.0, *(float(v) for v in cumulative))


def design_sweep_rows(
    seed: int, count: int, n: int, delta_true: float, step: float
) -> list[dict]:
    rng = np.random.default_rng(seed)
    grid = _delta_grid(step)
    rows = []
    for w_id in range(count):
        w = sample_concave_welfare(rng, n)
        for delta in grid:
            design, _ = optimal_design(w, n, delta)
            realized = poa_class(BasisPair(n, w, design.u), delta_true)
            rows.append({"w_id": w_id, "delta": delta, "poa": realized.poa})
    return rows


def _cmd_fig1(args: argparse.Namespace) -> int:
    rows = design_sweep_rows(args.seed, args.count, args.n, args.delta_true, args.grid_step)
    _emit_rows(rows, ["w_id", "delta", "poa"], args)
    if args.out and not args.no_plot:
        from .plots import render_design_sweep

        render_design_sweep(rows, args.delta_true, _figure_path(args.out))
    return EXIT_OK


def mismatch_curve_rows(delta_true_list: Sequence[float], step: float) -> list[dict]:
    rows = []
    for delta_true in delta_true_list:
        for delta_design in _delta_grid(step):
            report = mismatch_poa(delta_design, delta_true)
            rows.append(
                {"delta_true": delta_true, "delta_design": delta_design, "poa": report.poa}
            )
    return rows


def _cmd_fig2(args: argparse.Namespace) -> int:
    rows = mismatch_curve_rows(args.delta_true, args.grid_step)
    _emit_rows(rows, ["delta_true", "delta_design", "poa"], args)
    if args.out and not args.no_plot:
        from .plots import render_mismatch_curves

        render_mismatch_curves(rows, _figure_path(args.out))
    return EXIT_OK


def _add_basis_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--set-cover", action="store_true",
                        help="welfare counts covered value (w = 1 everywhere)")
    parser.add_argument("--w", type=_floats, default=None,
                        help="welfare values for coverage 1..n, comma separated")
    parser.add_argument("--u", type=_floats, default=None,
                        help="utility values for coverage 1..n, comma separated")
    parser.add_argument("--basis", default=None,
                        help="JSON file with full 'w' and 'u' arrays (coverage 0..n)")
    parser.add_argument("--n", type=int, default=None, help="player count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poadesign",
        description="Price-of-anarchy guarantees and utility design for "
                    "resource allocation games with inconsistent valuations.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="rng seed for sampled inputs")
    common.add_argument("--out", default=None, help="write output to this path")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="tabular output format")
    common.add_argument("--tol", type=float, default=1e-9,
                        help="equilibrium comparison tolerance")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poa", parents=[common],
                       help="class guarantee for a curve pair at one uncertainty")
    _add_basis_options(p)
    p.add_argument("--delta", type=float, required=True)
    p.set_defaults(func=_cmd_poa)

    p = sub.add_parser("design", parents=[common],
                       help="synthesize the guarantee-maximizing utility curve")
    p.add_argument("--set-cover", action="store_true")
    p.add_argument("--w", type=_floats, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--delta", type=float, required=True)
    p.set_defaults(func=_cmd_design)

    sc = sub.add_parser("setcover", help="closed-form set covering results")
    scsub = sc.add_subparsers(dest="subcommand", required=True)

    p = scsub.add_parser("poa", parents=[common])
    p.add_argument("--u", type=_floats, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--delta", type=float, required=True)
    p.set_defaults(func=_cmd_setcover_poa)

    p = scsub.add_parser("design", parents=[common])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--limit", action="store_true",
                   help="infinite-player curve instead of the finite recursion")
    p.add_argument("--j-max", type=int, default=12,
                   help="coverage levels to evaluate with --limit")
    p.set_defaults(func=_cmd_setcover_design)

    p = scsub.add_parser("mismatch", parents=[common])
    p.add_argument("--delta-design", type=_floats, required=True)
    p.add_argument("--delta-true", type=_floats, required=True)
    p.set_defaults(func=_cmd_setcover_mismatch)

    p = sub.add_parser("worstcase", parents=[common],
                       help="emit the bound-attaining game and check it")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.set_defaults(func=_cmd_worstcase)

    orc = sub.add_parser("oracle", help="brute-force verification sweeps")
    orcsub = orc.add_subparsers(dest="subcommand", required=True)
    p = orcsub.add_parser("sweep", parents=[common])
    _add_basis_options(p)
    p.add_argument("--m", type=int, required=True, help="resource count")
    p.add_argument("--delta", type=_floats, required=True,
                   help="comma-separated uncertainty levels, one sweep each")
    p.add_argument("--values", type=_floats, required=True,
                   help="value grid for resources")
    p.add_argument("--grid-valuations", action="store_true",
                   help="sweep all interval-endpoint valuations instead of "
                        "the adversarial assignment")
    p.add_argument("--witness-dir", default=None,
                   help="also write each sweep's witness game here")
    p.set_defaults(func=_cmd_oracle_sweep)

    p = sub.add_parser("fig1", parents=[common],
                       help="guarantee of delta-targeted designs on sampled welfares")
    p.add_argument("--count", type=int, default=30)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--delta-true", type=float, default=0.3)
    p.add_argument("--grid-step", type=float, default=0.05)
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=_cmd_fig1)

    p = sub.add_parser("fig2", parents=[common],
                       help="set covering mismatch curves")
    p.add_argument("--delta-true", type=_floats, default=[0.2, 0.3, 0.4])
    p.add_argument("--grid-step", type=float, default=0.01)
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=_cmd_fig2)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, BudgetExceeded, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
