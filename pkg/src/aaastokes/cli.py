"""Command-line front end.

Exit codes: 0 success, 1 a reference comparison failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import experiments, files
from .approx_asymptotics import amplitude_ratio, default_eps_grid, eps_sweep, pair_amplitudes
from .exact_asymptotics import exact_leading_order
from .nonlinear import (
    fit_direct,
    fit_squared,
    nonlinear_exp_estimate,
    nonlinear_leading_order,
    residue_pattern,
    singulant,
)
from .rational_fit import InvalidInputError, SampleGrid, fit_pole_set

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--interval", nargs=2, type=float, metavar=("A", "B"),
                   help="sample interval (default [-4, 4]; [-10, 10] for the nonlinear problem)")
    p.add_argument("--dx", type=float, default=0.1, help="sample spacing (default 0.1)")
    p.add_argument("--input", type=Path, help="sample grid CSV (x,re_f,im_f) instead of the model u_0")
    p.add_argument("--tol", type=float, action="append", default=[], help="AAA tolerance, repeatable")
    p.add_argument("--eps", type=float, action="append", default=[], help="epsilon, repeatable")
    p.add_argument("--eps-range", nargs=3, metavar=("LO", "HI", "PER_DECADE"),
                   help="log-spaced epsilon grid")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory (default ./out)")
    p.add_argument("--workers", type=int, default=1, help="threads for tolerance sweeps (default 1)")
    p.add_argument("--quiet", action="store_true", help="suppress the summary on stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aaastokes", description="Stokes switching from rational approximations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _common(sub.add_parser("fit", help="AAA fit and pole/residue table"))
    _common(sub.add_parser("analyze", help="per-pair amplitudes and amplitude ratio"))
    _common(sub.add_parser("sweep", help="amplitude ratio over (tolerance, eps)"))
    _common(sub.add_parser("nonlinear", help="squared-fit pipeline"))
    rep = sub.add_parser("reproduce", help="regenerate published tables and figure data")
    rep.add_argument("target", choices=["table1", "table2", "table3", "figures", "all"])
    _common(rep)
    return parser


def _eps_values(args) -> list[float]:
    vals = list(args.eps)
    if args.eps_range:
        lo, hi, n = args.eps_range
        try:
            vals += list(default_eps_grid(float(lo), float(hi), int(n)))
        except ValueError as exc:
            raise InvalidInputError(f"bad --eps-range: {exc}") from exc
    return vals


def _config(args) -> experiments.RunConfig:
    command = args.command if args.command != "reproduce" else f"reproduce {args.target}"
    interval = args.interval
    if interval is None:
        interval = (-10.0, 10.0) if command in ("nonlinear", "reproduce table3") else (-4.0, 4.0)
    try:
        return experiments.RunConfig(
            command=command,
            sample_interval=tuple(interval),
            dx=args.dx,
            tolerances=list(args.tol),
            epsilons=_eps_values(args),
            output_dir=str(args.out),
            workers=args.workers,
        )
    except ValueError as exc:
        raise InvalidInputError(str(exc)) from exc


def _grid(args, config, func=None) -> SampleGrid:
    if args.input is not None:
        if not args.input.exists():
            raise InvalidInputError(f"no such file: {args.input}")
        return files.read_grid_csv(args.input)
    a, b = config.sample_interval
    if func is None:
        def func(x):
            return exact_leading_order(x).real
    return SampleGrid.uniform(a, b, config.dx, func)


def _say(args, line: str) -> None:
    if not args.quiet:
        print(line)


def cmd_fit(args, config) -> int:
    grid = _grid(args, config)
    for tol in config.tolerances or [experiments.TABLE1_TOLERANCE]:
        approx, ps = fit_pole_set(grid, tol)
        path = files.write_pole_set_json(
            config.out / f"poles_tol{tol:g}.json", ps, config.to_dict(),
            extra={"tolerance": tol, "support_points": approx.m, "converged": approx.converged},
        )
        _say(args, f"tol {tol:g}: {approx.m} support points, {len(ps)} pairs, "
                   f"{len(ps.discarded)} discarded -> {path}")
        for pair in ps.pairs:
            _say(args, f"  pair {pair.pair_index}: p = {pair.pole:.4f}, a = {pair.residue:.4f}")
    return EXIT_OK


def cmd_analyze(args, config) -> int:
    grid = _grid(args, config)
    eps_values = config.epsilons or [0.2]
    rows = []
    for tol in config.tolerances or [experiments.TABLE1_TOLERANCE]:
        _, ps = fit_pole_set(grid, tol)
        for eps in eps_values:
            ratio = amplitude_ratio(ps, eps)
            amps = pair_amplitudes(ps, eps)
            rows.append((tol, eps, ratio, *amps))
            _say(args, f"tol {tol:g}, eps {eps:g}: ratio {ratio:.6f}; pair amplitudes "
                       + " ".join(f"{v:.3g}" for v in amps))
    width = max(len(r) for r in rows) - 3
    header = ["tolerance", "epsilon", "amplitude_ratio"] + [f"pair_{k + 1}" for k in range(width)]
    rows = [r + (float("nan"),) * (width + 3 - len(r)) for r in rows]
    files.write_csv(config.out / "analysis.csv", header, rows, config.to_dict())
    return EXIT_OK


def cmd_sweep(args, config) -> int:
    grid = _grid(args, config)
    tols = config.tolerances or experiments.TABLE2_TOLERANCES
    eps_values = config.epsilons or list(default_eps_grid())
    records = eps_sweep(grid, tols, eps_values, max_workers=config.workers)
    path = files.write_sweep_csv(config.out / "sweep.csv", records, config.to_dict())
    _say(args, f"{len(records)} records -> {path}")
    return EXIT_OK


def cmd_nonlinear(args, config) -> int:
    grid = _grid(args, config, lambda x: nonlinear_leading_order(x).real)
    tol = config.tolerances[0] if config.tolerances else experiments.TABLE3_TOLERANCE
    _, direct = fit_direct(grid, tol)
    sq = fit_squared(grid, tol)
    payload = files.table3_payload(direct, sq.pole_set)
    payload["tolerance"] = tol
    payload["pattern_direct"] = residue_pattern(direct).value
    payload["pattern_squared"] = residue_pattern(sq.pole_set).value
    chi = singulant(sq, 5.0)
    payload["singulant_at_5"] = [chi.real, chi.imag]
    files.write_json(config.out / "nonlinear.json", payload, config.to_dict())

    x = np.round(np.linspace(1.0, 5.0, 401), 12)
    rows = []
    for eps in config.epsilons or [0.1]:
        rows += [(eps, xi, v) for xi, v in zip(x, nonlinear_exp_estimate(sq, x, eps))]
    files.write_csv(config.out / "nonlinear_estimate.csv", ["epsilon", "x", "estimate"], rows,
                    config.to_dict())
    _say(args, f"squared: {payload['pattern_squared']}, direct: {payload['pattern_direct']}, "
               f"chi(5) = {chi:.5f}")
    return EXIT_OK


def cmd_reproduce(args, config) -> int:
    fn = {
        "table1": experiments.reproduce_table1,
        "table2": experiments.reproduce_table2,
        "table3": experiments.reproduce_table3,
        "figures": experiments.reproduce_figures,
        "all": experiments.reproduce_all,
    }[args.target]
    report = fn(config)
    for line in report.lines:
        _say(args, line)
    for path in report.files:
        _say(args, f"wrote {path}")
    _say(args, f"{report.name}: {'PASS' if report.passed else 'FAIL'}")
    return EXIT_OK if report.passed else EXIT_MISMATCH


COMMANDS = {
    "fit": cmd_fit,
    "analyze": cmd_analyze,
    "sweep": cmd_sweep,
    "nonlinear": cmd_nonlinear,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = _config(args)
        return COMMANDS[args.command](args, config)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
