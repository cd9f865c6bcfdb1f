# -*- coding: utf-8 -*-
# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

"""`wg` command line: run benchmark cases and write their error tables.

    wg run --case 1a [--levels 3] [--solver cg] [--compare paper]
    wg run --case-file my_case.json
    wg list
    wg kellogg-sweep --extra-levels 2,3,4
"""

import argparse
import csv
import logging
import os
import sys
from typing import Optional, Sequence

from .cases import get_case, list_cases, load_case_file
from .config import load_config
from .exceptions import CaseError, ConfigError, ExpressionError, SolverError, WGError
from .notifier import BenchNotifier
from .postprocess import METRIC_LABELS, METRICS
from .reference import KELLOGG_SWEEP, compare
from .services import BenchmarkService
from .solvers.solver_base import METHODS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2

COLUMNS = ("level", "h", "cells", "dofs") + METRICS


def _fmt(value):
    return "" if value is None else f"{value:.5e}"


def emit_csv(report, path):
    """One row per level in table order, then the fitted rates

    An empty report gives a header-only file.
    """
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(COLUMNS)
        for record in report.levels:
            w.writerow(
                [record.level, _fmt(record.h), record.n_cells, record.n_dofs]
                + [_fmt(record.norms[metric]) for metric in METRICS]
            )
        rates = report.rates()
        if rates:
            w.writerow(["rate", "", "", ""] + [_fmt(rates[metric]) for metric in METRICS])
    logger.info(f"Wrote {path}")


def emit_rates_csv(report, path):
    rates = report.rates()
    pairwise = report.pairwise() if len(report.levels) >= 2 else {}
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["metric", "rate", "pairwise"])
        for metric in METRICS:
            steps = pairwise.get(metric)
            w.writerow([
                metric,
                _fmt(rates.get(metric)),
                " ".join(_fmt(r) for r in steps) if steps else "",
            ])
    logger.info(f"Wrote {path}")


def emit_sweep_csv(entries, path):
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["extra_levels", "initial_cells"] + list(METRICS))
        for entry in entries:
            rates = entry.report.rates()
            w.writerow(
                [entry.extra_levels, entry.initial_cells]
                + [_fmt(rates.get(metric)) for metric in METRICS]
            )
    logger.info(f"Wrote {path}")


def format_record(case_id, record):
    values = "  ".join(f"{record.norms[metric]:.3e}" for metric in METRICS)
    return f"{case_id:>6} {record.level:>3} h={record.h:.4e} cells={record.n_cells:<7} {values}"


def format_comparison(comparison):
    lines = []
    for record, entries in comparison["levels"]:
        lines.append(f"level {record.level} (h={record.h:.4e})")
        for metric in METRICS:
            computed, published, delta = entries[metric]
            lines.append(
                f"  {METRIC_LABELS[metric]:<22} {computed:.4e}  reference {published:.4e}  delta {delta:+.2%}"
            )
    if comparison["rates"]:
        lines.append("rates")
        for metric, (computed, published, delta) in comparison["rates"].items():
            lines.append(
                f"  {METRIC_LABELS[metric]:<22} {computed:.4f}  reference {published:.4f}  delta {delta:+.4f}"
            )
    return "\n".join(lines)


def _csv_list(text):
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(prog="wg", description="Weak Galerkin benchmark cases.")
    parser.add_argument("--config", action="append", default=[], help="YAML file or conf.d directory (repeatable).")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="Log debug messages.")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="Log warnings and errors only.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_run_options(sub):
        sub.add_argument("--levels", type=int, help="Run only the first LEVELS meshes of the schedule.")
        sub.add_argument("--order", type=int, help="Quadrature order (1..10).")
        sub.add_argument("--out", help="Output directory for CSV files and mesh dumps.")
        sub.add_argument("--dump-mesh", action="store_true", default=None, help="Write every mesh.")
        sub.add_argument("--solver", choices=METHODS, help="Linear solver.")
        sub.add_argument("--tol", type=float, help="Relative residual tolerance.")
        sub.add_argument("--approach", choices=["I", "II"], help="Gradient basis on triangles.")
        sub.add_argument("--workers", type=int, help="Threads computing the local kernels.")

    run = subparsers.add_parser("run", help="Run one benchmark case.")
    source = run.add_mutually_exclusive_group(required=True)
    source.add_argument("--case", help="Built-in case id (see `wg list`).")
    source.add_argument("--case-file", help="JSON case description.")
    run.add_argument(
        "--compare",
        choices=["paper", "reference"],
        help="Print deltas against the published tables (reference is an alias).",
    )
    add_run_options(run)

    subparsers.add_parser("list", help="List the built-in cases.")

    sweep = subparsers.add_parser("kellogg-sweep", help="Interface case rates against the initial mesh.")
    sweep.add_argument("--extra-levels", type=_csv_list, help="Comma separated local refinements, e.g. 0,1,2.")
    add_run_options(sweep)
    return parser


def _overrides(args):
    option = lambda name: getattr(args, name, None)  # noqa: E731
    bench = {
        "output_dir": option("out"),
        "quadrature_order": option("order"),
        "approach": option("approach"),
        "workers": option("workers"),
        "dump_mesh": option("dump_mesh"),
    }
    solver = {"method": option("solver"), "tolerance": option("tol")}
    overrides = {
        "bench": {key: value for key, value in bench.items() if value is not None},
        "solver": {key: value for key, value in solver.items() if value is not None},
    }
    if args.verbose:
        overrides["logging"] = {"level": "DEBUG"}
    elif args.quiet:
        overrides["logging"] = {"level": "WARNING"}
    return overrides


def _setup_logging(level):
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stderr,
    )
    logging.getLogger().setLevel(getattr(logging, level))


def _service(config):
    notifier = BenchNotifier()

    def on_level(event):
        if event.name == "level_done":
            print(format_record(event.case_id, event.content["record"]), flush=True)

    notifier.subscribe(on_level)
    return BenchmarkService(config, notifier)


def _command_run(args, config):
    case = load_case_file(args.case_file) if args.case_file else get_case(args.case)
    service = _service(config)
    out_dir = config["bench"]["output_dir"]
    os.makedirs(out_dir, exist_ok=True)

    report = service.run_case(case, levels=args.levels)
    emit_csv(report, os.path.join(out_dir, f"{report.case}_errors.csv"))
    emit_rates_csv(report, os.path.join(out_dir, f"{report.case}_rates.csv"))

    rates = report.rates()
    if rates:
        print("rates " + "  ".join(f"{metric}={_fmt(rates[metric])}" for metric in METRICS))
    if args.compare:
        comparison = compare(report, case.reference_key)
        if comparison is None:
            print(f"No reference table for case {report.case}")
        else:
            print(format_comparison(comparison))
    return EXIT_OK


def _command_list(args, config):
    for case_id, description in list_cases():
        print(f"{case_id:>7}  {description}")
    return EXIT_OK


def _command_sweep(args, config):
    service = _service(config)
    out_dir = config["bench"]["output_dir"]
    os.makedirs(out_dir, exist_ok=True)
    entries = service.kellogg_sweep(args.extra_levels, levels=args.levels)
    emit_sweep_csv(entries, os.path.join(out_dir, "4_sweep_rates.csv"))
    for entry in entries:
        rates = entry.report.rates()
        line = "  ".join(f"{metric}={_fmt(rates.get(metric))}" for metric in METRICS)
        print(f"extra_levels={entry.extra_levels} cells={entry.initial_cells}  {line}")
        published = KELLOGG_SWEEP.get(entry.initial_cells)
        if published:
            print("  reference " + "  ".join(f"{metric}={published[metric]:.4f}" for metric in METRICS))
    return EXIT_OK


COMMANDS = {
    "run": _command_run,
    "list": _command_list,
    "kellogg-sweep": _command_sweep,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config, _overrides(args))
    except ConfigError as e:
        print(f"wg: {e} {e.details or ''}", file=sys.stderr)
        return EXIT_CONFIG
    _setup_logging(config["logging"]["level"])

    if args.command == "run" and args.case and args.case_file is None:
        try:
            get_case(args.case)
        except CaseError as e:
            logger.error(str(e))
            return EXIT_CONFIG

    try:
        return COMMANDS[args.command](args, config)
    except (ConfigError, ExpressionError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_CONFIG
    except SolverError as e:
        logger.error(f"Solver {e.method} failed after {e.iterations} iterations: {e}")
        return EXIT_FAILURE
    except WGError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILURE
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    raise SystemExit(main())
