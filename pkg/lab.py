#!/usr/bin/env python3
"""
Command-line front end for cascade_lab.

Usage:
    python lab.py generate --config er.json --seed 7
    python lab.py sweep --config er.json --set k=5 --set grid.kind=uniform
    python lab.py utility --set input_dir=results/er2000
    python lab.py oracle-check --trials 20000

Every run appends to <output_dir>/run_ledger.jsonl. On failure a JSON
error object is printed on stderr and the exit code names the family:
2 config, 3 data, 4 runtime.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from cascade_lab.audit import RunLedger
from cascade_lab.config import load_config
from cascade_lab.errors import EXIT_RUNTIME, CascadeLabError
from cascade_lab.experiments.analysis import WidthMeasure
from cascade_lab.experiments.commands import COMMANDS

from config import (
    DEFAULT_OUTPUT_DIR,
    LEDGER_FILENAME,
    LOG_DATE_FORMAT,
    LOG_FORMAT,
    LOG_LEVEL,
    LOG_LEVEL_QUIET,
    LOG_LEVEL_VERBOSE,
    SUMMARY_VALUE_WIDTH,
)

console = Console()
error_console = Console(stderr=True)


def setup_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = LOG_LEVEL_VERBOSE if verbose else LOG_LEVEL_QUIET if quiet else LOG_LEVEL
    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        datefmt=LOG_DATE_FORMAT,
        handlers=[RichHandler(console=error_console, rich_tracebacks=True, show_path=False)],
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lab.py",
        description="Seed selection for independent cascades across the percolation transition",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="JSON config file")
    common.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
        help="Override one config entry, e.g. --set width.sizes=[500,1000] (repeatable)",
    )
    common.add_argument("--seed", type=int, default=None, help="rng_seed")
    common.add_argument("--output-dir", type=str, default=None, help=f"Output directory (default {DEFAULT_OUTPUT_DIR})")
    common.add_argument("--trials", type=int, default=None, help="Monte-Carlo realizations per evaluation")
    common.add_argument("--workers", type=int, default=None, help="Worker processes")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="Warnings and errors only")

    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, experiment in COMMANDS.items():
        command = sub.add_parser(name, parents=[common], help=experiment.description, description=experiment.description)
        if name == "width":
            command.add_argument(
                "--width-measure", choices=[m.value for m in WidthMeasure], default=None,
                help="Gain-curve width: threshold region, standard deviation or FWHM (width.measure)",
            )
    return parser


def _short(value) -> str:
    text = value if isinstance(value, str) else json.dumps(value, default=str)
    if len(text) > SUMMARY_VALUE_WIDTH:
        text = text[: SUMMARY_VALUE_WIDTH - 3] + "..."
    return text


def print_summary(result) -> None:
    table = Table(title=f"{result.command} ({result.duration_ms} ms)", show_header=True)
    table.add_column("result", style="cyan")
    table.add_column("value")
    for key, value in result.summary.items():
        table.add_row(str(key), _short(value))
    console.print(table)
    for path in result.outputs:
        console.print(f"[green]wrote[/green] {path}")


def print_error(error: dict) -> None:
    print(json.dumps(error), file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one experiment, return the exit code."""
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose, args.quiet)
    if getattr(args, "width_measure", None):
        args.overrides.append(f"width.measure={args.width_measure}")

    try:
        config = load_config(
            args.config,
            args.overrides,
            rng_seed=args.seed,
            output_dir=args.output_dir,
            trials=args.trials,
            workers=args.workers,
        )
        ledger = RunLedger(str(Path(config.output_dir) / LEDGER_FILENAME))
    except CascadeLabError as e:
        print_error(e.to_dict())
        return e.exit_code

    result = COMMANDS[args.command](config, ledger).run()
    if not result.success:
        print_error(result.error_dict())
        return result.exit_code or EXIT_RUNTIME

    if not args.quiet:
        print_summary(result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
