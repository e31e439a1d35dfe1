"""Command-line interface.

Subcommands
-----------
run      run a scenario from a config file
preset   run one of the built-in scenarios
compare  summarize a previously written path-record CSV

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 I/O failure.
"""

import argparse
import json
import sys

from dataclasses import replace

from .errors import ComparisonError, ConfigError, NumericalError
from .scenarios import (
    PRESET_NAMES,
    compare,
    emit,
    load_scenario,
    preset,
    read_record_csv,
    run_scenario,
)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ehrenfest",
        description=(
            "Classical, semiclassical, and exact quantum phase-space paths "
            "for a 1-D coherent-state wavepacket."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario from a config file")
    p_run.add_argument("--config", required=True, help="scenario config file")
    p_run.add_argument("--out", required=True, help="output prefix for csv/json/svg")
    p_run.add_argument(
        "--no-quantum", action="store_true", help="skip the quantum reference run"
    )

    p_preset = sub.add_parser("preset", help="run a built-in scenario")
    p_preset.add_argument("name", choices=PRESET_NAMES)
    p_preset.add_argument("--out", required=True, help="output prefix for csv/json/svg")
    p_preset.add_argument(
        "--no-quantum", action="store_true", help="skip the quantum reference run"
    )

    p_compare = sub.add_parser("compare", help="summarize a path-record CSV")
    p_compare.add_argument("--csv", required=True, help="record CSV written by run/preset")

    return parser


def _run_and_emit(scenario, out_prefix, no_quantum):
    if no_quantum:
        scenario = replace(scenario, quantum=None)
    record = run_scenario(scenario)
    summary = None
    if record.has_quantum:
        try:
            summary = compare(record)
        except ComparisonError as exc:
            print(f"note: no comparison summary ({exc})", file=sys.stderr)
    written = emit(record, summary, out_prefix)
    for path in written:
        print(f"wrote {path}")
    return 0


def _dispatch(args):
    if args.command == "run":
        return _run_and_emit(load_scenario(args.config), args.out, args.no_quantum)
    if args.command == "preset":
        return _run_and_emit(preset(args.name), args.out, args.no_quantum)
    if args.command == "compare":
        summary = compare(read_record_csv(args.csv))
        print(json.dumps(summary.to_dict(), indent=2, sort_keys=True))
        return 0
    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
