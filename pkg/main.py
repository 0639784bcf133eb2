"""Command-line entry point for the quantization checks."""

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple, Type

from app.routes import SUITE_ORDER, Route, all_routes, get_route
from app.state import RunState
from engine.errors import QuantizationError
from models.results import CheckReport, CheckStatus
from utils.app_init import initialize_engine, load_config
from utils.report_writer import build_report, to_jsonable, write_report, write_table

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _add_common(parser: argparse.ArgumentParser, suppress: bool):
    # subcommand copies must not overwrite values given before the subcommand
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument('--hbar', type=float, default=default, help='Planck constant (default from config)')
    parser.add_argument('--out', default=default, help='JSON report path (stdout when omitted)')
    parser.add_argument('--csv-dir', dest='csv_dir', default=default, help='Directory for CSV tables')
    parser.add_argument('--config', default=default, help='YAML config file')
    parser.add_argument('-v', '--verbose', action='store_true', default=default or False)
    parser.add_argument('-q', '--quiet', action='store_true', default=default or False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='quantize',
        description='Numerical checks for geometric quantization on model phase spaces'
    )
    _add_common(parser, suppress=False)
    subparsers = parser.add_subparsers(dest='command', required=True)
    for suite in all_routes():
        sub = subparsers.add_parser(suite.name, help=suite.help)
        _add_common(sub, suppress=True)
        suite.add_arguments(sub)
    all_parser = subparsers.add_parser('all', help='Run every suite with default parameters')
    _add_common(all_parser, suppress=True)
    all_parser.add_argument('--workers', type=int, help='Thread pool size (default from config)')
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr
    )


def run_suite(
    suite: Route,
    args,
    state: RunState,
    errors: Tuple[Type[Exception], ...] = (QuantizationError,)
) -> List[CheckReport]:
    """Run one suite; an exception of type ``errors`` escaping the suite becomes a failed check."""
    logger.info("running suite %s", suite.name)
    try:
        reports = suite.run(args, state)
    except errors as e:
        logger.warning("suite %s aborted: %s", suite.name, e)
        reports = [CheckReport(
            check_id=f"{suite.name}.error",
            inputs={},
            outputs={},
            status=CheckStatus.FAIL,
            message=f"{type(e).__name__}: {e}"
        )]
    state.add_reports(suite.name, reports)
    return reports


def run_all(args, state: RunState, workers: int):
    """Every suite in a thread pool; reports are assembled in fixed suite order.

    A suite rejecting its defaults with ValueError fails alone, the others still run.
    """
    suites = all_routes()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run_suite, suite, args, state, (ValueError,)) for suite in suites]
        for future in futures:
            future.result()


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    configure_logging(args.verbose, args.quiet)
    state = RunState()
    try:
        config = load_config(args.config)
        hbar = args.hbar if args.hbar is not None else float(config['cli']['hbar'])
        if not hbar > 0:
            raise ValueError(f"--hbar must be positive, got {hbar}")
        args.hbar = hbar
        config['cli']['hbar'] = hbar
        initialize_engine(state, config)

        if args.command == 'all':
            workers = getattr(args, 'workers', None) or config['cli']['workers']
            run_all(args, state, workers)
        else:
            run_suite(get_route(args.command), args, state)
    except ValueError as e:
        logger.error("%s", e)
        return EXIT_USAGE

    reports = state.reports(SUITE_ORDER)
    if args.out:
        write_report(args.out, reports, hbar)
    else:
        print(json.dumps(to_jsonable(build_report(reports, hbar)), indent=2, sort_keys=True, allow_nan=False))
    if args.csv_dir:
        for name, table in state.tables().items():
            write_table(args.csv_dir, name, table)

    failed = [r.check_id for r in reports if not r.passed]
    if failed:
        logger.warning("failed checks: %s", ", ".join(failed))
        return EXIT_FAIL
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
