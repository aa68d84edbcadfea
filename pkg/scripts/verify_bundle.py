#!/usr/bin/env python
"""
Script to run the tangent bundle verification suite.

Verbs:
    verify     run every property check for a fixture and order
    lift-demo  tabulate lifted metric and Lagrangian values

Exit status is 0 when every check passes, 1 when a check fails and 2 on
usage, configuration or output errors.
"""

import os
import sys
import argparse
from typing import List, Optional

# Add parent directory to path to allow imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from tkbundle.core.suite import SuiteError, run_lift_demo, run_verify
from tkbundle.utils.config import FIXTURE_DIR_ENV, ConfigError, RunConfig
from tkbundle.utils.logging import log_exception, setup_logging
from tkbundle.utils.validators import KNOWN_FIXTURES, OUTPUT_FORMATS, ValidationError, parse_tolerance_overrides

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

def parse_args(argv: Optional[List[str]] = None, defaults: Optional[RunConfig] = None) -> argparse.Namespace:
    """
    Parse command-line arguments.

    Args:
        argv: Arguments (default: sys.argv[1:])
        defaults: Settings used for omitted flags (default: built-in defaults)
    """
    defaults = defaults or RunConfig()
    parser = argparse.ArgumentParser(description='Verify the vector bundle structure of higher-order tangent bundles')
    parser.add_argument('command', choices=['verify', 'lift-demo'],
                       help='What to run')

    # Run options
    parser.add_argument('--fixture', type=str, default=defaults.fixture, choices=KNOWN_FIXTURES,
                       help=f'Manifold fixture (default: {defaults.fixture})')
    parser.add_argument('--order', type=int, default=defaults.order,
                       help=f'Jet order k (default: {defaults.order})')
    parser.add_argument('--samples', type=int, default=defaults.samples,
                       help=f'Random samples per check (default: {defaults.samples})')
    parser.add_argument('--seed', type=int, default=defaults.seed,
                       help=f'Random seed (default: {defaults.seed})')
    parser.add_argument('--tol', action='append', default=[], metavar='CHECK=VALUE',
                       help='Tolerance override for one check id (repeatable)')
    parser.add_argument('--negative-control', action='store_true',
                       help='Run the compatibility check with a corrupted M^2; the run must fail')
    parser.add_argument('--fixture-dir', type=str, default=defaults.fixture_dir,
                       help=f'Directory of <fixture>.env parameter files (default: ${FIXTURE_DIR_ENV})')
    parser.add_argument('--workers', type=int, default=defaults.workers,
                       help=f'Worker threads per check (default: {defaults.workers})')
    parser.add_argument('--progress', action='store_true',
                       help='Show per-check progress bars')

    # Output options
    parser.add_argument('--format', type=str, default=defaults.output_format, choices=OUTPUT_FORMATS,
                       help=f'Report format (default: {defaults.output_format})')
    parser.add_argument('--out', type=str, default=None,
                       help='Report file (default: stdout)')

    # Logging options
    parser.add_argument('--log-level', type=str, default='WARNING',
                       choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
                       help='Logging level (default: WARNING)')
    parser.add_argument('--log-file', type=str, default=None,
                       help='Also log to this file under ./logs')

    return parser.parse_args(argv)

def build_config(args: argparse.Namespace) -> RunConfig:
    """
    Turn parsed arguments into a validated RunConfig.

    Raises:
        ConfigError: On invalid settings
    """
    try:
        tolerances = parse_tolerance_overrides(args.tol)
    except ValidationError as e:
        raise ConfigError(str(e))

    return RunConfig(
        fixture=args.fixture,
        order=args.order,
        samples=args.samples,
        seed=args.seed,
        tolerances=tolerances,
        output_format=args.format,
        output_path=args.out,
        negative_control=args.negative_control,
        workers=args.workers,
        progress=args.progress,
        fixture_dir=args.fixture_dir,
    ).validate()

def main(argv: Optional[List[str]] = None) -> int:
    """Main function."""
    try:
        defaults = RunConfig.from_env()
    except ConfigError as e:
        setup_logging().error(f"Invalid environment configuration: {e}")
        return EXIT_USAGE

    try:
        args = parse_args(argv, defaults)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_PASS

    logger = setup_logging(
        log_level=args.log_level,
        log_file=args.log_file,
        log_dir='./logs' if args.log_file else None
    )

    try:
        config = build_config(args)
    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_USAGE

    if config.output_path:
        directory = os.path.dirname(os.path.abspath(config.output_path))
        if not os.path.isdir(directory) or not os.access(directory, os.W_OK):
            logger.error(f"Output path {config.output_path} is not writable")
            return EXIT_USAGE

    logger.info(f"Running {args.command} on {config.fixture} at order {config.order}")
    try:
        report = run_verify(config) if args.command == 'verify' else run_lift_demo(config)
    except SuiteError as e:
        logger.error(f"Error: {str(e)}")
        return EXIT_FAIL
    except Exception as e:
        log_exception(logger, e, "Unexpected error")
        return EXIT_FAIL

    rendered = report.render(config.output_format)
    if config.output_path:
        try:
            with open(config.output_path, 'w') as f:
                f.write(rendered)
        except OSError as e:
            logger.error(f"Failed to write report to {config.output_path}: {str(e)}")
            return EXIT_USAGE
        logger.info(f"Saved report to {config.output_path}")
    else:
        sys.stdout.write(rendered)
        if not rendered.endswith('\n'):
            sys.stdout.write('\n')

    if not report.passed:
        logger.error(f"Failed checks: {', '.join(report.failed_checks)}")
        return EXIT_FAIL

    return EXIT_PASS

if __name__ == "__main__":
    sys.exit(main())
