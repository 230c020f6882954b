#!/usr/bin/env python3
"""
Billiards Command Line Interface (CLI)

Main entry point for the billiards tool: quantum spectra, periodic orbits,
level statistics and length spectra of rectangle, circle and ellipse
billiards.
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from cli.commands import fourier, orbits, selftest, spectrum, stats
from cli.config import TOOL_VERSION, RunConfig, load_config
from core.exceptions import (
    BilliardError,
    ConfigError,
    ContractViolation,
    ConvergenceError,
    DegenerateOrbitError,
    DomainError,
    FamilyNotFoundError,
    InsufficientLevelsError,
    InvariantFailure,
)
from engines.engine_manager import EngineManager

logger = logging.getLogger("cli")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_INVARIANT = 3

EXIT_CODES = {
    ConfigError: EXIT_USAGE,
    DomainError: EXIT_USAGE,
    ContractViolation: EXIT_USAGE,
    ConvergenceError: EXIT_NUMERIC,
    InsufficientLevelsError: EXIT_NUMERIC,
    FamilyNotFoundError: EXIT_NUMERIC,
    DegenerateOrbitError: EXIT_NUMERIC,
    InvariantFailure: EXIT_INVARIANT,
}

DEFAULT_ENGINES_CONFIG = "configs/engines.yml"


def exit_code_for(error: BaseException) -> int:
    """Exit code of an error raised while running a command."""
    if isinstance(error, ValidationError):
        return EXIT_USAGE
    for error_type, code in EXIT_CODES.items():
        if isinstance(error, error_type):
            return code
    return EXIT_NUMERIC if isinstance(error, BilliardError) else EXIT_USAGE


def configure_logging(verbose: bool = False, debug: bool = False) -> None:
    level = logging.DEBUG if debug else logging.INFO if verbose else logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def setup_global_parser() -> argparse.ArgumentParser:
    """Set up the main argument parser with global options."""
    parser = argparse.ArgumentParser(
        prog="billiards",
        description="Spectra, periodic orbits and spectral statistics of integrable billiards",
        epilog=(
            "Exit codes: 0 success, 1 usage/config error, 2 numeric failure, "
            "3 invariant-check failure.\n"
            "Environment: BILLIARDS_CONFIG (config file), BILLIARDS_CACHE_DIR (spectrum cache)."
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )

    parser.add_argument(
        "-v",
        "--version",
        action="version",
        version=f"%(prog)s {TOOL_VERSION}",
        help="Show version and exit",
    )

    parser.add_argument(
        "-c",
        "--config",
        type=str,
        default=None,
        help="Path to config file (default: 'configs/default.yaml', env: BILLIARDS_CONFIG)",
        metavar="CONFIG",
    )

    parser.add_argument(
        "--engines-config",
        type=str,
        default=DEFAULT_ENGINES_CONFIG,
        help=f"Engine tolerances file (default: '{DEFAULT_ENGINES_CONFIG}')",
        metavar="FILE",
    )

    parser.add_argument(
        "-o",
        "--output-dir",
        type=str,
        default=None,
        help="Directory for output files",
        metavar="DIR",
    )

    parser.add_argument(
        "--cache-dir",
        type=str,
        default=None,
        help="Spectrum cache directory (env: BILLIARDS_CACHE_DIR)",
        metavar="DIR",
    )

    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="Seed of every random draw",
    )

    parser.add_argument(
        "--verbose",
        action="store_true",
        help="Enable verbose output",
    )

    parser.add_argument(
        "--debug",
        action="store_true",
        help="Enable debug mode",
    )

    return parser


def setup_subparsers(parser: argparse.ArgumentParser) -> argparse._SubParsersAction:
    """Set up subparsers for commands."""
    subparsers = parser.add_subparsers(
        title="commands",
        description="Available commands",
        dest="command",
        help="Command to run",
    )

    spectrum.add_command(subparsers)
    orbits.add_command(subparsers)
    stats.add_command(subparsers)
    fourier.add_command(subparsers)
    selftest.add_command(subparsers)

    return subparsers


def build_config(args: argparse.Namespace) -> RunConfig:
    """RunConfig from the config file plus global and command flags."""
    overrides: Dict[str, Any] = {
        "output_dir": args.output_dir,
        "cache_dir": args.cache_dir,
        "seed": args.seed,
    }
    command_overrides = getattr(args, "overrides", None)
    if command_overrides is not None:
        overrides.update(command_overrides(args))
    return load_config(args.config, overrides)


def build_manager(args: argparse.Namespace, config: RunConfig) -> EngineManager:
    overrides = {name: dict(settings) for name, settings in config.engines.items()}
    if config.cache_dir:
        overrides.setdefault("spectrum", {})["cache_dir"] = config.cache_dir
    return EngineManager(args.engines_config, overrides=overrides)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI."""
    parser = setup_global_parser()
    setup_subparsers(parser)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    configure_logging(args.verbose, args.debug)

    # If no command specified, print help
    if not args.command:
        parser.print_help()
        return EXIT_OK

    try:
        config = build_config(args)
        logger.debug(f"Run config: {config.provenance()}")
        manager = build_manager(args, config)
        return args.func(args, config, manager)
    except ValidationError as exc:
        logger.error(f"Invalid configuration: {exc}")
        return EXIT_USAGE
    except BilliardError as exc:
        code = exit_code_for(exc)
        logger.error(f"{args.command} failed ({type(exc).__name__}): {exc}")
        return code


if __name__ == "__main__":
    sys.exit(main())
