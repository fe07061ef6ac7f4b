"""
Command-line entry point.

    semiflow [-v|-vv] [--config FILE] COMMAND [ARGS...]

Exit codes: 0 ok, 1 suite failed, 2 numerical failure, 3 unknown generator id,
64 usage or configuration error.
"""

import argparse
import logging
import sys
from typing import List, Optional

from . import __version__
from .actions import create_registry
from .config import ExperimentConfig
from .errors import SemiflowError, UsageError
from .formatting import create_auto_printer, error_line
from .parallel import worker_count

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


class _GlobalParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _GlobalParser(
        prog="semiflow",
        description="Numerical experiments on holomorphic semigroups and harmonic measure.",
        epilog="Run 'semiflow help' for the list of commands.",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging"
    )
    parser.add_argument("--config", help="INI file with an [experiment] section")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", nargs=argparse.REMAINDER, help="command and its arguments")
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one command line and return its exit code.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])
    """
    printer = create_auto_printer()
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        printer(error_line(str(e)))
        return e.exit_code

    configure_logging(args.verbose)
    logger.debug("main() entry")

    try:
        logger.debug(f"Using up to {worker_count()} worker threads")
        config = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
    except SemiflowError as e:
        printer(error_line(str(e)))
        logger.debug("main() exit - configuration error")
        return e.exit_code

    registry = create_registry(printer=printer, config=config)
    if not args.command:
        registry.dispatch("help", [])
        logger.debug("main() exit - no command")
        return UsageError.exit_code

    code = registry.dispatch(args.command[0], args.command[1:], user_input=" ".join(args.command))
    logger.debug(f"main() exit - code {code}")
    return code


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


__all__ = ["build_parser", "configure_logging", "main", "run"]
