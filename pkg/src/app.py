import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import structlog

from src.commands.exceptions import CommandFailed
from src.commands.spec import Command, ExitCode
from src.commands.views import HANDLERS
from src.config_log import configure_logging
from src.geometry.exceptions import InputError, InvariantBreachError
from src.geometry.gen import GeneratorKind
from src.geometry.verify import VerifyMode
from src.middleware.log_middleware import logging_middleware
from src.settings import settings
from src.utils import get_service_name
from src.version import __version__

logger = structlog.get_logger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as exceptions; argparse's own exit code 2 is
    taken by ``hypothesis_fails``."""

    def error(self, message: str):
        raise CommandFailed(ExitCode.INPUT_ERROR, "UsageError", message)


def create_app() -> argparse.ArgumentParser:
    """Factory function for creating the command-line parser.

    Every subcommand gets the shared options (log level, output file,
    timing) and its handler, wrapped by the logging middleware, as the
    ``handler`` default.

    Returns:
        argparse.ArgumentParser: Configured parser.
    """
    common = _ArgumentParser(add_help=False)
    common.add_argument("--log-level", default=None, help="log level (default from settings)")
    common.add_argument("-o", "--output", type=Path, default=None, help="output file (default stdout)")
    common.add_argument("--timing", action="store_true", help="include processing time in reports")

    parallel = _ArgumentParser(add_help=False)
    parallel.add_argument("--jobs", type=int, default=None, help="worker processes (default HELLY_JOBS or 1)")

    parser = _ArgumentParser(prog=get_service_name(), description="Colorful Helly-type checks in exact arithmetic")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    gen = subparsers.add_parser(Command.GEN.value, parents=[common], help="generate an instance")
    gen.add_argument("kind", choices=[kind.value for kind in GeneratorKind])
    gen.add_argument("--d", type=int, required=True)
    gen.add_argument("--k", type=int, default=1)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--colors", type=int, default=None, help="number of colors of random kinds")
    gen.add_argument("--extra", type=int, default=0, help="extra vectors per planted color")
    gen.add_argument("--size", type=int, default=3, help="vectors per color of random_colors")
    gen.add_argument("--tight", action="store_true", help="extremal colors with lineality exactly k")

    lineality = subparsers.add_parser(Command.LINEALITY.value, parents=[common], help="lineality of every color")
    lineality.add_argument("file", type=Path)
    lineality.add_argument("--color", type=int, default=None)

    decompose = subparsers.add_parser(
        Command.DECOMPOSE.value, parents=[common], help="Colorful Reay decomposition"
    )
    decompose.add_argument("file", type=Path)
    decompose.add_argument("--k", type=int, default=None)
    decompose.add_argument("--weak", action="store_true", help="skip the positive-basis strengthening")

    verify = subparsers.add_parser(
        Command.VERIFY.value, parents=[common, parallel], help="check a colorful Helly theorem"
    )
    verify.add_argument("file", type=Path)
    verify.add_argument("--mode", choices=[mode.value for mode in VerifyMode], required=True)
    verify.add_argument("--k", type=int, default=None)
    verify.add_argument(
        "--loose-colors", action="store_true", help="any number of colors, no Phase 1 cap"
    )

    selftest = subparsers.add_parser(
        Command.SELFTEST.value, parents=[common, parallel], help="run the acceptance checks"
    )
    selftest.add_argument("--max-d", type=int, default=None)
    selftest.add_argument(
        "--full", action="store_true", help="acceptance scale (selftest_full_* settings, d up to 5)"
    )

    for command, handler in HANDLERS.items():
        subparsers.choices[command.value].set_defaults(handler=logging_middleware(handler))
    return parser


def _fail(error: CommandFailed) -> int:
    sys.stderr.write(json.dumps(error.to_error_object()) + "\n")
    return int(error.exit_code)


def run(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run the subcommand and return the process exit code."""
    parser = create_app()
    try:
        args = parser.parse_args(argv)
    except CommandFailed as e:
        return _fail(e)
    configure_logging(
        args.log_level or settings.get("log_level", "INFO"),
        settings.get("log_format", "console"),
    )
    try:
        return int(args.handler(args))
    except CommandFailed as e:
        return _fail(e)
    except InputError as e:
        return _fail(CommandFailed(ExitCode.INPUT_ERROR, type(e).__name__, e.message))
    except InvariantBreachError as e:
        logger.exception("run: invariant breach")
        return _fail(CommandFailed(ExitCode.INVARIANT_BREACH, type(e).__name__, e.message))


def main() -> None:
    sys.exit(run())
