import functools
import time
from argparse import Namespace
from typing import Callable

import structlog

from src.commands.spec import ExitCode

logger = structlog.get_logger(__name__)


def logging_middleware(handler: Callable[[Namespace], ExitCode]) -> Callable[[Namespace], ExitCode]:
    """Wrap a subcommand handler with logging and timing.

    Logs:
    - Command start with its arguments
    - Command completion with exit code and processing time
    - Command failures with error details

    Args:
        handler: Subcommand handler to wrap

    Returns:
        The wrapped handler

    Raises:
        Exception: Propagates any exception raised by the handler
    """

    @functools.wraps(handler)
    def wrapper(args: Namespace) -> ExitCode:
        start_time = time.time()
        arguments = {
            key: str(value) for key, value in vars(args).items() if key != "handler"
        }
        logger.info("Command started", command=args.command, arguments=arguments)

        try:
            exit_code = handler(args)
        except Exception as e:
            logger.error("Command failed", command=args.command, error=str(e))
            raise

        process_time = (time.time() - start_time) * 1000
        logger.info(
            "Command completed",
            command=args.command,
            exit_code=int(exit_code),
            process_time=f"{process_time:.2f}ms",
        )
        return exit_code

    return wrapper
