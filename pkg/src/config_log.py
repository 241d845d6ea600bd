import logging
import sys

import structlog

RENDERERS = {
    "console": lambda: structlog.dev.ConsoleRenderer(colors=False),
    "json": lambda: structlog.processors.JSONRenderer(sort_keys=True),
}


def configure_logging(level: str = "INFO", fmt: str = "console"):
    """Route structlog events through the stdlib root logger to standard error.

    Standard output is reserved for the JSON documents the subcommands
    produce, so every log line, whatever its renderer, goes to stderr.
    Calling it again replaces the previous configuration; tests and
    ``selftest`` rely on that to change the level between runs.

    Args:
        level (str): Minimal level name; unknown names fall back to INFO.
        fmt (str): ``console`` for key=value lines, ``json`` for one JSON
            object per line.
    """
    renderer = RENDERERS.get(str(fmt).lower(), RENDERERS["console"])()
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            structlog.processors.dict_tracebacks
            if isinstance(renderer, structlog.processors.JSONRenderer)
            else structlog.processors.format_exc_info,
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )

    logging.basicConfig(
        format="%(message)s",
        level=getattr(logging, str(level).upper(), logging.INFO),
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )
