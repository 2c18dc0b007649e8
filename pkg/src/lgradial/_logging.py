from __future__ import annotations

import logging
import os
import sys
import warnings
from abc import ABC
from typing import Callable, TextIO

import numpy as np
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel

from .exceptions import RadialWarning
from .typing import LogLevel

__all__ = (
    "Service",
    "Internal",
    "format_warnings",
    "enable_debug",
    "set_level",
)

_default_showwarning = warnings.showwarning


def _showwarning(
    message: Warning | str,
    category: type[Warning],
    filename: str,
    lineno: int,
    file: TextIO | None = None,
    line: str | None = None,
) -> None:
    # foreign warnings (numpy, scipy) keep their usual one-line form
    if not issubclass(category, RadialWarning):
        _default_showwarning(message, category, filename, lineno, file, line)
        return

    file = file or sys.stderr
    if file is None:
        return

    if file.isatty():
        Console(file=file, stderr=True).print(
            Panel(
                str(message),
                title=f"[bold yellow]{category.__name__}",
                subtitle=f"[dim]{os.path.basename(filename)}:{lineno}",
                highlight=True,
                expand=False,
            )
        )
    else:
        file.write(f"{category.__name__}: {message}\n")


def format_warnings():
    """Render lgradial warnings as rich panels on a terminal."""
    warnings.showwarning = _showwarning


LCOLORS = {
    logging.DEBUG: "blue",
    logging.INFO: "green",
    logging.WARNING: "dim yellow",
    logging.ERROR: "red",
    logging.CRITICAL: "dim red",
}


class RadialFormatter(logging.Formatter):
    def formatMessage(self, record: logging.LogRecord):
        return (
            f"[bold white][[/][bold {LCOLORS[record.levelno]}]{record.levelname.lower()}[/][bold white]][/]:"
            f" {record.getMessage()}"
        )


def _handler() -> RichHandler:
    handler = RichHandler(
        show_level=False,
        show_path=False,
        show_time=False,
        rich_tracebacks=True,
        markup=True,
        console=Console(stderr=True),
    )
    handler.setFormatter(RadialFormatter())
    return handler


svc = logging.getLogger("lgradial.service")
internal = logging.getLogger("lgradial.internal")
for lg in (svc, internal):
    lg.setLevel(os.environ.get("LGRADIAL_LOG_LEVEL", "WARNING").upper())
    lg.addHandler(_handler())
    lg.propagate = False

internal.setLevel(10000)


def _fmt(item: object) -> str:
    if isinstance(item, (float, np.floating)):
        return f"{float(item):.6g}"
    if isinstance(item, np.ndarray):
        return f"array{item.shape}"
    return str(item)


class _Logger(ABC):
    """Wrapper around the built in logger. Floats print with six digits."""

    log: logging.Logger

    @classmethod
    def _log(cls, attr: Callable[..., None], *msg: object, highlight: bool = True):
        attr(
            " ".join(_fmt(i) for i in msg),
            extra={"markup": True, **({} if highlight else {"highlighter": None})},
        )

    @classmethod
    def debug(cls, *msg: object, **kwargs):
        cls._log(cls.log.debug, *msg, **kwargs)

    @classmethod
    def info(cls, *msg: object, **kwargs):
        cls._log(cls.log.info, *msg, **kwargs)

    @classmethod
    def warning(cls, *msg: object, **kwargs):
        cls._log(cls.log.warning, *msg, **kwargs)


class Service(_Logger):
    """Logger for user-facing progress: auto-grow decisions, verification."""

    log = svc


class Internal(_Logger):
    """Logger for tracing the numerics. Disabled unless debug mode is on."""

    log = internal


def set_level(level: LogLevel | int) -> None:
    """Set the level of the service logger."""
    svc.setLevel(level.upper() if isinstance(level, str) else level)


def _mirror(logger: logging.Logger, path: str) -> None:
    handler = logging.FileHandler(path, mode="w", encoding="utf-8")
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(message)s"))
    logger.addHandler(handler)


def enable_debug():
    """Trace the numerics and mirror both loggers to `lgradial_*.log`."""
    internal.disabled = False
    internal.setLevel(logging.DEBUG)
    _mirror(internal, "lgradial_internal.log")
    _mirror(svc, "lgradial_service.log")

    Internal.info("debug mode enabled")
    os.environ["LGRADIAL_DEBUG"] = "1"
