import logging

from rich.console import Console
from rich.logging import RichHandler

from .config import settings

_HANDLER_NAME = "chtg-rich"


def configure_logging(level: str | None = None) -> None:
    """Route package logs to stderr through rich; stdout stays reserved for reports."""
    root = logging.getLogger("app")
    root.setLevel((level or settings.log_level).upper())

    if any(h.get_name() == _HANDLER_NAME for h in root.handlers):
        return

    handler = RichHandler(
        console=Console(stderr=True),
        show_path=settings.debug,
        rich_tracebacks=settings.debug,
    )
    handler.set_name(_HANDLER_NAME)
    root.addHandler(handler)
    root.propagate = False
