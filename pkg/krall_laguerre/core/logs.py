import logging
import sys

# Attributes every LogRecord has; anything else came in through `extra`.
_RESERVED = frozenset(vars(logging.makeLogRecord({}))) | {"message", "asctime"}


class ExtraFormatter(logging.Formatter):
    """
    A formatter appending the `extra` fields of a record as key=value pairs.
    """

    def format(self, record: logging.LogRecord) -> str:
        line = super().format(record)
        extras = {
            key: value for key, value in vars(record).items() if key not in _RESERVED
        }
        if not extras:
            return line
        return line + " " + " ".join(f"{key}={value}" for key, value in sorted(extras.items()))


def setup_logging(level: str) -> None:
    """
    Attach a single stderr handler to the package logger.

    :param level: the name of the logging level (e.g., INFO).
    """
    logger = logging.getLogger("krall_laguerre")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(ExtraFormatter("%(asctime)s %(levelname)s %(name)s %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(level.upper())
    logger.propagate = False
