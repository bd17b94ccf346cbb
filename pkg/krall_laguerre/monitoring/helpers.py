from functools import wraps
from typing import Any, Callable

from krall_laguerre.core.exceptions import KrallLaguerreException
from krall_laguerre.models.enums import Command
from krall_laguerre.monitoring.commands import COMMAND_RUNS

# The handler returns its report payload and the exit code.
Handler = Callable[..., Any]


def monitor_command(command: Command) -> Callable[[Handler], Handler]:
    """
    Decorator to monitor the runs of a command, with the exit code they end with.
    :param command: the command the decorated handler serves.
    :return: the decorator.
    """

    def _decorator(f: Handler) -> Handler:
        @wraps(f)
        def _wrapper(*args: Any, **kwargs: Any) -> Any:
            try:
                payload, exit_code = f(*args, **kwargs)
                COMMAND_RUNS.labels(command.value, exit_code).inc()
            except KrallLaguerreException as error:
                COMMAND_RUNS.labels(command.value, error.exit_code).inc()
                raise
            return payload, exit_code

        return _wrapper

    return _decorator
