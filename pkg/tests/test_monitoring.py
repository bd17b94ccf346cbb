import logging

from prometheus_client import REGISTRY
from pytest import raises

from krall_laguerre.core.exceptions import InadmissibleParametersException
from krall_laguerre.core.logs import ExtraFormatter, setup_logging
from krall_laguerre.models.enums import Command
from krall_laguerre.monitoring.helpers import monitor_command


def _runs(exit_code: int) -> float:
    return (
        REGISTRY.get_sample_value(
            "krall_laguerre_cli_command_runs_total",
            {"command": "system", "exit_code": str(exit_code)},
        )
        or 0
    )


def test_monitor_command_counts_exit_codes() -> None:
    @monitor_command(Command.SYSTEM)
    def _handler(exit_code: int):
        return dict(exit_code=exit_code), exit_code

    before = _runs(1)
    assert _handler(1) == (dict(exit_code=1), 1)
    assert _runs(1) == before + 1
    assert _handler.__name__ == "_handler"


def test_monitor_command_counts_errors() -> None:
    @monitor_command(Command.SYSTEM)
    def _handler():
        raise InadmissibleParametersException(4)

    before = _runs(3)
    with raises(InadmissibleParametersException) as err:
        _handler()
    assert err.value.witness == 4
    assert _runs(3) == before + 1


def test_extra_formatter() -> None:
    record = logging.makeLogRecord(dict(msg="Command completed.", command="system", exit_code=0))
    assert ExtraFormatter("%(message)s").format(record) == (
        "Command completed. command=system exit_code=0"
    )
    plain = logging.makeLogRecord(dict(msg="Done."))
    assert ExtraFormatter("%(message)s").format(plain) == "Done."


def test_setup_logging() -> None:
    setup_logging("debug")
    logger = logging.getLogger("krall_laguerre")
    assert logger.level == logging.DEBUG
    assert len(logger.handlers) == 1
    assert isinstance(logger.handlers[0].formatter, ExtraFormatter)
    assert not logger.propagate
    setup_logging("INFO")
