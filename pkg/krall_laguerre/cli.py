import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from marshmallow import ValidationError
from prometheus_client import REGISTRY, write_to_textfile

from krall_laguerre.apis.commands import HANDLERS
from krall_laguerre.core import config
from krall_laguerre.core.exceptions import KrallLaguerreException
from krall_laguerre.core.logs import setup_logging
from krall_laguerre.models.enums import Command, OutputFormat
from krall_laguerre.models.run_config import RunConfig
from krall_laguerre.models.schemas import RunConfigSchema
from krall_laguerre.monitoring.commands import COMMAND_RUNS

_LOGGER = logging.getLogger(__name__)

_USAGE_ERROR = 2


def _split(value: str) -> List[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def _add_darboux_arguments(parser: argparse.ArgumentParser, weights: bool = True) -> None:
    parser.add_argument("--alpha", required=True, help="The Laguerre parameter.")
    parser.add_argument("--k", type=int, default=0, help="The number of Darboux steps.")
    parser.add_argument(
        "--beta", type=_split, help='Comma separated rationals, e.g. "1/8,0" (use --beta=-1/2).'
    )
    if weights:
        parser.add_argument(
            "--u", type=_split, help="The weights u_0..u_{k-1} instead of beta (k = 1, 2)."
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="krall-laguerre",
        description="Exact certificates for Krall-Laguerre polynomials and their operators.",
    )
    parser.add_argument(
        "--format",
        dest="output_format",
        choices=[output_format.value for output_format in OutputFormat],
        default=OutputFormat.JSON.value,
    )
    parser.add_argument("--seed", type=int, help="Seed of the randomized identity suites.")
    parser.add_argument(
        "--verify-n", dest="verify_n", type=int, help="Upper index of the certificates."
    )
    parser.add_argument("--output", help="Write the report to this file.")
    parser.add_argument("--metrics-file", dest="metrics_file", help="Write run metrics here.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    classical = subparsers.add_parser(Command.CLASSICAL.value, help="Laguerre identities.")
    classical.add_argument("--alpha", required=True)
    classical.add_argument("--n", dest="command_n", type=int, help="Same as --verify-n.")

    system = subparsers.add_parser(Command.SYSTEM.value, help="Darboux transformed system.")
    _add_darboux_arguments(system)
    system.add_argument("--n", dest="command_n", type=int, help="Same as --verify-n.")

    operator = subparsers.add_parser(Command.OPERATOR.value, help="Eigen-operator of h(n).")
    _add_darboux_arguments(operator)
    source = operator.add_mutually_exclusive_group(required=True)
    source.add_argument("--generator", type=int, help="Index of an algebra generator.")
    source.add_argument(
        "--eigenvalue", type=_split, help='Coefficients of h(n), ascending, e.g. "0,1".'
    )
    operator.add_argument("--order-cap", dest="order_cap", type=int)

    genericity = subparsers.add_parser(Command.GENERICITY.value, help="Resultant and probe.")
    _add_darboux_arguments(genericity)
    genericity.add_argument("--symbolic", action="store_true", help="Symbolic beta.")
    genericity.add_argument("--probe", action="store_true", help="Search the eigenvalues.")
    genericity.add_argument("--max-deg", dest="max_deg", type=int)

    sobolev = subparsers.add_parser(Command.SOBOLEV.value, help="Sobolev orthogonality.")
    sobolev.add_argument("--alpha", required=True)
    sobolev.add_argument(
        "--matrix", type=_split, required=True, help='The entries u0,u1,v0, e.g. "1,1,2".'
    )
    sobolev.add_argument(
        "--max-deg", dest="max_deg", type=int, help="Largest degree of the operator search."
    )

    subparsers.add_parser(Command.SELFTEST.value, help="Run the acceptance suite.")
    return parser


def parse_run_config(argv: Optional[List[str]] = None) -> RunConfig:
    """
    Parse the command line and validate it.

    :raises: ValidationError if the values are invalid.
    """
    arguments = vars(build_parser().parse_args(argv))
    if (command_n := arguments.pop("command_n", None)) is not None:
        arguments["verify_n"] = command_n
    return RunConfigSchema().load(
        {key: value for key, value in arguments.items() if value is not None}
    )


def render_text(payload: Any, indent: int = 0) -> str:
    """
    Render a report as indented key: value lines.
    """
    pad = "  " * indent
    if isinstance(payload, dict):
        lines = []
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {value}")
        return "\n".join(lines)
    if isinstance(payload, list):
        return "\n".join(
            f"{pad}-\n{render_text(item, indent + 1)}"
            if isinstance(item, (dict, list))
            else f"{pad}- {item}"
            for item in payload
        )
    return f"{pad}{payload}"


def emit(payload: Dict[str, Any], output_format: OutputFormat, output: Optional[str]) -> None:
    if output_format == OutputFormat.JSON:
        text = json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False)
    else:
        text = render_text(payload)
    if output:
        with open(output, "w", encoding="utf-8") as report_file:
            report_file.write(text + "\n")
        _LOGGER.info("Report written.", extra=dict(path=output))
    else:
        print(text)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of the command line. Exit codes: 0 all certificates pass, 1 some certificate
    failed, 2 usage error, 3 inadmissible parameters, 4 no operator, 5 unsupported matrix.
    """
    setup_logging(config.LOG_LEVEL)
    try:
        run = parse_run_config(argv)
    except ValidationError as error:
        _LOGGER.error("Invalid arguments.", extra=dict(errors=error.messages))
        print(json.dumps(dict(error="invalid arguments", details=error.messages)), file=sys.stderr)
        COMMAND_RUNS.labels("invalid", _USAGE_ERROR).inc()
        return _USAGE_ERROR

    _LOGGER.info("Command started.", extra=dict(command=run.command.value))
    try:
        payload, exit_code = HANDLERS[run.command](run)
    except KrallLaguerreException as error:
        exit_code = error.exit_code
        payload = dict(error=str(error), exit_code=exit_code)
        if (witness := getattr(error, "witness", None)) is not None:
            payload["witness"] = witness
        if (remainder := getattr(error, "remainder", None)) is not None:
            payload["remainder"] = remainder
        _LOGGER.warning("Command failed.", extra=dict(command=run.command.value, error=str(error)))

    emit(payload, run.output_format, run.output)
    _LOGGER.info("Command completed.", extra=dict(command=run.command.value, exit_code=exit_code))
    if run.metrics_file:
        write_to_textfile(run.metrics_file, REGISTRY)
    return exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
