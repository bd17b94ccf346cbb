import json
from pathlib import Path
from unittest.mock import patch

import pytest
from prometheus_client import REGISTRY
from pytest import CaptureFixture, raises

from krall_laguerre.cli import main, parse_run_config, render_text
from krall_laguerre.models.enums import Command
from tests.fixtures.cli import run_cli
from tests.fixtures.core import mock_config


def _runs(command: str, exit_code: int) -> float:
    return (
        REGISTRY.get_sample_value(
            "krall_laguerre_cli_command_runs_total",
            {"command": command, "exit_code": str(exit_code)},
        )
        or 0
    )


def test_parse_run_config_maps_the_index_bound() -> None:
    run = parse_run_config(["classical", "--alpha", "1/2", "--n", "7"])
    assert run.command == Command.CLASSICAL
    assert run.verify_n == 7


def test_classical(capsys: CaptureFixture) -> None:
    before = _runs("classical", 0)
    exit_code, payload = run_cli(capsys, ["classical", "--alpha", "1", "--n", "5"])
    assert exit_code == 0
    assert payload["alpha"] == "1"
    assert [certificate["claim"] for certificate in payload["certificates"]] == [
        "laguerre_recurrence",
        "laguerre_diffeq",
        "laguerre_derivative_relation",
        "laguerre_norm",
    ]
    assert all(certificate["pass"] for certificate in payload["certificates"])
    assert _runs("classical", 0) == before + 1


@mock_config("DEFAULT_VERIFY_N", 3)
def test_default_index_bound(capsys: CaptureFixture) -> None:
    exit_code, payload = run_cli(capsys, ["classical", "--alpha", "1"])
    assert exit_code == 0
    assert payload["certificates"][1]["range"] == [0, 3]


def test_system(capsys: CaptureFixture) -> None:
    exit_code, payload = run_cli(
        capsys, ["system", "--alpha", "1", "--k", "1", "--beta", "1", "--n", "4"]
    )
    assert exit_code == 0
    assert payload["tau"] == {"variable": "n", "coefficients": ["2", "1"]}
    assert payload["tau_minus_one"] == "1"
    assert payload["u"] == ["1"]
    assert payload["jacobi"][1] == {"n": 1, "a": "-4/3", "b": "17/6", "c": "-3/2"}
    assert {certificate["claim"] for certificate in payload["certificates"]} == {
        "darboux_recurrence",
        "darboux_intertwining",
        "tau_minus_one",
        "darboux_orthogonality",
        "weights_linear_solve",
    }


def test_system_from_weights(capsys: CaptureFixture) -> None:
    exit_code, payload = run_cli(
        capsys, ["system", "--alpha", "2", "--k", "2", "--u=-1/2,1/2", "--n", "4"]
    )
    assert exit_code == 0
    assert payload["beta"] == ["2", "0"]


def test_inadmissible_system(capsys: CaptureFixture) -> None:
    exit_code, payload = run_cli(capsys, ["system", "--alpha", "1", "--k", "1", "--beta=-1"])
    assert exit_code == 3
    assert payload["witness"] == 0
    assert payload["exit_code"] == 3


def test_invalid_arguments(capsys: CaptureFixture) -> None:
    before = _runs("invalid", 2)
    with patch("krall_laguerre.cli._LOGGER") as mock_logger:
        assert main(["classical", "--alpha", "0.5"]) == 2
        assert mock_logger.error.call_count == 1
    assert "invalid arguments" in capsys.readouterr().err
    assert _runs("invalid", 2) == before + 1


def test_too_many_steps(capsys: CaptureFixture) -> None:
    assert main(["system", "--alpha", "1", "--k", "2", "--beta", "1,1"]) == 2


def test_missing_required_argument() -> None:
    with raises(SystemExit) as err:
        main(["classical"])
    assert err.value.code == 2


def test_operator_generator(capsys: CaptureFixture) -> None:
    exit_code, payload = run_cli(
        capsys, ["operator", "--alpha", "1", "--k", "1", "--beta", "1", "--generator", "0"]
    )
    assert exit_code == 0
    assert payload["member"]
    assert payload["eigenvalue"] == {"variable": "n", "coefficients": ["1", "3/2", "1/2"]}
    assert payload["operator"]["order"] == 4
    assert payload["operator"]["construction"] == "closed_form_k1"
    assert payload["operator"]["operator"]["order"] == 4


def test_operator_generator_out_of_range(capsys: CaptureFixture) -> None:
    exit_code, payload = run_cli(
        capsys, ["operator", "--alpha", "1", "--k", "1", "--beta", "1", "--generator", "5"]
    )
    assert exit_code == 2
    assert payload["error"] == "There are 2 generators (index: 5)."


def test_operator_outside_the_algebra(capsys: CaptureFixture) -> None:
    before = _runs("operator", 4)
    exit_code, payload = run_cli(
        capsys, ["operator", "--alpha", "2", "--k", "1", "--beta", "1", "--eigenvalue", "0,1"]
    )
    assert exit_code == 4
    assert payload["remainder"] == "1"
    assert _runs("operator", 4) == before + 1


def test_symbolic_genericity(capsys: CaptureFixture) -> None:
    exit_code, payload = run_cli(capsys, ["genericity", "--alpha", "2", "--k", "1", "--symbolic"])
    assert exit_code == 0
    assert payload["beta"] == ["beta0"]
    assert payload["resultant"] == "beta0^3"
    assert payload["generic"]
    assert payload["closed_form_match"]
    assert payload["summary"] == "generic: A = Abar"


def test_concrete_genericity(capsys: CaptureFixture) -> None:
    exit_code, payload = run_cli(
        capsys, ["genericity", "--alpha", "2", "--k", "2", "--beta", "2,0"]
    )
    assert exit_code == 0
    assert payload["generic"]
    assert payload["probe"] is None
    assert [certificate["claim"] for certificate in payload["certificates"]] == [
        "resultant_square",
        "derivative_divisibility",
        "resultant_closed_form",
    ]


@pytest.mark.slow
def test_nongeneric_genericity(capsys: CaptureFixture) -> None:
    exit_code, payload = run_cli(
        capsys, ["genericity", "--alpha", "2", "--k", "2", "--beta", "1/8,0", "--max-deg", "4"]
    )
    assert exit_code == 0
    assert payload["resultant"] == "0"
    assert payload["summary"] == "non-generic: Abar has an element of degree 4 outside A"
    assert payload["probe"]["minimal_degree"] == 4


def test_sobolev(capsys: CaptureFixture) -> None:
    exit_code, payload = run_cli(
        capsys, ["sobolev", "--alpha", "3", "--matrix", "1,1,2", "--n", "4", "--max-deg", "2"]
    )
    assert exit_code == 0
    assert (payload["beta0"], payload["beta1"], payload["l0"], payload["l1"]) == (
        "-2",
        "4",
        "4",
        "-6",
    )
    assert payload["matrix"] == [["1", "1"], ["1", "2"]]
    assert payload["algebra_order"] == 14
    assert payload["probe"]["max_deg"] == 2
    assert not payload["moment_functional"]
    assert not payload["singular"]


def test_sobolev_unsupported_matrix(capsys: CaptureFixture) -> None:
    exit_code, payload = run_cli(capsys, ["sobolev", "--alpha", "2", "--matrix", "1,0,0"])
    assert exit_code == 5
    assert payload["error"] == "no basis rule given"


def test_text_format(capsys: CaptureFixture) -> None:
    assert main(["--format", "text", "classical", "--alpha", "2", "--n", "3"]) == 0
    out = capsys.readouterr().out
    assert "alpha: 2" in out
    assert "certificates:" in out


def test_output_and_metrics_files(capsys: CaptureFixture, tmp_path: Path) -> None:
    report, metrics = tmp_path / "report.json", tmp_path / "metrics.prom"
    argv = ["--output", str(report), "--metrics-file", str(metrics)]
    assert main(argv + ["classical", "--alpha", "0", "--n", "2"]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(report.read_text())["alpha"] == "0"
    assert "krall_laguerre_cli_command_runs_total" in metrics.read_text()


def test_render_text() -> None:
    assert render_text({"b": [1, {"c": 2}], "a": "x", "d": []}) == (
        "a: x\nb:\n  - 1\n  -\n    c: 2\nd: []"
    )


@pytest.mark.slow
def test_selftest(capsys: CaptureFixture) -> None:
    exit_code, payload = run_cli(capsys, ["--verify-n", "6", "selftest"])
    failed = [certificate for certificate in payload["certificates"] if not certificate["pass"]]
    assert failed == []
    assert exit_code == 0
    assert payload["pass"]
