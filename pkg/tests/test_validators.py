from typing import Any, Dict

import pytest
from marshmallow import ValidationError
from pytest import raises
from sympy import Rational

from krall_laguerre.helpers.diffop import d_dx
from krall_laguerre.helpers.exact import N, X, npoly, xpoly
from krall_laguerre.models.certificate import Certificate
from krall_laguerre.models.enums import Command, OutputFormat
from krall_laguerre.models.fields import PolyField, RationalField, exact_value
from krall_laguerre.models.run_config import RunConfig
from krall_laguerre.models.schemas import CertificateSchema, DiffOpSchema, RunConfigSchema
from krall_laguerre.models.validators import (
    DarbouxParametersValidator,
    RationalStringValidator,
    SobolevMatrixValidator,
)


@pytest.mark.parametrize("value, expected", (("1/2", "1/2"), (" -3 ", "-3"), ("+4/6", "+4/6")))
def test_rational_string_validator_pass(value: str, expected: str) -> None:
    assert RationalStringValidator()(value) == expected


@pytest.mark.parametrize("value", ("0.5", "1/0", "1/-2", "abc", ""))
def test_rational_string_validator_fail(value: str) -> None:
    with raises(ValidationError):
        RationalStringValidator()(value)


def test_rational_string_validator_message() -> None:
    with raises(ValidationError) as err:
        RationalStringValidator()("1/0")
    assert err.value.messages[0] == "Zero denominator (value: 1/0)."


@pytest.mark.parametrize(
    "data",
    (
        dict(alpha=Rational(1, 2), k=0, beta=[]),
        dict(alpha=Rational(2), k=2, beta=[1, 0]),
        dict(alpha=Rational(2), k=2, beta=[], u=[1, 2]),
    ),
)
def test_darboux_parameters_pass(data: Dict[str, Any]) -> None:
    assert DarbouxParametersValidator()(data) == data


@pytest.mark.parametrize(
    "data, message",
    (
        (dict(alpha=Rational(-1), k=0), "alpha must be greater than -1 (alpha: -1)."),
        (
            dict(alpha=Rational(1, 2), k=1, beta=[1]),
            "Darboux steps need an integer alpha >= k (alpha: 1/2, k: 1).",
        ),
        (
            dict(alpha=Rational(1), k=2, beta=[1, 1]),
            "Darboux steps need an integer alpha >= k (alpha: 1, k: 2).",
        ),
        (dict(alpha=Rational(3), k=2, beta=[1]), "Expected 2 beta values (actual: 1)."),
        (dict(alpha=Rational(3), k=-1), "The number of steps must be non-negative (k: -1)."),
    ),
)
def test_darboux_parameters_fail(data: Dict[str, Any], message: str) -> None:
    with raises(ValidationError) as err:
        DarbouxParametersValidator()(data)
    assert err.value.messages[0] == message


def test_sobolev_matrix_validator() -> None:
    assert SobolevMatrixValidator()([1, 1, 2]) == [1, 1, 2]
    with raises(ValidationError) as err:
        SobolevMatrixValidator()([1, 1])
    assert err.value.messages[0] == (
        "The matrix takes exactly three entries u0,u1,v0 (actual: 2)."
    )


def test_rational_field() -> None:
    field = RationalField()
    assert field.deserialize("3/6") == Rational(1, 2)
    assert field.deserialize(4) == 4
    assert field.serialize("value", dict(value=Rational(-2, 3))) == "-2/3"
    for value in (0.5, True, None, [1]):
        with raises(ValidationError):
            field.deserialize(value)


def test_poly_field() -> None:
    field = PolyField()
    assert field.serialize("p", dict(p=npoly(N ** 2 - 1))) == dict(
        variable="n", coefficients=["-1", "0", "1"]
    )
    assert field.serialize("p", dict(p=xpoly(0))) == dict(variable="x", coefficients=[])
    assert field.deserialize(dict(variable="x", coefficients=["1/2", "0", "-3"])) == xpoly(
        Rational(1, 2) - 3 * X ** 2
    )
    with raises(ValidationError):
        field.deserialize(dict(variable="t", coefficients=["1"]))
    with raises(ValidationError):
        field.deserialize(dict(variable="n", coefficients=["0.1"]))


def test_exact_value() -> None:
    assert exact_value(dict(a=Rational(1, 2), p=npoly(N + 1), items=(1, Rational(3)))) == dict(
        a="1/2", p="n + 1", items=[1, "3"]
    )
    assert exact_value(d_dx()) == "1*D^1"


def test_certificate_schema() -> None:
    certificate = Certificate(
        claim="eigen_equation",
        range=(0, 3),
        passed=False,
        witness=2,
        details=dict(mismatch="coefficient of x^0 off by 1", eigenvalue=npoly(N)),
    )
    assert CertificateSchema().dump(certificate) == {
        "claim": "eigen_equation",
        "range": [0, 3],
        "pass": False,
        "witness": 2,
        "details": {"mismatch": "coefficient of x^0 off by 1", "eigenvalue": "n"},
    }


def test_diffop_schema() -> None:
    assert DiffOpSchema().dump(d_dx()) == {
        "order": 1,
        "text": "1*D^1",
        "coefficients": {"1": {"variable": "x", "coefficients": ["1"]}},
    }
    assert DiffOpSchema().dump(d_dx() - d_dx())["order"] is None


def test_run_config_schema_system() -> None:
    run = RunConfigSchema().load(dict(command="system", alpha="2", k=2, beta=["1/8", "0"]))
    assert run == RunConfig(
        command=Command.SYSTEM, alpha=Rational(2), k=2, beta=(Rational(1, 8), Rational(0))
    )


def test_run_config_schema_weights_and_format() -> None:
    run = RunConfigSchema().load(
        dict(command="system", alpha="2", k=2, u=["-1/2", "1/2"], output_format="text")
    )
    assert run.u == (Rational(-1, 2), Rational(1, 2))
    assert run.beta == ()
    assert run.output_format == OutputFormat.TEXT


@pytest.mark.parametrize(
    "data, message",
    (
        (
            dict(command="system", alpha="2", k=1, beta=["1"], u=["1"]),
            "Give either beta or u, not both.",
        ),
        (
            dict(command="system", alpha="3", k=3, u=["1", "1", "1"]),
            "Weights can be given only for k = 1, 2 (k: 3).",
        ),
        (
            dict(command="classical", alpha="2", symbolic=True),
            "Symbolic parameters are available for genericity only.",
        ),
        (
            dict(command="genericity", alpha="2", k=1, beta=["1"], symbolic=True),
            "Symbolic runs take no beta.",
        ),
        (
            dict(command="operator", alpha="1", k=1, beta=["1"]),
            "Give exactly one of a generator index and an eigenvalue.",
        ),
        (
            dict(command="operator", alpha="1", k=1, beta=["1"], generator=0, eigenvalue=["1"]),
            "Give exactly one of a generator index and an eigenvalue.",
        ),
        (
            dict(command="sobolev", alpha="3"),
            "The sobolev command needs the matrix entries u0,u1,v0.",
        ),
        (
            dict(command="sobolev", alpha="1", matrix=["1", "1", "2"]),
            "Sobolev runs need an integer alpha >= 2 (alpha: 1).",
        ),
        (dict(command="classical", alpha="-1"), "alpha must be greater than -1 (alpha: -1)."),
    ),
)
def test_run_config_schema_fail(data: Dict[str, Any], message: str) -> None:
    with raises(ValidationError) as err:
        RunConfigSchema().load(data)
    assert err.value.messages["_schema"] == [message]


@pytest.mark.parametrize(
    "data, field",
    (
        (dict(command="classical", alpha=0.5), "alpha"),
        (dict(command="classical", alpha="1", output_format="xml"), "output_format"),
        (dict(command="unknown", alpha="1"), "command"),
        (dict(command="system", alpha="1", k=1, beta=["x"]), "beta"),
        (dict(command="classical", alpha="1", verify_n=-1), "verify_n"),
    ),
)
def test_run_config_schema_field_errors(data: Dict[str, Any], field: str) -> None:
    with raises(ValidationError) as err:
        RunConfigSchema().load(data)
    assert field in err.value.messages
