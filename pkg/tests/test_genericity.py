from unittest.mock import patch

import pytest
from pytest import raises
from sympy import Rational

from krall_laguerre.core.exceptions import InvalidParameterException, SymbolicUnsupportedException
from krall_laguerre.helpers.darboux import system_spec
from krall_laguerre.helpers.eigen import algebra_membership, bhat_linear_solve
from krall_laguerre.helpers.exact import N, npoly
from krall_laguerre.helpers.genericity import (
    abar_probe,
    beta_symbols,
    closed_form_ratio,
    consistency_vs_closed_form,
    derivative_divisibility_check,
    desnanot_jacobi_check,
    genericity_report,
    k1_resultant_closed_form,
    k2_genericity_equation,
    k2_genericity_u_form,
    k2_nongeneric_eigenvalue,
    k2_nongeneric_points,
    lemma_property_suite,
    probe_divisor,
    resultant_R,
    resultant_shift_check,
    resultant_square_check,
)
from krall_laguerre.models.eigen import EigenOperator
from krall_laguerre.models.system import SystemSpec
from tests.fixtures.core import config_set


def test_one_step_resultant(one_step_system: SystemSpec) -> None:
    assert resultant_R(one_step_system) == -1
    assert k1_resultant_closed_form(1, 1) == -1


def test_symbolic_one_step_resultant() -> None:
    (beta0,) = beta_symbols(1)
    value = resultant_R(system_spec(2, 1, (beta0,)))
    assert value.as_expr() == beta0 ** 3
    assert k1_resultant_closed_form(2, beta0) == beta0 ** 3


def test_symbolic_resultant_is_capped() -> None:
    with raises(SymbolicUnsupportedException):
        resultant_R(system_spec(3, 3, beta_symbols(3)))


def test_genericity_report(one_step_system: SystemSpec) -> None:
    with patch("krall_laguerre.helpers.genericity._LOGGER") as mock_logger:
        report = genericity_report(one_step_system)
        mock_logger.info.assert_called_once_with(
            "Genericity computed.", extra=dict(alpha=1, k=1, generic=True)
        )
    assert report.generic
    assert report.closed_form_match


def test_two_step_genericity(two_step_system: SystemSpec, nongeneric_system: SystemSpec) -> None:
    generic = genericity_report(two_step_system)
    assert generic.generic and generic.closed_form_match
    special = genericity_report(nongeneric_system)
    assert special.resultant_value == 0
    assert not special.generic
    assert special.closed_form_match


def test_k2_genericity_equations() -> None:
    assert k2_genericity_equation(2, (Rational(1, 8), 0)) == 0
    assert k2_genericity_equation(2, (1, 1)) == 37
    assert k2_genericity_u_form(-8, 8) == 0


def test_k2_nongeneric_points() -> None:
    points = k2_nongeneric_points(3, admissible_only=False)
    assert points == [
        (Rational(1, 8), 0),
        (Rational(3, 32), Rational(1, 32)),
        (Rational(3, 32), Rational(-1, 32)),
    ]
    assert all(k2_genericity_equation(2, point) == 0 for point in points)
    assert all(value.is_Rational for point in points for value in point)


def test_closed_form_ratio() -> None:
    assert closed_form_ratio(2, 1, (Rational(1, 2),)) == 1
    assert closed_form_ratio(3, 1, (0,)) is None
    assert closed_form_ratio(2, 2, (Rational(1, 8), 0)) is None
    assert closed_form_ratio(2, 2, (0, 1)) is None
    reference = closed_form_ratio(2, 2, (1, 0))
    assert reference is not None and reference != 0
    assert closed_form_ratio(2, 2, (2, 0)) == reference


def test_two_step_report_compares_ratios() -> None:
    ratios = [Rational(2), Rational(3)]
    with patch("krall_laguerre.helpers.genericity.closed_form_ratio", side_effect=ratios):
        report = genericity_report(system_spec(2, 2, (2, 0)))
    assert report.generic
    assert report.closed_form_match is False


def test_nongeneric_eigenvalue_is_outside_the_algebra(nongeneric_system: SystemSpec) -> None:
    h = k2_nongeneric_eigenvalue(*nongeneric_system.beta)
    assert h == npoly(N ** 4 + 2 * N ** 3 + Rational(5, 2) * N ** 2 + Rational(3, 2) * N)
    assert not algebra_membership(h, nongeneric_system)


@pytest.mark.slow
def test_nongeneric_eigenvalue_has_an_operator(nongeneric_system: SystemSpec) -> None:
    operator = bhat_linear_solve(k2_nongeneric_eigenvalue(Rational(1, 8), 0), nongeneric_system, 8)
    assert isinstance(operator, EigenOperator)
    assert operator.order == 8
    assert operator.member is None


def test_consistency_one_step() -> None:
    certificate = consistency_vs_closed_form([1, 2, 3], 1)
    assert certificate.passed
    assert certificate.details["constant"] == "1"


def test_consistency_two_steps() -> None:
    assert consistency_vs_closed_form([2], 2, samples=4, seed=5)


def test_consistency_needs_a_formula() -> None:
    with raises(InvalidParameterException):
        consistency_vs_closed_form([3], 3)


def test_resultant_identities(one_step_system: SystemSpec, two_step_system: SystemSpec) -> None:
    for spec in (one_step_system, two_step_system):
        assert resultant_square_check(spec)
        assert derivative_divisibility_check(spec, 1, 6)
        assert derivative_divisibility_check(spec, 2, 6)


@pytest.mark.parametrize("m", (1, 2, 3))
def test_determinant_lemmas(m: int) -> None:
    assert desnanot_jacobi_check(m, trials=5, seed=2)
    assert resultant_shift_check(m, trials=5, seed=2)


def test_lemma_property_suite() -> None:
    certificate = lemma_property_suite(trials=2, seed=3)
    assert certificate.passed
    assert certificate.details["parts"] == ["desnanot_jacobi", "resultant_shift"] * 3


def test_probe_divisor(one_step_system: SystemSpec) -> None:
    assert probe_divisor(one_step_system) == npoly(N + 1)


def test_probe_finds_only_the_algebra(one_step_system: SystemSpec) -> None:
    report = abar_probe(one_step_system, 2)
    assert [entry.member_dim for entry in report.degrees] == [0, 1]
    entry = report.degrees[1]
    assert entry.example.degree() == 2
    assert algebra_membership(entry.example, one_step_system)
    assert entry.operator_order == 4
    assert report.minimal_degree == 2
    assert not report.algebra_extended


def test_probe_respects_the_candidate_cap(one_step_system: SystemSpec) -> None:
    with config_set("PROBE_MAX_CANDIDATE_DIM", 0):
        report = abar_probe(one_step_system)
    assert report.max_deg == 2
    assert [entry.probed for entry in report.degrees] == [True, False]
    assert report.minimal_degree is None


@pytest.mark.slow
def test_probe_extends_the_algebra_at_a_nongeneric_point(nongeneric_system: SystemSpec) -> None:
    report = abar_probe(nongeneric_system, 4)
    assert report.minimal_degree == 4
    assert report.algebra_extended
    assert report.degrees[3].operator_order == 8


@pytest.mark.slow
def test_probe_finds_nothing_at_a_generic_point() -> None:
    report = abar_probe(system_spec(2, 2, (1, 1)), 4)
    assert report.minimal_degree is None
    assert not report.algebra_extended
