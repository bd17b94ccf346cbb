from unittest.mock import patch

import pytest
from prometheus_client import REGISTRY
from pytest import raises

from krall_laguerre.core.exceptions import InvalidParameterException
from krall_laguerre.helpers.darboux import system_spec
from krall_laguerre.helpers.diffop import laguerre_operator
from krall_laguerre.helpers.eigen import (
    algebra_basis,
    algebra_membership,
    bhat_closed_form_k1,
    bhat_linear_solve,
    commutativity_check,
    discrete_integral,
    eigen_verify,
    indefinite_sum,
    k1_generators,
    product_operator_check,
    operator_orders,
)
from krall_laguerre.helpers.exact import N, npoly
from krall_laguerre.models.eigen import EigenOperator, EigenPoly, NoOperator, NotMember
from krall_laguerre.models.enums import Construction
from krall_laguerre.models.system import SystemSpec
from tests.fixtures.core import config_set


def test_membership(one_step_system: SystemSpec) -> None:
    member = algebra_membership(npoly((N + 1) * (N + 2) / 2), one_step_system)
    assert member == EigenPoly(h=npoly((N + 1) * (N + 2) / 2), g=npoly(1))


def test_non_membership(one_step_system: SystemSpec) -> None:
    result = algebra_membership(npoly(N), one_step_system)
    assert isinstance(result, NotMember)
    assert not result
    assert result.remainder == npoly(1)


def test_discrete_integral_orientation() -> None:
    f = npoly(N)
    assert discrete_integral(f, 0, 3) == 6
    assert discrete_integral(f, 3, 0) == -6
    assert discrete_integral(f, 2, 2) == 0


def test_indefinite_sum() -> None:
    assert indefinite_sum(npoly(N)) == npoly(N * (N + 1) / 2)
    assert indefinite_sum(npoly(1)) == npoly(N)


def test_algebra_basis(one_step_system: SystemSpec) -> None:
    basis = algebra_basis(one_step_system, 3)
    assert [member.h.degree() for member in basis] == [0, 2, 3]
    assert [member.g for member in basis[1:]] == [npoly(1), npoly(N)]
    with raises(InvalidParameterException):
        algebra_basis(one_step_system, 1)


def test_k1_generators(one_step_system: SystemSpec) -> None:
    generators = k1_generators(1, 1)
    assert [member.h for member in generators] == [
        npoly((N + 1) * (N + 2) / 2),
        npoly((N + 2) * (N + 1) / 2 + (N + 2) * (N + 1) * N / 3),
    ]
    assert [member.g for member in generators] == [npoly(1), npoly(N + 1)]
    assert operator_orders(one_step_system, 2) == [4, 6]


def test_product_operator(one_step_system: SystemSpec) -> None:
    assert product_operator_check(one_step_system.tau, npoly(N + 1), npoly(N), 1, 8)


def test_closed_form_operator(one_step_system: SystemSpec) -> None:
    samples = (
        "krall_laguerre_operators_operators_constructed_total",
        {"construction": "closed_form_k1"},
    )
    before = REGISTRY.get_sample_value(*samples) or 0
    member = k1_generators(1, 1)[0]
    with patch("krall_laguerre.helpers.eigen._LOGGER") as mock_logger:
        operator = bhat_closed_form_k1(member, one_step_system)
        mock_logger.info.assert_called_once_with(
            "Eigen-operator built.", extra=dict(construction="closed_form_k1", order=4)
        )
    assert operator.construction == Construction.CLOSED_FORM_K1
    assert operator.order == 4
    assert eigen_verify(operator.op, member.h, one_step_system, 15)
    assert REGISTRY.get_sample_value(*samples) == before + 1


def test_closed_form_needs_one_step(two_step_system: SystemSpec) -> None:
    with raises(InvalidParameterException):
        bhat_closed_form_k1(EigenPoly(h=npoly(1), g=npoly(0)), two_step_system)


def test_linear_solve_matches_closed_form(one_step_system: SystemSpec) -> None:
    operators = []
    for member in k1_generators(1, 1):
        closed = bhat_closed_form_k1(member, one_step_system)
        solved = bhat_linear_solve(member, one_step_system)
        assert isinstance(solved, EigenOperator)
        assert solved.op == closed.op
        assert solved.annihilator_dim == 0
        assert solved.verified_range[1] > solved.build_range[1]
        operators.append(closed)
    assert commutativity_check(operators)


def test_linear_solve_recovers_the_laguerre_operator() -> None:
    spec = system_spec(2, 0)
    operator = bhat_linear_solve(npoly(N), spec)
    assert isinstance(operator, EigenOperator)
    assert operator.op == laguerre_operator(2)


def test_linear_solve_imposes_the_build_range() -> None:
    with config_set("EIGEN_BUILD_SLACK", 5):
        operator = bhat_linear_solve(npoly(N), system_spec(2, 0), n_extra=4)
    assert isinstance(operator, EigenOperator)
    assert operator.solved_up_to == 5
    assert operator.build_range == (0, 11)
    assert operator.verified_range == (0, 15)


@pytest.mark.parametrize(
    "failing, reason", ((7, "inconsistent equations"), (12, "verification failed"))
)
def test_linear_solve_rejects_by_range(failing: int, reason: str) -> None:
    def _mismatch(op, h, system, n):
        return "off" if n == failing else None

    with config_set("EIGEN_BUILD_SLACK", 5), patch(
        "krall_laguerre.helpers.eigen._eigen_mismatch", side_effect=_mismatch
    ):
        result = bhat_linear_solve(npoly(N), system_spec(2, 0), n_extra=4)
    assert isinstance(result, NoOperator)
    assert (result.reason, result.witness) == (reason, failing)


def test_no_second_order_operator_after_a_step() -> None:
    spec = system_spec(2, 1, (1,))
    result = bhat_linear_solve(npoly(N), spec)
    assert isinstance(result, NoOperator)
    assert not result
    assert result.order_cap == 2


def test_order_cap_must_be_even(one_step_system: SystemSpec) -> None:
    with raises(InvalidParameterException):
        bhat_linear_solve(npoly(N ** 2), one_step_system, order_cap=3)


def test_eigen_verify_reports_first_failure(one_step_system: SystemSpec) -> None:
    certificate = eigen_verify(laguerre_operator(1), npoly(N), one_step_system, 5)
    assert not certificate.passed
    assert certificate.witness == 1
    assert "mismatch" in certificate.details


@pytest.mark.slow
def test_two_parameter_generators_commute() -> None:
    spec = system_spec(2, 1, (1,))
    operators = [bhat_closed_form_k1(member, spec) for member in k1_generators(2, 1)]
    assert [operator.order for operator in operators] == [6, 8, 10]
    assert commutativity_check(operators)
    for operator in operators:
        assert eigen_verify(operator.op, operator.eigenvalue, spec, 20)
