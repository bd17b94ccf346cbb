from unittest.mock import patch

import pytest
from sympy import Rational

from krall_laguerre.apis.commands import (
    darboux_suite,
    nongeneric_suite,
    sobolev_certificates,
    sobolev_suite,
)


def test_darboux_suite_covers_n_fifteen() -> None:
    with patch(
        "krall_laguerre.apis.commands.system_certificates", return_value=([], None)
    ) as mock_certificates:
        certificates = darboux_suite(3)
    assert len(certificates) > 12
    assert {call.args[1] for call in mock_certificates.call_args_list} == {15}


def test_darboux_suite_keeps_a_longer_range() -> None:
    with patch(
        "krall_laguerre.apis.commands.system_certificates", return_value=([], None)
    ) as mock_certificates:
        darboux_suite(20)
    assert {call.args[1] for call in mock_certificates.call_args_list} == {20}


def test_sobolev_certificates_without_search() -> None:
    report, certificates = sobolev_certificates(
        3, (Rational(1), Rational(1), Rational(2)), 4, search=False
    )
    assert report["algebra_order"] == 14
    assert report["min_order"] is None
    assert report["probe"] is None
    assert all(certificates)


@pytest.mark.slow
def test_sobolev_suite() -> None:
    certificates = sobolev_suite(4)
    assert [certificate.claim for certificate in certificates][-2:] == [
        "sobolev_algebra_order",
        "sobolev_singular_min_order",
    ]
    assert all(certificates)


@pytest.mark.slow
def test_nongeneric_suite() -> None:
    certificates = nongeneric_suite()
    assert [certificate.claim for certificate in certificates] == [
        "nongeneric_point",
        "nongeneric_operator",
        "nongeneric_eigenvalue",
        "generic_probe",
    ]
    assert all(certificates)
