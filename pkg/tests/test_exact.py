import random

from pytest import raises
from sympy import Rational, Symbol

from krall_laguerre.core.exceptions import InvalidParameterException, UndefinedResultantException
from krall_laguerre.helpers.exact import (
    N,
    Affine,
    Infeasible,
    LinSystem,
    Unique,
    casorati,
    coefficients,
    format_poly,
    linsolve,
    npoly,
    nullspace,
    poly_det,
    poly_eval,
    poly_gcd,
    random_npoly,
    rational_det,
    resultant,
    shifted,
)


def test_coefficients_are_ascending() -> None:
    assert coefficients(npoly(3 * N ** 2 - 1)) == [-1, 0, 3]
    assert coefficients(npoly(0)) == []


def test_shifted_and_eval() -> None:
    assert shifted(npoly(N ** 2), -1) == npoly((N - 1) ** 2)
    assert poly_eval(npoly(N ** 2 + Rational(1, 2)), -3) == Rational(19, 2)


def test_casorati_of_linear_and_constant() -> None:
    assert casorati([npoly(N), npoly(1)]) == npoly(1)
    assert casorati([npoly(N + 5)]) == npoly(N + 5)
    assert casorati([]) == npoly(1)


def test_poly_det_large_matrix_uses_elimination() -> None:
    size = 5
    matrix = [[npoly(N) if i == j else npoly(0) for j in range(size)] for i in range(size)]
    matrix[0][1] = npoly(N ** 2)
    assert poly_det(matrix) == npoly(N ** 5)


def test_poly_det_small_matrix() -> None:
    matrix = [[npoly(N), npoly(1)], [npoly(N - 1), npoly(1)]]
    assert poly_det(matrix) == npoly(1)


def test_poly_det_rejects_non_square() -> None:
    with raises(InvalidParameterException):
        poly_det([[npoly(1), npoly(2)]])
    with raises(InvalidParameterException):
        poly_det([])


def test_resultant_of_linear_polynomials() -> None:
    assert resultant(npoly(N - 1), npoly(N - 2)) == -1
    assert resultant(npoly(2 * N), npoly(3)) == 3


def test_resultant_symbolic_coefficients() -> None:
    beta = Symbol("beta0")
    value = resultant(npoly(N + beta, [beta]), npoly(N - 1))
    assert value.as_expr() == -1 - beta


def test_resultant_of_zero_is_undefined() -> None:
    with raises(UndefinedResultantException):
        resultant(npoly(0), npoly(N))


def test_poly_gcd_is_monic() -> None:
    p = npoly(2 * (N - 1) * (N - 2))
    q = npoly((N - 1) * (N + 3))
    assert poly_gcd(p, q) == npoly(N - 1)
    assert poly_gcd(npoly(0), npoly(3 * N)) == npoly(N)


def test_format_poly() -> None:
    assert format_poly(npoly(Rational(3, 2) * N ** 2 - 1)) == "3/2*n^2 - 1"
    assert format_poly(npoly(-N + 2)) == "-n + 2"
    assert format_poly(npoly(0)) == "0"


def test_random_npoly_has_exact_degree() -> None:
    rng = random.Random(7)
    assert all(random_npoly(rng, degree).degree() == degree for degree in range(4))


def test_linsolve_unique() -> None:
    solution = linsolve(LinSystem(((1, 1), (1, -1)), (3, 1)))
    assert isinstance(solution, Unique)
    assert solution.vector == (2, 1)


def test_linsolve_affine() -> None:
    solution = linsolve(LinSystem(((1, 1),), (2,)))
    assert isinstance(solution, Affine)
    assert solution.dim == 1
    assert solution.particular == (2, 0)


def test_linsolve_infeasible() -> None:
    assert isinstance(linsolve(LinSystem(((1, 1), (1, 1)), (1, 2))), Infeasible)


def test_lin_system_rejects_mismatched_rows() -> None:
    with raises(InvalidParameterException):
        LinSystem(((1, 1),), (1, 2))


def test_nullspace() -> None:
    (vector,) = nullspace([[1, 1]], 2)
    assert vector[0] + vector[1] == 0
    assert vector != [0, 0]
    assert len(nullspace([], 3)) == 3


def test_rational_det() -> None:
    assert rational_det([[1, 2], [3, 4]]) == -2
    assert rational_det([]) == 1
