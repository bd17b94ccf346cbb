import logging
from functools import lru_cache
from typing import Union

from sympy import Integer, Poly, Rational, factorial, ff

from krall_laguerre.core.exceptions import InvalidParameterException
from krall_laguerre.helpers.certificates import certify
from krall_laguerre.helpers.diffop import derivative, diffop_apply, laguerre_operator
from krall_laguerre.helpers.exact import N, X, coefficients, npoly, xpoly
from krall_laguerre.models.certificate import Certificate
from krall_laguerre.models.system import JacobiRow

_LOGGER = logging.getLogger(__name__)

Alpha = Union[int, Rational]


def binomial_npoly(offset: int, r: int) -> Poly:
    """
    The binomial coefficient binom(n + offset, r) expanded as the polynomial
    prod_{i=0}^{r-1} (n + offset - i) / r! in n, valid at every integer n (negative included).

    :param offset: the constant added to n.
    :param r: the lower index, non-negative.
    :return: the polynomial of degree r.
    """
    result = npoly(1)
    for i in range(r):
        result *= npoly(N + offset - i)
    return result.mul_ground(Rational(1, factorial(r)))


@lru_cache(maxsize=512)
def laguerre_poly(alpha: Alpha, n: int) -> Poly:
    """
    The Laguerre polynomial L_n^alpha(x), with coefficient of x^i equal to
    (-1)^i / i! * binom(n + alpha, n - i), and L_n = 0 for n < 0.

    :param alpha: the parameter, an integer or a rational greater than -1.
    :param n: the degree.
    :return: the polynomial in x.
    """
    if n < 0:
        return xpoly(0)
    alpha = Rational(alpha)
    return xpoly(
        sum(
            Integer(-1) ** i / factorial(i) * ff(n + alpha, n - i) / factorial(n - i) * X ** i
            for i in range(n + 1)
        )
    )


def laguerre_jacobi_row(alpha: Alpha, n: int) -> JacobiRow:
    """
    Row n of the Jacobi matrix of the Laguerre polynomials, normalized so that
    c_n L_{n-1} + b_n L_n + a_n L_{n+1} = x L_n.
    """
    return JacobiRow(
        n=n, a=Rational(-(n + 1)), b=Rational(2 * n + alpha + 1), c=-Rational(n + alpha)
    )


def laguerre_recurrence_check(alpha: Alpha, n_max: int) -> Certificate:
    """
    Verify the three-term recurrence for n = 0..n_max, using L_{-1} = 0 on the first row.
    """
    if n_max < 1:
        raise InvalidParameterException("The recurrence check needs n_max >= 1.")

    def _check(n: int):
        row = laguerre_jacobi_row(alpha, n)
        lhs = (
            laguerre_poly(alpha, n - 1).mul_ground(row.c)
            + laguerre_poly(alpha, n).mul_ground(row.b)
            + laguerre_poly(alpha, n + 1).mul_ground(row.a)
        )
        rhs = laguerre_poly(alpha, n) * xpoly(X)
        return None if lhs == rhs else f"difference {(lhs - rhs).as_expr()}"

    return certify(
        "laguerre_recurrence", (0, n_max), range(n_max + 1), _check, alpha=str(alpha)
    )


def laguerre_diffeq_check(alpha: Alpha, n_max: int) -> Certificate:
    """
    Verify B L_n = n L_n for n = 0..n_max, where B = -x d²/dx² - (alpha + 1 - x) d/dx.
    Note that B = -D2 - (alpha + 1) D1 in terms of the generators D1 = d/dx and
    D2 = x d²/dx² - x d/dx.
    """
    operator = laguerre_operator(alpha)

    def _check(n: int):
        lhs = diffop_apply(operator, laguerre_poly(alpha, n))
        rhs = laguerre_poly(alpha, n).mul_ground(n)
        return None if lhs == rhs else f"difference {(lhs - rhs).as_expr()}"

    return certify(
        "laguerre_diffeq",
        (0, n_max),
        range(n_max + 1),
        _check,
        alpha=str(alpha),
        decomposition="B = -D2 - (alpha + 1)*D1",
    )


def laguerre_derivative_relation_check(alpha: Alpha, n_max: int) -> Certificate:
    """
    Verify d/dx [L_n - L_{n-1}] = -L_{n-1} for n = 0..n_max.
    """

    def _check(n: int):
        previous = laguerre_poly(alpha, n - 1)
        lhs = derivative(laguerre_poly(alpha, n) - previous)
        return None if lhs == -previous else f"difference {(lhs + previous).as_expr()}"

    return certify(
        "laguerre_derivative_relation", (0, n_max), range(n_max + 1), _check, alpha=str(alpha)
    )


def laguerre_deriv_at_zero(alpha: int, j: int) -> Poly:
    """
    The j-th x-derivative of L_n^alpha at x = 0 as a polynomial in n:
    (-1)^j binom(n + alpha, alpha + j).
    """
    if j < 0:
        raise InvalidParameterException("The derivative order must be non-negative.")
    return binomial_npoly(alpha, alpha + j).mul_ground((-1) ** j)


def gamma_moment(alpha_eff: int, m: int) -> Integer:
    """
    The moment integral of x^m x^alpha_eff e^{-x} over (0, oo), that is (m + alpha_eff)!.

    :raises: InvalidParameterException for negative or non-integer inputs.
    """
    if int(alpha_eff) != alpha_eff or int(m) != m or alpha_eff < 0 or m < 0:
        raise InvalidParameterException(
            f"Gamma moments need non-negative integers (alpha_eff: {alpha_eff}, m: {m})."
        )
    return factorial(int(m) + int(alpha_eff))


def gamma_integral(f: Poly, alpha_eff: int) -> Rational:
    """
    :return: the integral of f(x) x^alpha_eff e^{-x} over (0, oo), summed from the moments.
    """
    return sum(
        (Rational(c) * gamma_moment(alpha_eff, m) for m, c in enumerate(coefficients(f))),
        Rational(0),
    )


def laguerre_norm_check(alpha: int, n_max: int) -> Certificate:
    """
    Verify that the integral of (L_n^alpha)^2 against x^alpha e^{-x} is (alpha + n)! / n!.
    """

    def _check(n: int):
        value = gamma_integral(laguerre_poly(alpha, n) ** 2, alpha)
        expected = factorial(alpha + n) / factorial(n)
        return None if value == expected else f"norm {value}, expected {expected}"

    return certify("laguerre_norm", (0, n_max), range(n_max + 1), _check, alpha=str(alpha))
