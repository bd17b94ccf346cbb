import logging
from typing import Dict, List, Optional, Tuple

from sympy import Poly, Rational, S

from krall_laguerre.core.exceptions import (
    InvalidParameterException,
    UnsupportedSingularMatrixException,
)
from krall_laguerre.helpers.certificates import certify, combine
from krall_laguerre.helpers.darboux import hat_laguerre, q_entry
from krall_laguerre.helpers.exact import N, X, coefficient, npoly, xpoly
from krall_laguerre.helpers.genericity import abar_probe
from krall_laguerre.helpers.laguerre import (
    binomial_npoly,
    gamma_integral,
    gamma_moment,
    laguerre_jacobi_row,
    laguerre_poly,
)
from krall_laguerre.models.certificate import Certificate
from krall_laguerre.models.genericity import ProbeReport
from krall_laguerre.models.sobolev import SobolevInnerProduct, SobolevSpec

_LOGGER = logging.getLogger(__name__)

# Banded rows keyed by column index.
BandRow = Dict[int, Rational]


def _check_alpha(alpha: int) -> int:
    if int(alpha) != alpha or alpha < 2:
        raise InvalidParameterException(
            f"The Sobolev construction needs an integer alpha >= 2 (alpha: {alpha})."
        )
    return int(alpha)


def sobolev_psis(
    alpha: int, beta0: Rational, beta1: Rational, l0: Rational, l1: Rational
) -> Tuple[Poly, Poly]:
    """
    psi^(0) = beta0 + l0 (n+1)/(alpha-1) + binom(n+alpha, alpha),
    psi^(1) = beta1 + l1 (n+1)/(alpha-1) - binom(n+alpha+1, alpha+1).
    """
    alpha = _check_alpha(alpha)
    linear = npoly(N + 1)
    first = (
        npoly(S(beta0))
        + linear.mul_ground(Rational(l0) / (alpha - 1))
        + binomial_npoly(alpha, alpha)
    )
    second = (
        npoly(S(beta1))
        + linear.mul_ground(Rational(l1) / (alpha - 1))
        - binomial_npoly(alpha + 1, alpha + 1)
    )
    return first, second


def singular_sobolev_psis(alpha: int, v0: Rational) -> Tuple[Poly, Poly]:
    """
    The basis for A = diag(0, v0): psi^(0) = n + 1 and
    psi^(1) = binom(n+alpha+1, alpha+1) - binom(n+alpha, alpha) - (alpha-1)/v0.
    """
    alpha = _check_alpha(alpha)
    if (v0 := Rational(v0)) == 0:
        raise UnsupportedSingularMatrixException()
    second = (
        binomial_npoly(alpha + 1, alpha + 1)
        - binomial_npoly(alpha, alpha)
        - npoly(Rational(alpha - 1) / v0)
    )
    return npoly(N + 1), second


def sobolev_spec(
    alpha: int, beta0: Rational, beta1: Rational, l0: Rational, l1: Rational
) -> SobolevSpec:
    beta0, beta1, l0, l1 = (Rational(value) for value in (beta0, beta1, l0, l1))
    return SobolevSpec(
        alpha=int(alpha),
        psis=sobolev_psis(alpha, beta0, beta1, l0, l1),
        beta0=beta0,
        beta1=beta1,
        l0=l0,
        l1=l1,
    )


def singular_sobolev_spec(alpha: int, v0: Rational) -> SobolevSpec:
    return SobolevSpec(
        alpha=int(alpha), psis=singular_sobolev_psis(alpha, v0), v0=Rational(v0)
    )


def sobolev_hatL(spec: SobolevSpec, n: int) -> Poly:
    return hat_laguerre(spec, n)


def sobolev_inner(f: Poly, g: Poly, ip: SobolevInnerProduct) -> Rational:
    """
    <F, G> = 1/(alpha-2)! int F G x^(alpha-2) e^(-x) dx + [F(0), F'(0)] A [G(0), G'(0)]^T.
    """
    alpha_eff = _check_alpha(ip.alpha) - 2
    f_values = (coefficient(f, 0), coefficient(f, 1))
    g_values = (coefficient(g, 0), coefficient(g, 1))
    boundary = sum(
        (f_values[i] * ip.matrix[i][j] * g_values[j] for i in range(2) for j in range(2)),
        S.Zero,
    )
    return gamma_integral(f * g, alpha_eff) / gamma_moment(alpha_eff, 0) + boundary


def params_from_A(alpha: int, u0: Rational, u1: Rational, v0: Rational) -> SobolevSpec:
    """
    Choose the kernel parameters making the L^_n orthogonal for the inner product with
    A = [[u0, u1], [u1, v0]].

    :return: for det(A) != 0 the SobolevSpec with
      beta0 = -(alpha-1) u1/det, beta1 = (alpha-1)(u0+u1)/det,
      l0 = (alpha-1) v0/det, l1 = -(alpha-1)(u1+v0)/det;
      for A = diag(0, v0) with v0 != 0 the singular basis.
    :raises: UnsupportedSingularMatrixException for any other singular matrix.
    """
    alpha = _check_alpha(alpha)
    ip = SobolevInnerProduct(alpha=alpha, u0=Rational(u0), u1=Rational(u1), v0=Rational(v0))
    if (det := ip.det) != 0:
        scale = Rational(alpha - 1) / det
        spec = sobolev_spec(
            alpha,
            beta0=-scale * ip.u1,
            beta1=scale * (ip.u0 + ip.u1),
            l0=scale * ip.v0,
            l1=-scale * (ip.u1 + ip.v0),
        )
    elif ip.u0 == 0 and ip.u1 == 0 and ip.v0 != 0:
        spec = singular_sobolev_spec(alpha, ip.v0)
    else:
        raise UnsupportedSingularMatrixException()
    _LOGGER.info(
        "Sobolev parameters chosen.",
        extra=dict(alpha=alpha, det=str(det), singular=spec.singular),
    )
    return spec


def sobolev_seed_conditions(spec: SobolevSpec, ip: SobolevInnerProduct) -> Certificate:
    """
    Verify <L^_n, 1> = 0 for n = 1, 2 and <L^_n, x> = 0 for n = 2, 3.
    Together with the classical orthogonality these imply the full orthogonality.
    """
    seeds = ((1, 0), (2, 0), (2, 1), (3, 1))

    def _check(seed: Tuple[int, int]):
        n, power = seed
        if (value := sobolev_inner(sobolev_hatL(spec, n), xpoly(X ** power), ip)) != 0:
            return f"<L^_{n}, x^{power}> = {value}"
        return None

    return certify("sobolev_seed_conditions", (1, 3), seeds, _check, alpha=spec.alpha)


def sobolev_orthogonality_check(
    spec: SobolevSpec, ip: SobolevInnerProduct, n_max: int
) -> Certificate:
    """
    Verify <L^_n, L^_m> = 0 for 0 <= m < n <= n_max and <L^_n, L^_n> != 0, along with the seed
    conditions.
    """
    hat = [sobolev_hatL(spec, n) for n in range(n_max + 1)]

    def _check(n: int):
        for m in range(n):
            if (value := sobolev_inner(hat[n], hat[m], ip)) != 0:
                return f"<L^_{n}, L^_{m}> = {value}"
        if sobolev_inner(hat[n], hat[n], ip) == 0:
            return f"<L^_{n}, L^_{n}> = 0"
        return None

    pairs = certify(
        "sobolev_pairs", (0, n_max), range(n_max + 1), _check, alpha=spec.alpha
    )
    return combine(
        "sobolev_orthogonality",
        [sobolev_seed_conditions(spec, ip), pairs],
        alpha=spec.alpha,
        matrix=[[str(entry) for entry in row] for row in ip.matrix],
    )


def moment_functional_witness(ip: SobolevInnerProduct) -> Tuple[Rational, Rational]:
    """
    :return: (<x, x>, <x^2, 1>), which differ exactly when v0 != 0.
    """
    x = xpoly(X)
    return sobolev_inner(x, x, ip), sobolev_inner(x * x, xpoly(1), ip)


def _jacobi(alpha: int, n: int, m: int) -> Rational:
    if n < 0 or m < 0:
        return S.Zero
    row = laguerre_jacobi_row(alpha, n)
    return {n - 1: row.c, n: row.b, n + 1: row.a}.get(m, S.Zero)


def square_jacobi_entry(alpha: int, n: int, m: int) -> Rational:
    """
    The (n, m) entry of [J^(alpha)]^2.
    """
    return sum((_jacobi(alpha, n, j) * _jacobi(alpha, j, m) for j in range(n - 1, n + 2)), S.Zero)


def solve_p_rows(spec: SobolevSpec, n_max: int) -> Tuple[List[BandRow], Optional[int]]:
    """
    Solve [J^(alpha)]^2 = P Q for the upper triangular band rows of P, row by row, from the
    columns n+2, n+1, n.

    :return: the rows 0..n_max solved so far and the first row with a vanishing
      diagonal q_{m,m}, if any.
    """
    alpha, rows = spec.alpha, []
    for n in range(n_max + 1):
        row: BandRow = {}
        for column in (n + 2, n + 1, n):
            if (diagonal := q_entry(spec, column, column)) == 0:
                return rows, n
            known = sum(
                (row[m] * q_entry(spec, m, column) for m in row), S.Zero
            )
            row[column] = (square_jacobi_entry(alpha, n, column) - known) / diagonal
        rows.append(row)
    return rows, None


def pentadiagonal_rows(spec: SobolevSpec, p_rows: List[BandRow]) -> List[BandRow]:
    """
    The rows of J^ = Q P, for the indices where the needed rows of P are available.
    """
    rows = []
    for n in range(len(p_rows)):
        row: BandRow = {}
        for m in range(max(n - 2, 0), n + 1):
            for column, value in p_rows[m].items():
                row[column] = row.get(column, S.Zero) + q_entry(spec, n, m) * value
        rows.append({column: value for column, value in row.items() if value != 0})
    return rows


def pentadiagonal_factorization_check(spec: SobolevSpec, n_max: int) -> Certificate:
    """
    Verify, for n = 0..n_max, that the rows of P reproduce the columns n-1 and n-2 of
    [J^(alpha)]^2, that p_{n,n+2} != 0, that P L^_n = x^2 L_n and that J^ = Q P has bandwidth 2
    with J^ L^_n = x^2 L^_n.
    """
    alpha = spec.alpha
    p_rows, failing = solve_p_rows(spec, n_max)
    hat_rows = pentadiagonal_rows(spec, p_rows)
    hat = [sobolev_hatL(spec, n) for n in range(n_max + 3)]
    x_squared = xpoly(X ** 2)

    def _check(n: int):
        if failing is not None and n >= failing:
            return f"singular diagonal of Q in row {n}"
        row = p_rows[n]
        for column in (n - 1, n - 2):
            if column < 0:
                continue
            value = sum((row[m] * q_entry(spec, m, column) for m in row), S.Zero)
            if value != (expected := square_jacobi_entry(alpha, n, column)):
                return f"[J^2]_({n},{column}) = {expected}, P Q gives {value}"
        if row[n + 2] == 0:
            return f"p_({n},{n + 2}) = 0"
        image = sum((hat[m] * xpoly(value) for m, value in row.items()), xpoly(0))
        if not (image - x_squared * laguerre_poly(alpha, n)).is_zero:
            return "P L^_n != x^2 L_n"
        if any(abs(column - n) > 2 for column in hat_rows[n]):
            return f"row {n} of J^ is wider than pentadiagonal"
        image = sum((hat[m] * xpoly(value) for m, value in hat_rows[n].items()), xpoly(0))
        if not (image - x_squared * hat[n]).is_zero:
            return "J^ L^_n != x^2 L^_n"
        return None

    return certify(
        "pentadiagonal_factorization", (0, n_max), range(n_max + 1), _check, alpha=alpha
    )


def sobolev_algebra_order(spec: SobolevSpec) -> int:
    """
    :return: the order 2 (deg tau + 1) of the lowest operator from the explicit algebra.
    """
    return 2 * (spec.tau.degree() + 1)


def sobolev_order_probe(spec: SobolevSpec, max_deg: Optional[int] = None) -> ProbeReport:
    """
    Search the eigenvalues of degree <= max_deg, default deg tau + 1, with their operators.
    """
    return abar_probe(spec, max_deg=max_deg)


def sobolev_min_order(
    spec: SobolevSpec, max_deg: Optional[int] = None, report: Optional[ProbeReport] = None
) -> Optional[int]:
    """
    The smallest order of an operator found by the degree search, None when no degree up to
    max_deg has an eigenvalue. A report already computed for `spec` is reused.
    """
    if report is None:
        report = sobolev_order_probe(spec, max_deg)
    entry = next((entry for entry in report.degrees if entry.member_dim), None)
    if entry is None:
        return None
    return entry.operator_order if entry.operator_order is not None else 2 * entry.degree
