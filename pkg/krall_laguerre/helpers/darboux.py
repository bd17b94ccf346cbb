import logging
from math import comb
from typing import List, Optional, Sequence, Tuple

from sympy import Expr, Poly, Rational, S, divisors, factorial, rf

from krall_laguerre.core import config
from krall_laguerre.core.exceptions import (
    InvalidParameterException,
    PhiUndefinedException,
    SymbolicUnsupportedException,
    UndeterminedParametersException,
)
from krall_laguerre.helpers.certificates import certify
from krall_laguerre.helpers.exact import (
    X,
    LinSystem,
    Unique,
    casorati,
    coefficients,
    linsolve,
    npoly,
    poly_eval,
    xpoly,
)
from krall_laguerre.helpers.laguerre import (
    binomial_npoly,
    gamma_integral,
    gamma_moment,
    laguerre_deriv_at_zero,
    laguerre_jacobi_row,
    laguerre_poly,
)
from krall_laguerre.models.certificate import Certificate
from krall_laguerre.models.system import DarbouxSystem, JacobiRow, MomentFunctional, SystemSpec

_LOGGER = logging.getLogger(__name__)


def phi(alpha: int, i: int, j: int) -> Poly:
    """
    The kernel functions of J^(alpha) at the origin:
    phi^{1,j} = (-1)^j / (1 - alpha)_j * binom(n + j, j) and
    phi^{2,j} = (-1)^j / j! * binom(n + alpha + j, alpha + j).

    :raises: PhiUndefinedException if (1 - alpha)_j vanishes, i.e. j >= alpha for i = 1.
    """
    if i == 1:
        if (pochhammer := rf(1 - alpha, j)) == 0:
            raise PhiUndefinedException(alpha, j)
        return binomial_npoly(j, j).mul_ground(Rational((-1) ** j) / pochhammer)
    if i == 2:
        return binomial_npoly(alpha + j, alpha + j).mul_ground(Rational((-1) ** j, factorial(j)))
    raise InvalidParameterException(f"The kernel index must be 1 or 2 (i: {i}).")


def kernel_psi(alpha: int, beta: Sequence[Expr], j: int) -> Poly:
    """
    psi^(j) = sum_{l=0}^{j} beta_{j-l} phi^{1,l} + phi^{2,j}, over QQ[beta] when beta is symbolic.
    """
    params = sorted(set().union(*(S(b).free_symbols for b in beta)), key=str) if beta else []
    expr = phi(alpha, 2, j).as_expr()
    for l in range(j + 1):
        expr += S(beta[j - l]) * phi(alpha, 1, l).as_expr()
    return npoly(expr, params)


def system_spec(alpha: int, k: int, beta: Sequence[Expr] = ()) -> SystemSpec:
    """
    Build the Darboux system of k steps from J^(alpha). k = 0 is the untransformed system.

    :param alpha: the Laguerre parameter, an integer with k <= alpha.
    :param k: the number of steps.
    :param beta: the k parameters, rationals or symbols.
    :return: the system, with its kernel polynomials.
    :raises: InvalidParameterException if the parameters are out of range,
      SymbolicUnsupportedException if symbols are requested for too many steps.
    """
    beta = tuple(S(b) for b in beta)
    if k < 0 or len(beta) != k:
        raise InvalidParameterException(f"Expected {k} beta values, got {len(beta)}.")
    if k and (int(alpha) != alpha or k > alpha):
        raise InvalidParameterException(
            f"Darboux steps need an integer alpha >= k (alpha: {alpha})."
        )
    if any(not b.is_Rational for b in beta) and k > config.SYMBOLIC_MAX_K:
        raise SymbolicUnsupportedException(
            f"Symbolic parameters are supported up to k={config.SYMBOLIC_MAX_K}."
        )
    alpha = int(alpha) if k else alpha
    spec = SystemSpec(
        alpha=alpha, psis=tuple(kernel_psi(alpha, beta, j) for j in range(k)), beta=beta
    )
    _LOGGER.info("Darboux system built.", extra=dict(alpha=str(alpha), k=k))
    return spec


def psi(spec: SystemSpec, j: int) -> Poly:
    if not 0 <= j < spec.k:
        raise InvalidParameterException(f"No kernel polynomial with index {j} (k: {spec.k}).")
    return spec.psis[j]


def tau(system: DarbouxSystem) -> Poly:
    return system.tau


def rho(system: DarbouxSystem) -> Poly:
    return system.rho


def casorati_cofactors(system: DarbouxSystem) -> Tuple[Poly, ...]:
    return system.cofactors


def tau_minus_one_closed_form(alpha: int, k: int, beta0: Expr) -> Expr:
    """
    :return: (-1)^binom(k, 2) beta0^k / prod_{j=1}^{k-1} (alpha - j)^(k - j).
    """
    denominator = 1
    for j in range(1, k):
        denominator *= (alpha - j) ** (k - j)
    return (-1) ** comb(k, 2) * S(beta0) ** k / denominator


def _integer_root_candidates(p: Poly) -> List[int]:
    _, integral = p.clear_denoms(convert=True)
    coeffs = coefficients(integral)
    lowest = next(power for power, c in enumerate(coeffs) if c != 0)
    candidates = {-1, 0} if lowest else {-1}
    for d in divisors(abs(int(coeffs[lowest]))):
        candidates |= {d, -d}
    return sorted(c for c in candidates if c >= -1)


def admissible(system: DarbouxSystem) -> Tuple[bool, Optional[int]]:
    """
    Decide exactly whether tau(n) != 0 for every integer n >= -1.
    Integer roots of the cleared polynomial divide its lowest nonzero coefficient; the values at
    n = -1..deg(tau) + 1 are evaluated as well.

    :param system: a system with concrete parameters.
    :return: the verdict and the smallest offending n, if any.
    """
    if system.params:
        raise SymbolicUnsupportedException("Admissibility needs concrete parameters.")
    tau_poly = system.tau
    if tau_poly.is_zero:
        return False, -1
    candidates = set(_integer_root_candidates(tau_poly))
    candidates |= set(range(-1, tau_poly.degree() + 2))
    roots = [n for n in sorted(candidates) if poly_eval(tau_poly, n) == 0]
    if roots:
        _LOGGER.info("Inadmissible parameters.", extra=dict(alpha=system.alpha, witness=roots[0]))
        return False, roots[0]
    return True, None


def hat_jacobi_row(spec: SystemSpec, n: int) -> JacobiRow:
    """
    Row n of the Darboux transformed Jacobi matrix, from tau and rho:
    a_n = -tau(n-1) (n+1) / tau(n), c_n = -tau(n) (n + alpha - k) / tau(n-1) and
    b_n = 2n + alpha + 1 - rho(n+1) (n+1) / tau(n) + rho(n) n / tau(n-1).
    """
    if not spec.k:
        return laguerre_jacobi_row(spec.alpha, n)
    t_prev, t_here = poly_eval(spec.tau, n - 1), poly_eval(spec.tau, n)
    return JacobiRow(
        n=n,
        a=-t_prev * (n + 1) / t_here,
        b=2 * n + spec.alpha + 1
        - poly_eval(spec.rho, n + 1) * (n + 1) / t_here
        + poly_eval(spec.rho, n) * n / t_prev,
        c=-t_here * (n + spec.alpha - spec.k) / t_prev,
    )


def hat_laguerre(system: DarbouxSystem, n: int) -> Poly:
    """
    L^_n(x) = Wr_n(psi^(0), ..., psi^(k-1), L_n(x)) = sum_j q_j(n) L_{n-j}(x),
    with L_m = 0 for m < 0.
    """
    total = xpoly(0)
    for j, cofactor in enumerate(system.cofactors):
        if n - j < 0:
            break
        total += laguerre_poly(system.alpha, n - j).mul_ground(poly_eval(cofactor, n))
    return total


def hat_deriv_at_zero(system: DarbouxSystem, j: int) -> Poly:
    """
    The polynomial n -> (d/dx)^j L^_n(x) at x = 0, a Casorati determinant with last row
    (-1)^j binom(n + alpha, alpha + j).
    """
    return casorati(list(system.psis) + [laguerre_deriv_at_zero(system.alpha, j)])


def recurrence_check(spec: SystemSpec, n_max: int) -> Certificate:
    """
    Verify c_n L^_{n-1} + b_n L^_n + a_n L^_{n+1} = x L^_n for n = 0..n_max.
    """

    def _check(n: int):
        row = hat_jacobi_row(spec, n)
        lhs = hat_laguerre(spec, n).mul_ground(row.b) + hat_laguerre(spec, n + 1).mul_ground(row.a)
        if n:
            lhs += hat_laguerre(spec, n - 1).mul_ground(row.c)
        difference = lhs - hat_laguerre(spec, n) * xpoly(X)
        if difference.is_zero:
            return None
        power, value = difference.terms()[0]
        return f"coefficient of x^{power[0]} off by {value}"

    return certify(
        "darboux_recurrence", (0, n_max), range(n_max + 1), _check, alpha=spec.alpha, k=spec.k
    )


def q_entry(system: DarbouxSystem, n: int, m: int) -> Rational:
    if m < 0 or not 0 <= n - m <= system.k:
        return S.Zero
    return poly_eval(system.cofactors[n - m], n)


def _jacobi_entry(rows: dict, j: int, m: int) -> Rational:
    row = rows[j]
    return {m - 1: row.a, m: row.b, m + 1: row.c}.get(j, S.Zero)


def intertwining_check(spec: SystemSpec, n_max: int) -> Certificate:
    """
    Verify J^ Q = Q J^(alpha) entrywise on rows 0..n_max, where Q is the lower triangular band
    matrix of the Casorati cofactors.
    """
    k = spec.k
    hat_rows = {n: hat_jacobi_row(spec, n) for n in range(n_max + 1)}
    rows = {j: laguerre_jacobi_row(spec.alpha, j) for j in range(n_max + 2)}

    def _check(n: int):
        hat_row = hat_rows[n]
        for m in range(max(n - k - 1, 0), n + 2):
            lhs = hat_row.b * q_entry(spec, n, m) + hat_row.a * q_entry(spec, n + 1, m)
            if n:
                lhs += hat_row.c * q_entry(spec, n - 1, m)
            rhs = sum(
                (
                    q_entry(spec, n, j) * _jacobi_entry(rows, j, m)
                    for j in range(max(n - k, 0), n + 1)
                ),
                S.Zero,
            )
            if lhs != rhs:
                return f"column {m}: {lhs} != {rhs}"
        return None

    return certify(
        "darboux_intertwining", (0, n_max), range(n_max + 1), _check, alpha=spec.alpha, k=k
    )


def moment_functional_apply(functional: MomentFunctional, f: Poly) -> Rational:
    """
    M(f) = 1/(alpha_eff)! sum_m f_m (m + alpha_eff)! + sum_j u_j f^(j)(0).
    """
    coeffs = coefficients(f)
    boundary = sum(
        (u_j * factorial(j) * coeffs[j] for j, u_j in enumerate(functional.u) if j < len(coeffs)),
        S.Zero,
    )
    integral = gamma_integral(f, functional.alpha_eff) / gamma_moment(functional.alpha_eff, 0)
    return integral + boundary


def _u_closed_form(spec: SystemSpec) -> Tuple[Rational, ...]:
    alpha, beta = spec.alpha, spec.beta
    if spec.k == 1:
        return (1 / beta[0],)
    return (-(alpha - 1) * (beta[0] + beta[1]) / beta[0] ** 2, Rational(alpha - 1) / beta[0])


def _u_linear_solve(spec: SystemSpec) -> Tuple[Rational, ...]:
    k, alpha_eff = spec.k, spec.alpha - spec.k
    matrix, rhs = [], []
    for n in range(1, k + 1):
        coeffs = coefficients(hat_laguerre(spec, n)) + [S.Zero] * k
        matrix.append(tuple(factorial(j) * coeffs[j] for j in range(k)))
        rhs.append(-gamma_integral(hat_laguerre(spec, n), alpha_eff) / gamma_moment(alpha_eff, 0))
    solution = linsolve(LinSystem(tuple(matrix), tuple(rhs)))
    if not isinstance(solution, Unique):
        raise UndeterminedParametersException()
    return solution.vector


def u_from_beta(spec: SystemSpec, closed_form: bool = True) -> MomentFunctional:
    """
    The Krall moment functional making the L^_n orthogonal.

    :param spec: an admissible system with concrete parameters.
    :param closed_form: use the explicit formulas for k <= 2; otherwise, and always for k > 2,
      solve M(L^_n) = 0, n = 1..k, for the weights u_0..u_{k-1}.
    :return: the moment functional.
    :raises: UndeterminedParametersException if the linear system is singular.
    """
    if spec.alpha < spec.k:
        raise InvalidParameterException("The moment functional needs alpha >= k.")
    if closed_form and 1 <= spec.k <= 2:
        u = _u_closed_form(spec)
    else:
        u = _u_linear_solve(spec)
    return MomentFunctional(alpha_eff=spec.alpha - spec.k, u=tuple(Rational(value) for value in u))


def beta_from_u(alpha: int, k: int, u: Sequence[Rational]) -> Tuple[Rational, ...]:
    """
    Invert the explicit weight formulas: beta_0 = 1/u_0 for k = 1, and for k = 2
    beta_0 = (alpha - 1)/u_1, beta_1 = -u_0 beta_0^2 / (alpha - 1) - beta_0.

    :raises: InvalidParameterException if k > 2 or the weights give beta_0 = 0 or infinity.
    """
    u = tuple(Rational(value) for value in u)
    if k not in (1, 2) or len(u) != k:
        raise InvalidParameterException("Weights can be converted only for k = 1, 2.")
    if u[-1] == 0:
        raise InvalidParameterException("The last weight must be nonzero.")
    if k == 1:
        return (1 / u[0],)
    beta0 = Rational(alpha - 1) / u[1]
    return beta0, -u[0] * beta0 ** 2 / (alpha - 1) - beta0


def orthogonality_check(
    system: DarbouxSystem, functional: MomentFunctional, n_max: int
) -> Certificate:
    """
    Verify M(L^_n L^_m) = 0 for 0 <= m < n <= n_max and M(L^_n^2) != 0.
    """
    hat = [hat_laguerre(system, n) for n in range(n_max + 1)]

    def _check(n: int):
        for m in range(n):
            if (value := moment_functional_apply(functional, hat[n] * hat[m])) != 0:
                return f"M(L^_{n} L^_{m}) = {value}"
        if moment_functional_apply(functional, hat[n] ** 2) == 0:
            return f"M(L^_{n}^2) = 0"
        return None

    return certify(
        "darboux_orthogonality",
        (0, n_max),
        range(n_max + 1),
        _check,
        alpha=system.alpha,
        k=system.k,
        u=[str(value) for value in functional.u],
    )
