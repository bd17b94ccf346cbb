import logging
import random
from itertools import count as counter
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import Expr, Poly, Rational, S, Symbol, cancel, factorial

from krall_laguerre.core import config
from krall_laguerre.core.exceptions import InvalidParameterException, SymbolicUnsupportedException
from krall_laguerre.helpers.certificates import certify, combine
from krall_laguerre.helpers.darboux import admissible, hat_deriv_at_zero, hat_laguerre, system_spec
from krall_laguerre.helpers.diffop import derivative
from krall_laguerre.helpers.eigen import (
    algebra_membership,
    bhat_linear_solve,
    indefinite_sum,
    operator_unknowns,
)
from krall_laguerre.helpers.exact import (
    N,
    casorati,
    coefficient,
    npoly,
    nullspace,
    poly_eval,
    poly_gcd,
    random_npoly,
    random_rational,
    resultant,
    shifted,
)
from krall_laguerre.helpers.laguerre import laguerre_deriv_at_zero
from krall_laguerre.models.certificate import Certificate
from krall_laguerre.models.eigen import NoOperator
from krall_laguerre.models.genericity import GenericityReport, ProbeDegree, ProbeReport
from krall_laguerre.models.system import DarbouxSystem, SystemSpec

_LOGGER = logging.getLogger(__name__)

# Two-step parameters where the resultant and its explicit formula are both nonzero.
_K2_REFERENCE_BETA = (S.One, S.Zero)


def beta_symbols(k: int) -> Tuple[Symbol, ...]:
    return tuple(Symbol(f"beta{j}") for j in range(k))


def resultant_R(system: DarbouxSystem) -> Union[Rational, Poly]:
    """
    R(beta) = Res(tau(n), L^_n(0)), a polynomial in beta for symbolic parameters.

    :raises: SymbolicUnsupportedException for symbolic parameters with more than
      GENERICITY_SYMBOLIC_MAX_K steps.
    """
    if system.params and system.k > config.GENERICITY_SYMBOLIC_MAX_K:
        raise SymbolicUnsupportedException(
            f"Symbolic resultants are supported up to k={config.GENERICITY_SYMBOLIC_MAX_K}."
        )
    return resultant(system.tau, hat_deriv_at_zero(system, 0))


def k1_resultant_closed_form(alpha: int, beta0):
    """
    (-1)^alpha beta0^(2 alpha - 1) / [(alpha - 1)!]^alpha.
    """
    return (-1) ** alpha * S(beta0) ** (2 * alpha - 1) / factorial(alpha - 1) ** alpha


def k2_resultant_closed_form(alpha: int, beta0, beta1):
    """
    2^a b0^(5a-5) / ((a-1)^(2a-2) (a+1)^a [(a-1)!]^(4a)) [b0^a binom(z, a) + b0^(a+1)],
    with z = (a-1)/2 - b1 (a^2-1) / (2 b0 a).
    """
    beta0, beta1 = S(beta0), S(beta1)
    z = Rational(alpha - 1, 2) - beta1 * (alpha ** 2 - 1) / (2 * beta0 * alpha)
    binomial = S.One
    for i in range(alpha):
        binomial *= z - i
    binomial /= factorial(alpha)
    denominator = (
        (alpha - 1) ** (2 * alpha - 2) * (alpha + 1) ** alpha * factorial(alpha - 1) ** (4 * alpha)
    )
    prefactor = 2 ** alpha * beta0 ** (5 * alpha - 5) / denominator
    return prefactor * (beta0 ** alpha * binomial + beta0 ** (alpha + 1))


def k2_genericity_equation(alpha: int, beta: Sequence[Rational]) -> Rational:
    """
    (2a)^a a! b0^(a+1) + prod_{j=0}^{a-1} [(a^2 - a - 2aj) b0 - (a^2 - 1) b1];
    for a = 2 this is 32 b0^3 - 4 b0^2 + 9 b1^2.
    """
    beta0, beta1 = (S(b) for b in beta)
    product = S.One
    for j in range(alpha):
        product *= (alpha ** 2 - alpha - 2 * alpha * j) * beta0 - (alpha ** 2 - 1) * beta1
    return (2 * alpha) ** alpha * factorial(alpha) * beta0 ** (alpha + 1) + product


def k2_genericity_u_form(u0: Rational, u1: Rational) -> Rational:
    """
    The alpha = 2 equation in the weights: 9 u0^2 + 18 u0 u1 + 5 u1^2 + 32 u1.
    """
    u0, u1 = S(u0), S(u1)
    return 9 * u0 ** 2 + 18 * u0 * u1 + 5 * u1 ** 2 + 32 * u1


def k2_nongeneric_eigenvalue(beta0: Rational, beta1: Rational) -> Poly:
    """
    h(n) = n^4 + 2n^3 + (28 b0 - 1) n^2 + (36 b1 + 28 b0 - 2) n, the eigenvalue of an operator of
    order 8 at the alpha = 2 points where 32 b0^3 - 4 b0^2 + 9 b1^2 vanishes.
    """
    beta0, beta1 = S(beta0), S(beta1)
    return npoly(
        N ** 4 + 2 * N ** 3 + (28 * beta0 - 1) * N ** 2 + (36 * beta1 + 28 * beta0 - 2) * N
    )


def closed_form_ratio(
    alpha: int, k: int, beta: Sequence, value: Optional[Union[Rational, Poly]] = None
) -> Optional[Expr]:
    """
    The resultant divided by its explicit formula (k = 1, 2), None where the formula vanishes.
    """
    if value is None:
        value = resultant_R(system_spec(alpha, k, beta))
    if k == 1:
        closed = k1_resultant_closed_form(alpha, beta[0])
    elif S(beta[0]) == 0:
        # The formula tends to zero with beta0.
        return None
    else:
        closed = k2_resultant_closed_form(alpha, *beta)
    if closed == 0:
        return None
    return cancel((value.as_expr() if isinstance(value, Poly) else value) / closed)


def _small_rationals() -> Iterable[Rational]:
    seen = set()
    for height in counter(1):
        for denominator in range(1, height + 1):
            for numerator in range(0, height * denominator + 1):
                if (value := Rational(numerator, denominator)) not in seen:
                    seen.add(value)
                    yield value


def k2_nongeneric_points(
    count: int, admissible_only: bool = True
) -> List[Tuple[Rational, Rational]]:
    """
    Rational points of 32 b0^3 - 4 b0^2 + 9 b1^2 = 0 (alpha = 2), from
    b0 = (4 - r^2)/32, b1 = +-b0 r/3 for rational r >= 0, r != 2, starting at (1/8, 0).
    """
    points: List[Tuple[Rational, Rational]] = []
    for r in _small_rationals():
        if len(points) >= count:
            break
        if r == 2:
            continue
        beta0 = (4 - r ** 2) / 32
        for beta1 in dict.fromkeys((beta0 * r / 3, -beta0 * r / 3)):
            if len(points) < count and (
                not admissible_only or admissible(system_spec(2, 2, (beta0, beta1)))[0]
            ):
                points.append((beta0, beta1))
    return points


def genericity_report(spec: SystemSpec) -> GenericityReport:
    """
    The resultant and the generic flag, compared with the explicit formulas where they exist.
    The ratio to the formula must be 1 for one step; for two it must equal the ratio at
    beta = (1, 0). Where the formula vanishes, so must the resultant.
    """
    value = resultant_R(spec)
    generic = not value.is_zero if isinstance(value, Poly) else value != 0
    match = None
    if spec.k == 1:
        ratio = closed_form_ratio(spec.alpha, 1, spec.beta, value)
        match = not generic if ratio is None else ratio == 1
    elif spec.k == 2 and not spec.params and spec.alpha >= 2:
        ratio = closed_form_ratio(spec.alpha, 2, spec.beta, value)
        reference = closed_form_ratio(spec.alpha, 2, _K2_REFERENCE_BETA)
        match = not generic if ratio is None else ratio != 0 and ratio == reference
    _LOGGER.info(
        "Genericity computed.", extra=dict(alpha=spec.alpha, k=spec.k, generic=generic)
    )
    return GenericityReport(
        system=spec, resultant_value=value, generic=generic, closed_form_match=match
    )


def consistency_vs_closed_form(
    alphas: Sequence[int], k: int, samples: int = 25, seed: Optional[int] = None
) -> Certificate:
    """
    Compare the resultant with the explicit formulas: symbolically in beta0 for one step, at
    random rational points for two. The ratio must be one constant, recorded in the details.
    """
    if k not in (1, 2):
        raise InvalidParameterException("Explicit resultant formulas exist for k = 1, 2 only.")
    rng = random.Random(config.DEFAULT_SEED if seed is None else seed)
    ratios: Dict[int, List[Optional[Rational]]] = {}
    for alpha in alphas:
        if k == 1:
            (beta0,) = beta_symbols(1)
            ratios[alpha] = [closed_form_ratio(alpha, 1, (beta0,))]
            continue
        ratios[alpha] = []
        for _ in range(samples):
            beta = (random_rational(rng) or S.One, random_rational(rng))
            value = resultant_R(system_spec(alpha, 2, beta))
            if (ratio := closed_form_ratio(alpha, 2, beta, value)) is None:
                ratios[alpha].append(None if value == 0 else S.NaN)
            else:
                ratios[alpha].append(ratio)

    defined = [ratio for values in ratios.values() for ratio in values if ratio is not None]
    constant = defined[0] if defined else S.One

    def _check(alpha: int):
        for ratio in ratios[alpha]:
            if ratio is None:
                continue
            if ratio.free_symbols:
                return f"ratio {ratio} is not constant"
            if ratio != constant or ratio == 0:
                return f"ratio {ratio} differs from {constant}"
        return None

    return certify(
        "resultant_closed_form",
        (min(alphas), max(alphas)),
        alphas,
        _check,
        k=k,
        constant=str(constant),
    )


def _random_family(rng: random.Random, size: int, max_degree: int = 3) -> List[Poly]:
    degrees = rng.sample(range(max_degree + 1), size) if size <= max_degree + 1 else [
        rng.randint(0, max_degree) for _ in range(size)
    ]
    return [random_npoly(rng, degree) for degree in degrees]


def desnanot_jacobi_identity(functions: Sequence[Poly]) -> bool:
    """
    Wr_n(f1..f_{m+2}) Wr_{n-1}(f2..f_{m+1})
      = Wr_{n-1}(f2..f_{m+2}) Wr_n(f1..f_{m+1}) - Wr_n(f2..f_{m+2}) Wr_{n-1}(f1..f_{m+1}),
    as polynomials in n.
    """
    everything, inner = casorati(functions), casorati(functions[1:-1])
    tail, head = casorati(functions[1:]), casorati(functions[:-1])
    lhs = everything * shifted(inner, -1)
    rhs = shifted(tail, -1) * head - tail * shifted(head, -1)
    return lhs == rhs


def desnanot_jacobi_check(
    m: int, trials: Optional[int] = None, seed: Optional[int] = None
) -> Certificate:
    """
    Check the Desnanot-Jacobi identity on random families of m + 2 polynomials of degree <= 3.
    """
    trials = config.PROPERTY_TRIALS if trials is None else trials
    rng = random.Random(config.DEFAULT_SEED if seed is None else seed)
    families = [_random_family(rng, m + 2) for _ in range(trials)]
    return certify(
        "desnanot_jacobi",
        (0, trials - 1),
        range(trials),
        lambda trial: None if desnanot_jacobi_identity(families[trial]) else "identity fails",
        m=m,
    )


def resultant_shift_identity(functions: Sequence[Poly]) -> bool:
    """
    Res(G_m(n), G_{m+1}(n)) = Res(G_m(n-1), G_{m+1}(n)) with G_j = Wr_n(f1..fj).
    """
    lower, upper = casorati(functions[:-1]), casorati(functions)
    return resultant(lower, upper) == resultant(shifted(lower, -1), upper)


def resultant_shift_check(
    m: int, trials: Optional[int] = None, seed: Optional[int] = None
) -> Certificate:
    """
    Check the shift invariance of Res(G_m, G_{m+1}) on random families of m + 1 polynomials
    of distinct degrees <= 3, whose Casorati determinants never vanish.
    """
    trials = config.PROPERTY_TRIALS if trials is None else trials
    rng = random.Random(config.DEFAULT_SEED if seed is None else seed)
    families = [_random_family(rng, m + 1) for _ in range(trials)]
    return certify(
        "resultant_shift",
        (0, trials - 1),
        range(trials),
        lambda trial: None if resultant_shift_identity(families[trial]) else "identity fails",
        m=m,
    )


def derivative_divisibility_check(system: DarbouxSystem, j: int, n_max: int) -> Certificate:
    """
    Verify tau(n-1) Wr_n(psi.., L_n^(j)(0), L_n(0))
      = L^_{n-1}(0) L^_n^(j)(0) - L^_n(0) L^_{n-1}^(j)(0),
    the identity behind the divisibility of eigenvalue differences.
    """
    extended = list(system.psis) + [
        laguerre_deriv_at_zero(system.alpha, j),
        laguerre_deriv_at_zero(system.alpha, 0),
    ]
    lhs = shifted(system.tau, -1) * casorati(extended)
    values, derivatives = hat_deriv_at_zero(system, 0), hat_deriv_at_zero(system, j)
    rhs = shifted(values, -1) * derivatives - values * shifted(derivatives, -1)

    def _check(n: int):
        left, right = poly_eval(lhs, n), poly_eval(rhs, n)
        return None if left == right else f"{left} != {right}"

    return certify("derivative_divisibility", (0, n_max), range(n_max + 1), _check, j=j)


def resultant_square_check(system: DarbouxSystem) -> Certificate:
    """
    Verify Res(tau(n-1), L^_{n-1}(0) L^_n(0)) = R(beta)^2.
    """
    values = hat_deriv_at_zero(system, 0)
    square = resultant(shifted(system.tau, -1), shifted(values, -1) * values)
    value = resultant_R(system)
    return certify(
        "resultant_square",
        (0, 0),
        [0],
        lambda _: None if square == value ** 2 else f"{square} != {value}^2",
    )


def probe_divisor(system: DarbouxSystem) -> Poly:
    """
    D(n) = tau(n-1) / gcd(tau(n-1), L^_{n-1}(0) L^_n(0)), which divides h(n) - h(n-1) for every
    eigenvalue h of an operator in x.
    """
    values = hat_deriv_at_zero(system, 0)
    tau_previous = shifted(system.tau, -1)
    common = poly_gcd(tau_previous, shifted(values, -1) * values)
    return tau_previous.exquo(common)


def _probe_rows(
    system: DarbouxSystem, sums: Sequence[Poly], order: int, n: int
) -> List[List[Rational]]:
    unknowns = operator_unknowns(order)
    hat = hat_laguerre(system, n)
    derivatives = [derivative(hat, j) for j in range(order + 1)]
    sum_values = [poly_eval(p, n) for p in sums]
    rows = []
    for power in range(n + 1):
        row = [coefficient(derivatives[j], power - t) for j, t in unknowns]
        row += [-value * coefficient(hat, power) for value in sum_values]
        rows.append(row)
    return rows


def _eigenvalue_space(
    system: DarbouxSystem, sums: Sequence[Poly], order: int, n_max: int
) -> List[Poly]:
    rows: List[List[Rational]] = []
    for n in range(n_max + 1):
        rows.extend(_probe_rows(system, sums, order, n))
    n_operator = len(operator_unknowns(order))
    eigenvalues = []
    for vector in nullspace(rows, n_operator + len(sums)):
        h = npoly(0)
        for weight, p in zip(vector[n_operator:], sums):
            h += p.mul_ground(weight)
        if not h.is_zero:
            eigenvalues.append(h)
    return eigenvalues


def _probe_degree(system: DarbouxSystem, divisor: Poly, degree: int) -> ProbeDegree:
    candidate_dim = max(degree - divisor.degree(), 0)
    if candidate_dim == 0:
        return ProbeDegree(degree=degree, candidate_dim=0, member_dim=0, probed=True)
    if candidate_dim > config.PROBE_MAX_CANDIDATE_DIM:
        return ProbeDegree(degree=degree, candidate_dim=candidate_dim, member_dim=0, probed=False)
    sums = [indefinite_sum(divisor * npoly(N ** i)) for i in range(candidate_dim)]
    order = 2 * degree
    n_unknowns = len(operator_unknowns(order)) + candidate_dim
    n_probe = 0
    while (n_probe + 1) * (n_probe + 2) // 2 < n_unknowns + 10:
        n_probe += 1

    eigenvalues = _eigenvalue_space(system, sums, order, n_probe)
    operators = [bhat_linear_solve(h, system, order) for h in eigenvalues]
    if any(isinstance(op, NoOperator) for op in operators):
        n_last = (
            len(operator_unknowns(order))
            + system.tau.degree()
            + config.EIGEN_BUILD_SLACK
            + config.EIGEN_VERIFY_EXTRA
        )
        eigenvalues = _eigenvalue_space(system, sums, order, n_last)
        operators = [bhat_linear_solve(h, system, order) for h in eigenvalues]
    found = [(h, op) for h, op in zip(eigenvalues, operators) if not isinstance(op, NoOperator)]
    if not found:
        return ProbeDegree(degree=degree, candidate_dim=candidate_dim, member_dim=0, probed=True)
    outside = [(h, op) for h, op in found if not algebra_membership(h, system)]
    example, operator = max(outside or found, key=lambda pair: pair[0].degree())
    return ProbeDegree(
        degree=degree,
        candidate_dim=candidate_dim,
        member_dim=len(found),
        probed=True,
        example=example,
        outside_algebra=bool(outside),
        operator_order=operator.order,
    )


def abar_probe(system: DarbouxSystem, max_deg: Optional[int] = None) -> ProbeReport:
    """
    Search, degree by degree, for eigenvalues h with h(0) = 0 of operators in x: h is taken in the
    space where D(n) divides h(n) - h(n-1), and the operator of order 2 deg(h) is solved for
    jointly with h. Degrees above 2 deg(tau) + 1, or with more than PROBE_MAX_CANDIDATE_DIM
    candidates, are reported as not probed.

    :param system: an admissible system.
    :param max_deg: the largest degree, deg(tau) + PROBE_DEFAULT_DEGREE_MARGIN by default.
    :return: the per-degree report.
    """
    tau_degree = system.tau.degree()
    if max_deg is None:
        max_deg = tau_degree + config.PROBE_DEFAULT_DEGREE_MARGIN
    divisor = probe_divisor(system)
    degrees = []
    for degree in range(1, max_deg + 1):
        if degree > 2 * tau_degree + 1:
            degrees.append(
                ProbeDegree(degree=degree, candidate_dim=0, member_dim=0, probed=False)
            )
            continue
        degrees.append(_probe_degree(system, divisor, degree))
    report = ProbeReport(
        max_deg=max_deg,
        divisor=divisor,
        degrees=tuple(degrees),
        verified_up_to=len(operator_unknowns(2 * max_deg))
        + tau_degree
        + config.EIGEN_BUILD_SLACK
        + config.EIGEN_VERIFY_EXTRA,
    )
    _LOGGER.info(
        "Probe completed.",
        extra=dict(minimal_degree=report.minimal_degree, extended=report.algebra_extended),
    )
    return report


def lemma_property_suite(trials: Optional[int] = None, seed: Optional[int] = None) -> Certificate:
    """
    Run the Desnanot-Jacobi and resultant shift checks for m = 1, 2, 3.
    """
    certificates = []
    for m in (1, 2, 3):
        certificates.append(desnanot_jacobi_check(m, trials, seed))
        certificates.append(resultant_shift_check(m, trials, seed))
    return combine("determinant_lemmas", certificates)
