import logging
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import Poly, Rational, S, Symbol, expand, summation

from krall_laguerre.core import config
from krall_laguerre.core.exceptions import InvalidParameterException, KrallLaguerreException
from krall_laguerre.helpers.certificates import certify
from krall_laguerre.helpers.darboux import hat_laguerre, system_spec
from krall_laguerre.helpers.diffop import (
    DiffOp,
    d_dx,
    derivative,
    diffop_apply,
    diffop_compose,
    identity,
    laguerre_operator,
    op_substitute,
)
from krall_laguerre.helpers.exact import (
    N,
    X,
    Affine,
    Infeasible,
    LinSystem,
    Solution,
    coefficient,
    linsolve,
    npoly,
    poly_eval,
    shifted,
    xpoly,
)
from krall_laguerre.helpers.laguerre import binomial_npoly, laguerre_poly
from krall_laguerre.models.certificate import Certificate
from krall_laguerre.models.eigen import EigenOperator, EigenPoly, NoOperator, NotMember
from krall_laguerre.models.enums import Construction
from krall_laguerre.models.system import DarbouxSystem
from krall_laguerre.monitoring.commands import OPERATORS_CONSTRUCTED

_LOGGER = logging.getLogger(__name__)

_S = Symbol("s")


def algebra_membership(h: Poly, system: DarbouxSystem) -> Union[EigenPoly, NotMember]:
    """
    Decide whether h(n) - h(n-1) is divisible by tau(n-1).

    :return: the EigenPoly with the quotient g, or NotMember with the nonzero remainder.
    """
    quotient, remainder = (h - shifted(h, -1)).div(shifted(system.tau, -1))
    if remainder.is_zero:
        return EigenPoly(h=h, g=quotient)
    return NotMember(h=h, remainder=remainder)


def discrete_integral(f: Poly, m: int, n: int) -> Rational:
    """
    The integral of f with respect to the counting measure: sum_{s=m+1}^{n} f(s) when n > m,
    0 when n = m and -sum_{s=n+1}^{m} f(s) when n < m.
    """
    if n > m:
        return sum((poly_eval(f, s) for s in range(m + 1, n + 1)), S.Zero)
    if n < m:
        return -sum((poly_eval(f, s) for s in range(n + 1, m + 1)), S.Zero)
    return S.Zero


def indefinite_sum(p: Poly) -> Poly:
    """
    :return: the polynomial H with H(0) = 0 and H(n) - H(n-1) = p(n).
    """
    return npoly(expand(summation(p.as_expr().subs(N, _S), (_S, 1, N))))


def algebra_basis(system: DarbouxSystem, max_deg: int) -> List[EigenPoly]:
    """
    One element of every degree d = deg(tau)+1..max_deg,
    h(n) = sum_{s=1}^{n} s^(d-deg(tau)-1) tau(s-1), preceded by the constant 1.

    :raises: InvalidParameterException if max_deg <= deg(tau).
    """
    tau_degree = system.tau.degree()
    if max_deg <= tau_degree:
        raise InvalidParameterException(
            f"The degree bound must exceed deg(tau) (max_deg: {max_deg}, deg: {tau_degree})."
        )
    basis = [EigenPoly(h=npoly(1), g=npoly(0))]
    for degree in range(tau_degree + 1, max_deg + 1):
        g = npoly(N ** (degree - tau_degree - 1))
        member = algebra_membership(indefinite_sum(g * shifted(system.tau, -1)), system)
        if not member or member.g != g:
            raise KrallLaguerreException(f"Summation left the algebra (degree: {degree}).")
        basis.append(member)
    return basis


def k1_generators(alpha: int, beta0: Rational) -> List[EigenPoly]:
    """
    The generators
    h^(j)(n) = beta0 binom(n+alpha+j, j+1) + binom(alpha+j, alpha) binom(n+alpha+j, alpha+j+1),
    j = 0..alpha, of the algebra for one Darboux step; g^(j)(n) = binom(n+alpha+j-1, j).
    """
    system = system_spec(alpha, 1, (beta0,))
    generators = []
    for j in range(alpha + 1):
        h = binomial_npoly(alpha + j, j + 1).mul_ground(beta0) + binomial_npoly(
            alpha + j, alpha + j + 1
        ).mul_ground(binomial_npoly(alpha, alpha).eval(j))
        member = algebra_membership(h, system)
        if not member:
            raise KrallLaguerreException(f"Generator {j} is not in the algebra.")
        generators.append(member)
    return generators


def product_operator(r0: Poly, r1: Poly, r2: Poly, alpha: int) -> DiffOp:
    """
    Assemble [r1(B) (1 - d/dx) - r2(B+1) d/dx] r0(B), mapping L_n to
    r0(n) sum_{s=0}^{n} [r1(s) L_s + r2(s) L_{s-1}].
    """
    base = laguerre_operator(alpha)
    left = diffop_compose(op_substitute(r1, base), identity() - d_dx()) - diffop_compose(
        op_substitute(r2, base, 1), d_dx()
    )
    return diffop_compose(left, op_substitute(r0, base))


def product_operator_check(r0: Poly, r1: Poly, r2: Poly, alpha: int, n_max: int) -> Certificate:
    operator = product_operator(r0, r1, r2, alpha)

    def _check(n: int):
        total = xpoly(0)
        for s in range(n + 1):
            total += laguerre_poly(alpha, s).mul_ground(poly_eval(r1, s))
            total += laguerre_poly(alpha, s - 1).mul_ground(poly_eval(r2, s))
        expected = total.mul_ground(poly_eval(r0, n))
        actual = diffop_apply(operator, laguerre_poly(alpha, n))
        return None if actual == expected else f"difference {(actual - expected).as_expr()}"

    return certify("product_operator", (0, n_max), range(n_max + 1), _check, alpha=alpha)


def _record(op: EigenOperator) -> EigenOperator:
    OPERATORS_CONSTRUCTED.labels(op.construction.value).inc()
    _LOGGER.info(
        "Eigen-operator built.",
        extra=dict(construction=op.construction.value, order=op.order),
    )
    return op


def bhat_closed_form_k1(member: EigenPoly, system: DarbouxSystem) -> EigenOperator:
    """
    The operator g(B+1) (d/dx - 1) tau(B) + h(B+1) for one Darboux step.

    :raises: InvalidParameterException if the system has more than one step.
    """
    if system.k != 1:
        raise InvalidParameterException("The closed form needs exactly one Darboux step.")
    base = laguerre_operator(system.alpha)
    op = diffop_compose(
        diffop_compose(op_substitute(member.g, base, 1), d_dx() - identity()),
        op_substitute(system.tau, base),
    ) + op_substitute(member.h, base, 1)
    if op.order != 2 * member.h.degree() and not op.is_zero:
        raise KrallLaguerreException(f"Unexpected operator order {op.order}.")
    return _record(
        EigenOperator(
            op=op, eigenvalue=member.h, construction=Construction.CLOSED_FORM_K1, member=member
        )
    )


def operator_unknowns(order: int) -> List[Tuple[int, int]]:
    return [(j, t) for j in range(order + 1) for t in range(j + 1)]


def operator_from_coefficients(
    unknowns: Sequence[Tuple[int, int]], vector: Sequence[Rational]
) -> DiffOp:
    """
    :return: the operator whose coefficient of x^t in b_j is the entry of (j, t).
    """
    terms: Dict[int, Poly] = {}
    for (j, t), value in zip(unknowns, vector):
        if value:
            terms[j] = terms.get(j, xpoly(0)) + xpoly(value * X ** t)
    return DiffOp.from_mapping(terms)


def _build_rows(
    system: DarbouxSystem, h: Poly, order: int, n: int, unknowns: Sequence[Tuple[int, int]]
) -> Tuple[List[List[Rational]], List[Rational]]:
    hat = hat_laguerre(system, n)
    derivatives = [derivative(hat, j) for j in range(order + 1)]
    target = hat.mul_ground(poly_eval(h, n))
    rows, rhs = [], []
    for power in range(n + 1):
        rows.append([coefficient(derivatives[j], power - t) for j, t in unknowns])
        rhs.append(coefficient(target, power))
    return rows, rhs


def _eigen_mismatch(op: DiffOp, h: Poly, system: DarbouxSystem, n: int) -> Optional[str]:
    hat = hat_laguerre(system, n)
    difference = diffop_apply(op, hat) - hat.mul_ground(poly_eval(h, n))
    if difference.is_zero:
        return None
    power, value = difference.terms()[0]
    return f"coefficient of x^{power[0]} off by {value}"


def bhat_linear_solve(
    h: Union[EigenPoly, Poly],
    system: DarbouxSystem,
    order_cap: Optional[int] = None,
    n_extra: Optional[int] = None,
) -> Union[EigenOperator, NoOperator]:
    """
    Reconstruct an operator sum_j b_j(x) (d/dx)^j, deg b_j <= j, with B L^_n = h(n) L^_n.

    The coefficientwise equations of the indices n <= N_build, with
    N_build = (order_cap+1)(order_cap+2)/2 + deg(tau) + EIGEN_BUILD_SLACK, are all imposed. They
    are solved exactly on n <= n_0, the first index giving ten more equations than unknowns; since
    L^_0..L^_{n_0} span the polynomials of degree <= n_0 > order_cap, the solution is then unique
    and the remaining equations up to N_build are imposed by substitution. An undetermined
    solution is solved again on all the equations up to N_build. The operator is finally checked
    up to N_build + n_extra.

    :param h: the eigenvalue, with or without a membership certificate.
    :param system: the Darboux system.
    :param order_cap: an even order, defaulting to 2 deg(h).
    :param n_extra: the verification margin, defaulting to EIGEN_VERIFY_EXTRA.
    :return: the operator, or NoOperator when the equations are inconsistent.
    """
    if isinstance(h, EigenPoly):
        member: Optional[EigenPoly] = h
        h = h.h
    else:
        member = algebra_membership(h, system) or None
    order = 2 * max(h.degree(), 0) if order_cap is None else order_cap
    if order < 0 or order % 2:
        raise InvalidParameterException(f"The order cap must be even and non-negative ({order}).")
    n_extra = config.EIGEN_VERIFY_EXTRA if n_extra is None else n_extra
    unknowns = operator_unknowns(order)
    n_build = len(unknowns) + system.tau.degree() + config.EIGEN_BUILD_SLACK
    n_probe = 0
    while (n_probe + 1) * (n_probe + 2) // 2 < len(unknowns) + 10:
        n_probe += 1

    matrix: List[List[Rational]] = []
    rhs: List[Rational] = []

    def _solve(n_first: int, n_stop: int) -> Solution:
        for n in range(n_first, n_stop + 1):
            rows, values = _build_rows(system, h, order, n, unknowns)
            matrix.extend(rows)
            rhs.extend(values)
        return linsolve(LinSystem(tuple(map(tuple, matrix)), tuple(rhs)))

    solved_up_to = n_probe
    solution = _solve(0, n_probe)
    if isinstance(solution, Affine):
        solved_up_to = n_build
        solution = _solve(n_probe + 1, n_build)
    if isinstance(solution, Infeasible):
        _LOGGER.info("No operator found.", extra=dict(order=order, n_max=solved_up_to))
        return NoOperator(eigenvalue=h, order_cap=order, reason="inconsistent equations")
    annihilator_dim = solution.dim if isinstance(solution, Affine) else 0
    vector = solution.particular if isinstance(solution, Affine) else solution.vector

    op = operator_from_coefficients(unknowns, vector)

    n_last = n_build + n_extra
    for n in range(solved_up_to + 1, n_last + 1):
        if (mismatch := _eigen_mismatch(op, h, system, n)) is not None:
            reason = "inconsistent equations" if n <= n_build else "verification failed"
            _LOGGER.info(
                "Reconstructed operator rejected.", extra=dict(n=n, reason=reason, detail=mismatch)
            )
            return NoOperator(eigenvalue=h, order_cap=order, reason=reason, witness=n)
    return _record(
        EigenOperator(
            op=op,
            eigenvalue=h,
            construction=Construction.LINEAR_SOLVE,
            member=member,
            annihilator_dim=annihilator_dim,
            build_range=(0, n_build),
            verified_range=(0, n_last),
            solved_up_to=solved_up_to,
        )
    )


def eigen_verify(op: DiffOp, h: Poly, system: DarbouxSystem, n_max: int) -> Certificate:
    """
    Verify op L^_n = h(n) L^_n for n = 0..n_max.
    """
    return certify(
        "eigen_equation",
        (0, n_max),
        range(n_max + 1),
        lambda n: _eigen_mismatch(op, h, system, n),
        order=str(op.order),
    )


def commutativity_check(ops: Sequence[EigenOperator]) -> Certificate:
    """
    Verify that every pair of operators commutes, as normal forms.
    """
    pairs = list(combinations(range(len(ops)), 2))

    def _check(pair: Tuple[int, int]):
        first, second = ops[pair[0]].op, ops[pair[1]].op
        commutator = first * second - second * first
        return None if commutator.is_zero else f"commutator of order {commutator.order}"

    return certify("commutativity", (0, max(len(ops) - 1, 0)), pairs, _check)


def operator_orders(system: DarbouxSystem, count: int) -> List[int]:
    """
    :return: the orders 2 deg(h) of the first `count` nonconstant basis elements.
    """
    start = system.tau.degree() + 1
    return [2 * degree for degree in range(start, start + count)]
