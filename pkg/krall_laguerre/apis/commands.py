import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import Poly, Rational

from krall_laguerre.core import config
from krall_laguerre.core.exceptions import (
    InadmissibleParametersException,
    InvalidParameterException,
    NoOperatorException,
)
from krall_laguerre.helpers.certificates import certify, combine
from krall_laguerre.helpers.darboux import (
    admissible,
    beta_from_u,
    hat_jacobi_row,
    intertwining_check,
    orthogonality_check,
    recurrence_check,
    system_spec,
    tau_minus_one_closed_form,
    u_from_beta,
)
from krall_laguerre.helpers.eigen import (
    algebra_basis,
    algebra_membership,
    bhat_closed_form_k1,
    bhat_linear_solve,
    commutativity_check,
    eigen_verify,
    k1_generators,
    product_operator_check,
)
from krall_laguerre.helpers.exact import N, format_poly, npoly, poly_eval
from krall_laguerre.helpers.genericity import (
    abar_probe,
    beta_symbols,
    consistency_vs_closed_form,
    derivative_divisibility_check,
    genericity_report,
    k2_genericity_equation,
    k2_nongeneric_eigenvalue,
    lemma_property_suite,
    resultant_square_check,
)
from krall_laguerre.helpers.laguerre import (
    laguerre_derivative_relation_check,
    laguerre_diffeq_check,
    laguerre_norm_check,
    laguerre_recurrence_check,
)
from krall_laguerre.helpers.reach import reach_property_suite
from krall_laguerre.helpers.sobolev import (
    moment_functional_witness,
    params_from_A,
    pentadiagonal_factorization_check,
    singular_sobolev_spec,
    sobolev_algebra_order,
    sobolev_min_order,
    sobolev_order_probe,
    sobolev_orthogonality_check,
)
from krall_laguerre.models.certificate import Certificate
from krall_laguerre.models.eigen import EigenOperator, EigenPoly, NoOperator
from krall_laguerre.models.enums import Command
from krall_laguerre.models.run_config import RunConfig
from krall_laguerre.models.schemas import (
    ClassicalReportSchema,
    GenericityReportSchema,
    OperatorReportSchema,
    SelftestReportSchema,
    SobolevReportSchema,
    SystemReportSchema,
)
from krall_laguerre.models.sobolev import SobolevInnerProduct
from krall_laguerre.models.system import SystemSpec
from krall_laguerre.monitoring.helpers import monitor_command

_LOGGER = logging.getLogger(__name__)

Report = Tuple[Dict[str, Any], int]

# Candidates for the two-step grid of the self test; the admissible ones are used.
_K2_BETA_CANDIDATES = (
    (2, 0),
    (1, 1),
    (3, 1),
    (Rational(1, 2), Rational(1, 3)),
    (5, -1),
    (2, 3),
    (7, 2),
    (Rational(3, 2), 0),
)

# The acceptance range of the generator operators.
_OPERATOR_VERIFY_N = 40

# The smallest acceptance range of the Darboux identities.
_DARBOUX_VERIFY_N = 15


def _exit_code(certificates: Sequence[Certificate]) -> int:
    return 0 if all(certificates) else 1


def _verify_n(run: RunConfig) -> int:
    return config.DEFAULT_VERIFY_N if run.verify_n is None else run.verify_n


def _fact(claim: str, holds: bool, mismatch: str, **details: Any) -> Certificate:
    """
    A single-index certificate for a fact checked once.
    """
    return certify(claim, (0, 0), [0], lambda _: None if holds else mismatch, **details)


def build_system(run: RunConfig) -> SystemSpec:
    """
    Build the system of a run from beta, or from the weights u, and check admissibility.

    :raises: InadmissibleParametersException with the smallest n >= -1 where tau vanishes.
    """
    beta = run.beta or (beta_from_u(int(run.alpha), run.k, run.u) if run.u else ())
    spec = system_spec(run.alpha, run.k, beta)
    if not (verdict := admissible(spec))[0]:
        raise InadmissibleParametersException(verdict[1])
    return spec


def classical_certificates(alpha: Rational, n_max: int) -> List[Certificate]:
    certificates = [
        laguerre_recurrence_check(alpha, max(n_max, 1)),
        laguerre_diffeq_check(alpha, n_max),
        laguerre_derivative_relation_check(alpha, n_max),
    ]
    if alpha.is_integer and alpha >= 0:
        certificates.append(laguerre_norm_check(int(alpha), n_max))
    return certificates


def system_certificates(
    spec: SystemSpec, n_max: int
) -> Tuple[List[Certificate], Optional[Tuple[Rational, ...]]]:
    """
    The recurrence, intertwining, tau(-1) and orthogonality checks of a concrete system.

    :return: the certificates and the weights u of the moment functional.
    """
    certificates = [recurrence_check(spec, n_max), intertwining_check(spec, n_max)]
    if not spec.k:
        return certificates, None
    tau_minus_one = poly_eval(spec.tau, -1)
    closed = tau_minus_one_closed_form(spec.alpha, spec.k, spec.beta[0])
    certificates.append(
        _fact("tau_minus_one", tau_minus_one == closed, f"{tau_minus_one} != {closed}")
    )
    functional = u_from_beta(spec)
    certificates.append(orthogonality_check(spec, functional, n_max))
    if spec.k <= 2:
        solved = u_from_beta(spec, closed_form=False)
        certificates.append(
            _fact(
                "weights_linear_solve",
                solved.u == functional.u,
                f"{[str(u) for u in solved.u]} != {[str(u) for u in functional.u]}",
            )
        )
    return certificates, functional.u


@monitor_command(Command.CLASSICAL)
def cmd_classical(run: RunConfig) -> Report:
    """
    Run the classical Laguerre identities for n = 0..N.
    """
    certificates = classical_certificates(run.alpha, _verify_n(run))
    payload = ClassicalReportSchema().dump(dict(alpha=run.alpha, certificates=certificates))
    return payload, _exit_code(certificates)


@monitor_command(Command.SYSTEM)
def cmd_system(run: RunConfig) -> Report:
    """
    Build the Darboux transformed system and certify its recurrence and orthogonality.
    """
    spec = build_system(run)
    n_max = _verify_n(run)
    certificates, u = system_certificates(spec, n_max)
    payload = SystemReportSchema().dump(
        dict(
            alpha=run.alpha,
            k=spec.k,
            beta=spec.beta,
            tau=spec.tau,
            tau_minus_one=poly_eval(spec.tau, -1),
            admissible=True,
            witness=None,
            u=u,
            jacobi=[hat_jacobi_row(spec, n) for n in range(n_max + 1)],
            certificates=certificates,
        )
    )
    return payload, _exit_code(certificates)


def select_eigenvalue(spec: SystemSpec, run: RunConfig) -> Poly:
    """
    The eigenvalue of an operator run: the generator of the given index, or the explicit
    polynomial sum_i c_i n^i.
    """
    if run.generator is None:
        return npoly(sum(c * N ** i for i, c in enumerate(run.eigenvalue)))
    if spec.k == 1:
        generators = k1_generators(spec.alpha, spec.beta[0])
        if run.generator >= len(generators):
            raise InvalidParameterException(
                f"There are {len(generators)} generators (index: {run.generator})."
            )
        return generators[run.generator].h
    return algebra_basis(spec, spec.tau.degree() + 1 + run.generator)[-1].h


def construct_operator(
    h: Poly, spec: SystemSpec, order_cap: Optional[int] = None
) -> EigenOperator:
    """
    Build the operator with eigenvalue h: the closed form for one step, the linear
    reconstruction otherwise or when h is outside the explicit algebra.

    :raises: NoOperatorException when no operator of the order exists.
    """
    member = algebra_membership(h, spec)
    if member and spec.k == 1 and order_cap is None:
        return bhat_closed_form_k1(member, spec)
    result = bhat_linear_solve(member or h, spec, order_cap)
    if isinstance(result, NoOperator):
        remainder = None if member else format_poly(member.remainder)
        _LOGGER.warning(
            "No operator for the eigenvalue.",
            extra=dict(eigenvalue=format_poly(h), order=result.order_cap, reason=result.reason),
        )
        raise NoOperatorException(result.order_cap, remainder)
    return result


def operator_certificates(
    operator: EigenOperator, spec: SystemSpec, n_max: int
) -> List[Certificate]:
    h = operator.eigenvalue
    expected = 2 * max(h.degree(), 0)
    return [
        eigen_verify(operator.op, h, spec, n_max),
        _fact(
            "operator_order",
            operator.op.is_zero or operator.order == expected,
            f"order {operator.order}, expected {expected}",
        ),
    ]


@monitor_command(Command.OPERATOR)
def cmd_operator(run: RunConfig) -> Report:
    """
    Build and verify the differential operator of an eigenvalue.
    """
    spec = build_system(run)
    h = select_eigenvalue(spec, run)
    operator = construct_operator(h, spec, run.order_cap)
    certificates = operator_certificates(operator, spec, _verify_n(run))
    payload = OperatorReportSchema().dump(
        dict(
            alpha=run.alpha,
            k=spec.k,
            beta=spec.beta,
            eigenvalue=h,
            member=isinstance(operator.member, EigenPoly),
            operator=operator,
            no_operator=None,
            certificates=certificates,
        )
    )
    return payload, _exit_code(certificates)


@monitor_command(Command.GENERICITY)
def cmd_genericity(run: RunConfig) -> Report:
    """
    Compute the resultant deciding genericity, compared with the explicit formulas; for
    concrete parameters, probe the eigenvalue algebra when asked or when it may be larger.
    """
    if run.symbolic:
        spec = system_spec(run.alpha, run.k, beta_symbols(run.k))
    else:
        spec = build_system(run)
    report = genericity_report(spec)
    certificates: List[Certificate] = []
    probe = None
    if not spec.params and spec.k:
        certificates.append(resultant_square_check(spec))
        certificates.append(derivative_divisibility_check(spec, 1, _verify_n(run)))
        if run.probe or not report.generic:
            probe = abar_probe(spec, run.max_deg)
    if report.closed_form_match is not None:
        certificates.append(
            _fact("resultant_closed_form", report.closed_form_match, "closed form differs")
        )
    if report.generic:
        summary = "generic: A = Abar"
        if probe is not None:
            summary += f" (verified to degree {probe.max_deg})"
    elif probe is not None and probe.algebra_extended:
        summary = f"non-generic: Abar has an element of degree {probe.minimal_degree} outside A"
    else:
        summary = "non-generic"
    payload = GenericityReportSchema().dump(
        dict(
            alpha=run.alpha,
            k=spec.k,
            beta=spec.beta,
            resultant=report.resultant_value,
            generic=report.generic,
            closed_form_match=report.closed_form_match,
            summary=summary,
            probe=probe,
            certificates=certificates,
        )
    )
    return payload, _exit_code(certificates)


def sobolev_certificates(
    alpha: int,
    matrix: Sequence[Rational],
    n_max: int,
    search: bool = True,
    max_deg: Optional[int] = None,
) -> Tuple[Dict[str, Any], List[Certificate]]:
    """
    Choose the parameters for the inner product, check admissibility and certify orthogonality
    and the pentadiagonal factorization. The minimal operator order comes from the degree search
    up to max_deg, skipped when `search` is false.

    :return: the report fields and the certificates.
    """
    u0, u1, v0 = matrix
    ip = SobolevInnerProduct(alpha=alpha, u0=u0, u1=u1, v0=v0)
    spec = params_from_A(alpha, u0, u1, v0)
    if not (verdict := admissible(spec))[0]:
        raise InadmissibleParametersException(verdict[1])
    certificates = [
        sobolev_orthogonality_check(spec, ip, n_max),
        pentadiagonal_factorization_check(spec, n_max),
    ]
    inner_xx, inner_x2 = moment_functional_witness(ip)
    degrees = sobolev_order_probe(spec, max_deg) if search else None
    report = dict(
        alpha=alpha,
        matrix=ip.matrix,
        singular=spec.singular,
        beta0=spec.beta0,
        beta1=spec.beta1,
        l0=spec.l0,
        l1=spec.l1,
        v0=spec.v0,
        tau=spec.tau,
        algebra_order=sobolev_algebra_order(spec),
        min_order=sobolev_min_order(spec, report=degrees) if degrees is not None else None,
        moment_functional=inner_xx == inner_x2,
        probe=degrees,
    )
    return report, certificates


@monitor_command(Command.SOBOLEV)
def cmd_sobolev(run: RunConfig) -> Report:
    """
    Build the polynomials orthogonal for the Sobolev inner product of the matrix
    [[u0, u1], [u1, v0]] and certify them.
    """
    report, certificates = sobolev_certificates(
        int(run.alpha), run.matrix, _verify_n(run), max_deg=run.max_deg
    )
    payload = SobolevReportSchema().dump(dict(report, certificates=certificates))
    return payload, _exit_code(certificates)


def _k2_grid(alpha: int) -> List[SystemSpec]:
    specs = []
    for beta in _K2_BETA_CANDIDATES:
        spec = system_spec(alpha, 2, beta)
        if admissible(spec)[0]:
            specs.append(spec)
        if len(specs) == 3:
            break
    return specs


def darboux_suite(n_max: int) -> List[Certificate]:
    """
    The Darboux identities of the one-step grid (alpha = 1..4, beta0 in {1, 2, 1/2}) and of three
    admissible two-step systems for alpha = 2..4, for n up to at least 15.
    """
    n_max = max(n_max, _DARBOUX_VERIFY_N)
    grid = [
        system_spec(alpha, 1, (beta0,))
        for alpha in (1, 2, 3, 4)
        for beta0 in (1, 2, Rational(1, 2))
    ]
    grid += [spec for alpha in (2, 3, 4) for spec in _k2_grid(alpha)]
    certificates = []
    for spec in grid:
        parts, _ = system_certificates(spec, n_max)
        certificates.append(
            combine("darboux", parts, alpha=spec.alpha, beta=[str(b) for b in spec.beta])
        )
    return certificates


def sobolev_suite(n_max: int) -> List[Certificate]:
    """
    Orthogonality and factorization for A = [[1, 1], [1, 2]] at alpha = 3, whose explicit algebra
    starts at order 14, and the singular case alpha = 2, v0 = 0, u0 = 1, whose first operator,
    found by the degree search, has order 8 with nothing of lower degree.
    """
    report, certificates = sobolev_certificates(
        3, (Rational(1), Rational(1), Rational(2)), n_max, search=False
    )
    certificates.append(
        _fact(
            "sobolev_algebra_order",
            report["algebra_order"] == 14,
            f"order {report['algebra_order']}, expected 14",
        )
    )
    singular = singular_sobolev_spec(2, 1)
    search = sobolev_order_probe(singular, 4)
    order = sobolev_min_order(singular, report=search)
    certificates.append(
        _fact(
            "sobolev_singular_min_order",
            order == 8 and search.minimal_degree == 4,
            f"order {order} at degree {search.minimal_degree}, expected 8 at degree 4",
        )
    )
    return certificates


def selftest_certificates(n_max: int, seed: Optional[int] = None) -> List[Certificate]:
    """
    The full acceptance suite, over the index range 0..n_max.
    """
    certificates: List[Certificate] = []
    for alpha in (1, 2, 3, 4):
        certificates.append(
            combine("classical", classical_certificates(Rational(alpha), n_max), alpha=alpha)
        )

    certificates.extend(darboux_suite(n_max))
    for beta0, expected in ((0, -1), (-1, 0)):
        witness = admissible(system_spec(1, 1, (beta0,)))[1]
        certificates.append(
            _fact(
                "admissibility_witness",
                witness == expected,
                f"witness {witness}, expected {expected}",
                beta0=beta0,
            )
        )

    for alpha in (1, 2):
        certificates.extend(operator_suite(alpha, n_max))
    certificates.append(consistency_vs_closed_form([1, 2, 3, 4], 1, seed=seed))
    certificates.append(consistency_vs_closed_form([2, 3], 2, seed=seed))
    certificates.extend(nongeneric_suite())

    certificates.extend(sobolev_suite(n_max))

    for k in (1, 2):
        certificates.append(reach_property_suite(k, seed=seed))
    certificates.append(lemma_property_suite(seed=seed))
    return certificates


def operator_suite(alpha: int, n_max: int) -> List[Certificate]:
    """
    For one step with beta0 = 1: the closed form and the linear reconstruction of every
    generator operator coincide and satisfy the eigen-equation, with orders 2 alpha + 2, ...,
    4 alpha + 2, and the operators commute.
    """
    spec = system_spec(alpha, 1, (1,))
    certificates = [product_operator_check(spec.tau, npoly(N + 1), npoly(N), alpha, n_max)]
    operators = []
    for member in k1_generators(alpha, Rational(1)):
        closed = bhat_closed_form_k1(member, spec)
        solved = bhat_linear_solve(member, spec)
        certificates.append(
            _fact(
                "closed_form_vs_linear_solve",
                isinstance(solved, EigenOperator) and solved.op == closed.op,
                "the reconstructions differ",
                alpha=alpha,
                eigenvalue=format_poly(member.h),
            )
        )
        certificates.extend(operator_certificates(closed, spec, _OPERATOR_VERIFY_N))
        operators.append(closed)
    orders = [operator.order for operator in operators]
    expected = list(range(2 * alpha + 2, 4 * alpha + 3, 2))
    certificates.append(
        _fact("generator_orders", orders == expected, f"orders {orders}, expected {expected}")
    )
    certificates.append(commutativity_check(operators))
    return certificates


def nongeneric_suite() -> List[Certificate]:
    """
    At alpha = 2, beta = (1/8, 0) the algebra has an eigenvalue of degree 4 with an operator of
    order 8, and the explicit h(n) = n^4 + 2n^3 + 5/2 n^2 + 3/2 n is outside the explicit algebra
    yet has its operator; at the generic point (1, 1) there is none below degree 5.
    """
    special = system_spec(2, 2, (Rational(1, 8), 0))
    on_curve = k2_genericity_equation(2, special.beta) == 0
    probe = abar_probe(special, 4)
    found = next((entry for entry in probe.degrees if entry.member_dim), None)
    generic = system_spec(2, 2, (1, 1))
    generic_probe = abar_probe(generic, 4)
    h = k2_nongeneric_eigenvalue(*special.beta)
    outside = not algebra_membership(h, special)
    operator = bhat_linear_solve(h, special, 8)
    return [
        _fact(
            "nongeneric_point",
            on_curve and admissible(special)[0] and not genericity_report(special).generic,
            "(1/8, 0) is not an admissible non-generic point",
        ),
        _fact(
            "nongeneric_operator",
            found is not None and found.degree == 4 and found.operator_order == 8,
            f"first eigenvalue {found}",
        ),
        _fact(
            "nongeneric_eigenvalue",
            outside and isinstance(operator, EigenOperator) and operator.order == 8,
            f"h(n) = {format_poly(h)}: outside the algebra {outside}, operator {operator}",
        ),
        _fact(
            "generic_probe",
            admissible(generic)[0] and generic_probe.minimal_degree is None,
            f"eigenvalue of degree {generic_probe.minimal_degree}",
        ),
    ]


@monitor_command(Command.SELFTEST)
def cmd_selftest(run: RunConfig) -> Report:
    """
    Run the whole acceptance suite.
    """
    certificates = selftest_certificates(_verify_n(run), run.seed)
    payload = SelftestReportSchema().dump(
        dict(passed=all(certificates), certificates=certificates)
    )
    return payload, _exit_code(certificates)


HANDLERS = {
    Command.CLASSICAL: cmd_classical,
    Command.SYSTEM: cmd_system,
    Command.OPERATOR: cmd_operator,
    Command.GENERICITY: cmd_genericity,
    Command.SOBOLEV: cmd_sobolev,
    Command.SELFTEST: cmd_selftest,
}
