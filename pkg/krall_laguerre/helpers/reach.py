import logging
import random
from typing import Callable, List, Optional, Sequence, Tuple

from sympy import Poly, Rational

from krall_laguerre.core import config
from krall_laguerre.core.exceptions import InvalidParameterException
from krall_laguerre.helpers.certificates import certify, combine
from krall_laguerre.helpers.eigen import discrete_integral
from krall_laguerre.helpers.exact import casorati, poly_eval, random_npoly, rational_det
from krall_laguerre.models.certificate import Certificate

_LOGGER = logging.getLogger(__name__)

IndexedValues = Callable[[int], Rational]


def _casorati_values(sequences: Sequence[IndexedValues], n: int) -> Rational:
    size = len(sequences)
    return rational_det([[f(n - c) for c in range(size)] for f in sequences])


def reach_sequence(functions: Sequence[Poly], base_points: Sequence[int]) -> IndexedValues:
    """
    F_n = sum_{j=1}^{k+1} (-1)^(k+1+j) f^(j)_n
          int_{n_j}^{n} f^(0)_s Wr_s(f^(1), .., f^(j) omitted, .., f^(k+1)).

    :param functions: f^(0), ..., f^(k+1).
    :param base_points: n_1, ..., n_{k+1}.
    :return: the sequence n -> F_n.
    """
    f0, rest = functions[0], list(functions[1:])
    k = len(rest) - 1
    integrands = [f0 * casorati(rest[:j] + rest[j + 1 :]) for j in range(k + 1)]

    def _value(n: int) -> Rational:
        return sum(
            (
                (-1) ** (k + 1 + j) * poly_eval(rest[j - 1], n)
                * discrete_integral(integrands[j - 1], base_points[j - 1], n)
                for j in range(1, k + 2)
            ),
            Rational(0),
        )

    return _value


def reach_identity_check(
    functions: Sequence[Poly], base_points: Sequence[int], bounds: Tuple[int, int]
) -> Certificate:
    """
    Verify
    Wr_n(f^(1), ..., f^(k), F_n)
        = int_{n_{k+1}}^{n-1} f^(0) Wr_s(f^(1), ..., f^(k)) x Wr_n(f^(1), ..., f^(k+1))
    for n in the bounds. The check is repeated with the first k base points moved, which must not
    change the left-hand side, and with n_{k+1} moved, which must change it by a constant
    multiple of Wr_n(f^(1), ..., f^(k+1)).

    :param functions: f^(0), ..., f^(k+1), with k >= 1.
    :param base_points: n_1, ..., n_{k+1}.
    :param bounds: the inclusive window of n.
    :return: the certificate.
    """
    if len(functions) < 3 or len(base_points) != len(functions) - 1:
        raise InvalidParameterException("Expected k + 2 functions and k + 1 base points, k >= 1.")
    f0, rest = functions[0], list(functions[1:])
    k = len(rest) - 1
    head = [_as_sequence(f) for f in rest[:k]]
    weight = f0 * casorati(rest[:k])
    full = casorati(rest)

    moved_heads = [point + 2 for point in base_points[:k]] + [base_points[k]]
    moved_tail = list(base_points[:k]) + [base_points[k] - 3]
    lhs_sequences = {
        "base": reach_sequence(functions, base_points),
        "moved_heads": reach_sequence(functions, moved_heads),
        "moved_tail": reach_sequence(functions, moved_tail),
    }
    tail_constant = discrete_integral(weight, moved_tail[k], base_points[k])

    def _check(n: int):
        lhs = {
            name: _casorati_values(head + [sequence], n) for name, sequence in lhs_sequences.items()
        }
        rhs = discrete_integral(weight, base_points[k], n - 1) * poly_eval(full, n)
        if lhs["base"] != rhs:
            return f"identity: {lhs['base']} != {rhs}"
        if lhs["moved_heads"] != lhs["base"]:
            return "left-hand side depends on n_1..n_k"
        if lhs["moved_tail"] - lhs["base"] != tail_constant * poly_eval(full, n):
            return "moving n_(k+1) changed more than a multiple of the full Casorati"
        return None

    return certify("reach_identity", bounds, range(bounds[0], bounds[1] + 1), _check, k=k)


def _as_sequence(p: Poly) -> IndexedValues:
    return lambda n: poly_eval(p, n)


def reach_property_suite(
    k: int, trials: Optional[int] = None, seed: Optional[int] = None
) -> Certificate:
    """
    Run the identity on random polynomial families of degree <= 2 with random base points.
    """
    trials = config.PROPERTY_TRIALS if trials is None else trials
    rng = random.Random(config.DEFAULT_SEED if seed is None else seed)
    certificates: List[Certificate] = []
    for _ in range(trials):
        functions = [random_npoly(rng, rng.randint(0, 2)) for _ in range(k + 2)]
        base_points = [rng.randint(-3, 3) for _ in range(k + 1)]
        certificates.append(reach_identity_check(functions, base_points, (0, 6)))
    return combine("reach_property_suite", certificates, k=k, trials=trials)
