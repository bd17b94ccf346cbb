import logging
import re
from typing import Any, Mapping, Sequence

from marshmallow import ValidationError
from marshmallow.validate import Validator
from sympy import Rational

_LOGGER = logging.getLogger(__name__)

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class RationalStringValidator(Validator):
    """
    A validator for rationals written as "p" or "p/q".
    """

    def __call__(self, value: str) -> str:
        """
        :param value: the string to validate.
        :raises ValidationError: for floats, malformed strings and zero denominators.
        :return: the stripped string.
        """
        value = value.strip()
        if not _RATIONAL.match(value):
            raise ValidationError(f"Not a rational of the form p/q (value: {value}).")
        if "/" in value and int(value.split("/")[1]) == 0:
            raise ValidationError(f"Zero denominator (value: {value}).")
        return value


class DarbouxParametersValidator(Validator):
    """
    A validator for (alpha, k, beta): 0 <= k <= alpha, one beta (or weight u) per step, and an
    integer alpha as soon as there is a step. Without steps alpha > -1 is enough.
    """

    def __call__(self, data: Mapping[str, Any]) -> Mapping[str, Any]:
        alpha, k = Rational(data["alpha"]), data.get("k", 0)
        beta: Sequence[Any] = data.get("beta") or data.get("u") or ()
        if k < 0:
            raise ValidationError(f"The number of steps must be non-negative (k: {k}).")
        if k == 0 and alpha <= -1:
            raise ValidationError(f"alpha must be greater than -1 (alpha: {alpha}).")
        if k and (not alpha.is_integer or alpha < k):
            raise ValidationError(
                f"Darboux steps need an integer alpha >= k (alpha: {alpha}, k: {k})."
            )
        if len(beta) != k:
            raise ValidationError(f"Expected {k} beta values (actual: {len(beta)}).")
        return data


class SobolevMatrixValidator(Validator):
    """
    A validator for the entries u0, u1, v0 of the symmetric matrix [[u0, u1], [u1, v0]].
    """

    def __call__(self, entries: Sequence[Rational]) -> Sequence[Rational]:
        if len(entries) != 3:
            raise ValidationError(
                f"The matrix takes exactly three entries u0,u1,v0 (actual: {len(entries)})."
            )
        _LOGGER.info("Sobolev matrix validated.", extra=dict(entries=[str(e) for e in entries]))
        return entries
