from typing import Any, Mapping, Optional

from marshmallow import ValidationError, fields
from sympy import Basic, Poly, Rational

from krall_laguerre.helpers.diffop import DiffOp
from krall_laguerre.helpers.exact import N, X, format_poly, npoly, xpoly
from krall_laguerre.models.validators import RationalStringValidator

_VARIABLES = {str(N): N, str(X): X}


def exact_value(value: Any) -> Any:
    """
    Convert exact values nested in lists, tuples and dicts to JSON-compatible ones:
    rationals and expressions as strings, polynomials in canonical text form.
    """
    if isinstance(value, Poly):
        return format_poly(value) if len(value.gens) == 1 else str(value.as_expr())
    if isinstance(value, DiffOp):
        return str(value)
    if isinstance(value, Basic):
        return str(value)
    if isinstance(value, Mapping):
        return {str(key): exact_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [exact_value(item) for item in value]
    return value


class RationalField(fields.Field):
    """
    A rational number, serialized as a "p/q" string.
    Integers are accepted on load; floats are rejected.
    """

    def _serialize(self, value: Optional[Rational], attr: str, obj: Any, **kwargs: Any) -> Any:
        if value is None:
            return None
        return str(Rational(value))

    def _deserialize(
        self, value: Any, attr: Optional[str], data: Optional[Mapping[str, Any]], **kwargs: Any
    ) -> Rational:
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            raise ValidationError("Rationals must be given as integers or p/q strings.")
        return Rational(RationalStringValidator()(str(value)))


class PolyField(fields.Field):
    """
    A univariate polynomial as {"variable": "n" | "x", "coefficients": [...]}, ascending degree.
    """

    def _serialize(self, value: Optional[Poly], attr: str, obj: Any, **kwargs: Any) -> Any:
        if value is None:
            return None
        coefficients = list(reversed(value.all_coeffs())) if not value.is_zero else []
        return dict(variable=str(value.gen), coefficients=[str(c) for c in coefficients])

    def _deserialize(
        self, value: Any, attr: Optional[str], data: Optional[Mapping[str, Any]], **kwargs: Any
    ) -> Poly:
        if not isinstance(value, Mapping):
            raise ValidationError("Polynomials must be objects.")
        if (variable := _VARIABLES.get(value.get("variable"))) is None:
            raise ValidationError('Polynomials need a "variable" among n and x.')
        validator = RationalStringValidator()
        coefficients = [Rational(validator(str(c))) for c in value.get("coefficients", [])]
        expr = sum((c * variable ** i for i, c in enumerate(coefficients)), Rational(0))
        return npoly(expr) if variable == N else xpoly(expr)


class ExactField(fields.Field):
    """
    Free-form data with exact values, dumped through `exact_value`.
    """

    def _serialize(self, value: Any, attr: str, obj: Any, **kwargs: Any) -> Any:
        return exact_value(value)

    def _deserialize(
        self, value: Any, attr: Optional[str], data: Optional[Mapping[str, Any]], **kwargs: Any
    ) -> Any:
        return value
