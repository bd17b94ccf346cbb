from typing import Any, Dict

from marshmallow import Schema, ValidationError, fields, post_load, validates_schema
from marshmallow.validate import OneOf, Range
from sympy import Rational

from krall_laguerre.helpers.diffop import DiffOp
from krall_laguerre.models.enums import Command, OutputFormat
from krall_laguerre.models.fields import ExactField, PolyField, RationalField
from krall_laguerre.models.run_config import RunConfig
from krall_laguerre.models.validators import DarbouxParametersValidator, SobolevMatrixValidator

_DARBOUX_COMMANDS = (Command.SYSTEM.value, Command.OPERATOR.value, Command.GENERICITY.value)


class CertificateSchema(Schema):
    claim = fields.Str()
    range = fields.List(fields.Int())
    passed = fields.Bool(data_key="pass")
    witness = ExactField(allow_none=True)
    details = ExactField()


class JacobiRowSchema(Schema):
    n = fields.Int()
    a = RationalField()
    b = RationalField()
    c = RationalField()


class DiffOpSchema(Schema):
    """
    A differential operator as its order, its canonical text and the coefficient of each
    power of d/dx.
    """

    order = fields.Method("_order")
    text = fields.Function(lambda operator: str(operator))
    coefficients = fields.Method("_coefficients")

    @staticmethod
    def _order(op: DiffOp) -> Any:
        return op.order if not op.is_zero else None

    @staticmethod
    def _coefficients(op: DiffOp) -> Dict[str, Any]:
        poly_field = PolyField()
        return {
            str(order): poly_field.serialize("c", dict(c=coeff)) for order, coeff in op.items()
        }


class EigenOperatorSchema(Schema):
    eigenvalue = PolyField()
    order = fields.Int()
    construction = fields.Function(lambda operator: operator.construction.value)
    op = fields.Nested(DiffOpSchema, data_key="operator")
    annihilator_dim = fields.Int()
    build_range = fields.List(fields.Int())
    verified_range = fields.List(fields.Int())
    solved_up_to = fields.Int(allow_none=True)


class NoOperatorSchema(Schema):
    eigenvalue = PolyField()
    order_cap = fields.Int()
    reason = fields.Str()
    witness = fields.Int(allow_none=True)


class ClassicalReportSchema(Schema):
    alpha = RationalField()
    certificates = fields.List(fields.Nested(CertificateSchema))


class SystemReportSchema(Schema):
    alpha = RationalField()
    k = fields.Int()
    beta = fields.List(RationalField())
    tau = PolyField()
    tau_minus_one = RationalField()
    admissible = fields.Bool()
    witness = fields.Int(allow_none=True)
    u = fields.List(RationalField(), allow_none=True)
    jacobi = fields.List(fields.Nested(JacobiRowSchema))
    certificates = fields.List(fields.Nested(CertificateSchema))


class OperatorReportSchema(Schema):
    alpha = RationalField()
    k = fields.Int()
    beta = fields.List(RationalField())
    eigenvalue = PolyField()
    member = fields.Bool()
    operator = fields.Nested(EigenOperatorSchema, allow_none=True)
    no_operator = fields.Nested(NoOperatorSchema, allow_none=True)
    certificates = fields.List(fields.Nested(CertificateSchema))


class ProbeDegreeSchema(Schema):
    degree = fields.Int()
    candidate_dim = fields.Int()
    member_dim = fields.Int()
    probed = fields.Bool()
    example = PolyField(allow_none=True)
    outside_algebra = fields.Bool()
    operator_order = fields.Int(allow_none=True)


class ProbeReportSchema(Schema):
    max_deg = fields.Int()
    divisor = PolyField()
    degrees = fields.List(fields.Nested(ProbeDegreeSchema))
    verified_up_to = fields.Int()
    minimal_degree = fields.Int(allow_none=True)
    algebra_extended = fields.Bool()


class GenericityReportSchema(Schema):
    alpha = RationalField()
    k = fields.Int()
    beta = ExactField()
    resultant = ExactField()
    generic = fields.Bool()
    closed_form_match = fields.Bool(allow_none=True)
    summary = fields.Str()
    probe = fields.Nested(ProbeReportSchema, allow_none=True)
    certificates = fields.List(fields.Nested(CertificateSchema))


class SobolevReportSchema(Schema):
    alpha = fields.Int()
    matrix = fields.List(fields.List(RationalField()))
    singular = fields.Bool()
    beta0 = RationalField()
    beta1 = RationalField()
    l0 = RationalField()
    l1 = RationalField()
    v0 = RationalField(allow_none=True)
    tau = PolyField()
    algebra_order = fields.Int()
    min_order = fields.Int(allow_none=True)
    moment_functional = fields.Bool()
    probe = fields.Nested(ProbeReportSchema, allow_none=True)
    certificates = fields.List(fields.Nested(CertificateSchema))


class SelftestReportSchema(Schema):
    passed = fields.Bool(data_key="pass")
    certificates = fields.List(fields.Nested(CertificateSchema))


class RunConfigSchema(Schema):
    """
    Load and validate the parsed command line into a RunConfig.
    """

    command = fields.Str(required=True, validate=OneOf([command.value for command in Command]))
    alpha = RationalField(load_default=Rational(0))
    k = fields.Int(load_default=0, validate=Range(min=0))
    beta = fields.List(RationalField(), load_default=list)
    u = fields.List(RationalField(), load_default=list)
    symbolic = fields.Bool(load_default=False)
    verify_n = fields.Int(allow_none=True, load_default=None, validate=Range(min=0))
    output_format = fields.Str(
        load_default=OutputFormat.JSON.value,
        validate=OneOf([output_format.value for output_format in OutputFormat]),
    )
    seed = fields.Int(allow_none=True, load_default=None)
    generator = fields.Int(allow_none=True, load_default=None, validate=Range(min=0))
    eigenvalue = fields.List(RationalField(), load_default=list)
    order_cap = fields.Int(allow_none=True, load_default=None, validate=Range(min=0))
    probe = fields.Bool(load_default=False)
    max_deg = fields.Int(allow_none=True, load_default=None, validate=Range(min=0))
    matrix = fields.List(RationalField(), load_default=list, validate=SobolevMatrixValidator())
    output = fields.Str(allow_none=True, load_default=None)
    metrics_file = fields.Str(allow_none=True, load_default=None)

    @validates_schema
    def _validate_command(self, data: Dict[str, Any], **kwargs: Any) -> None:
        command, k = data["command"], data.get("k", 0)
        if data.get("beta") and data.get("u"):
            raise ValidationError("Give either beta or u, not both.")
        if data.get("u") and k not in (1, 2):
            raise ValidationError(f"Weights can be given only for k = 1, 2 (k: {k}).")
        if data.get("symbolic"):
            if command != Command.GENERICITY.value:
                raise ValidationError("Symbolic parameters are available for genericity only.")
            if data.get("beta") or data.get("u"):
                raise ValidationError("Symbolic runs take no beta.")
            DarbouxParametersValidator()(dict(data, beta=[None] * k))
        elif command in _DARBOUX_COMMANDS:
            DarbouxParametersValidator()(data)
        elif command == Command.CLASSICAL.value:
            DarbouxParametersValidator()(dict(data, k=0, beta=[], u=[]))
        if command == Command.OPERATOR.value and (
            (data.get("generator") is None) == (not data.get("eigenvalue"))
        ):
            raise ValidationError("Give exactly one of a generator index and an eigenvalue.")
        if command == Command.SOBOLEV.value:
            if not data.get("matrix"):
                raise ValidationError("The sobolev command needs the matrix entries u0,u1,v0.")
            if not data["alpha"].is_integer or data["alpha"] < 2:
                raise ValidationError(
                    f"Sobolev runs need an integer alpha >= 2 (alpha: {data['alpha']})."
                )

    @post_load
    def _make_run_config(self, data: Dict[str, Any], **kwargs: Any) -> RunConfig:
        return RunConfig(
            **dict(
                data,
                command=Command(data["command"]),
                output_format=OutputFormat(data["output_format"]),
                beta=tuple(data["beta"]),
                u=tuple(data["u"]),
                eigenvalue=tuple(data["eigenvalue"]),
                matrix=tuple(data["matrix"]),
            )
        )
