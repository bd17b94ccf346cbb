from enum import Enum

NAMESPACE = "krall_laguerre"


class Subsystem(Enum):
    """
    Enumeration of the metric subsystems.
    """

    CLI = "cli"
    CERTIFICATES = "certificates"
    OPERATORS = "operators"


class Construction(Enum):
    """
    How an eigen-operator was obtained.
    """

    CLOSED_FORM_K1 = "closed_form_k1"
    PRODUCT_ASSEMBLY = "product_assembly"
    LINEAR_SOLVE = "linear_solve"


class OutputFormat(Enum):
    JSON = "json"
    TEXT = "text"


class Command(Enum):
    """
    Enumeration of the command line subcommands.
    """

    CLASSICAL = "classical"
    SYSTEM = "system"
    OPERATOR = "operator"
    GENERICITY = "genericity"
    SOBOLEV = "sobolev"
    SELFTEST = "selftest"
