from typing import Optional


class KrallLaguerreException(Exception):
    """
    Base exception of the package.
    Each subclass carries the process exit code the command line reports for it.
    """

    exit_code: int = 1


class InvalidParameterException(KrallLaguerreException):
    """
    Raised when an operation receives parameters outside its domain.
    """

    exit_code = 2


class UndefinedResultantException(InvalidParameterException):
    """
    Raised when a resultant is requested for a zero polynomial.
    """

    def __init__(self) -> None:
        super().__init__("undefined resultant")


class PhiUndefinedException(InvalidParameterException):
    """
    Raised when the Pochhammer symbol (1-alpha)_j vanishes.
    """

    def __init__(self, alpha: int, j: int) -> None:
        super().__init__(f"phi undefined: j ≥ α (alpha: {alpha}, j: {j}).")
        self.alpha = alpha
        self.j = j


class SymbolicUnsupportedException(InvalidParameterException):
    """
    Raised when symbolic parameters are requested for too many Darboux steps.
    """


class InadmissibleParametersException(KrallLaguerreException):
    """
    Raised when tau vanishes at some integer n >= -1.
    """

    exit_code = 3

    def __init__(self, witness: int) -> None:
        super().__init__(f"Inadmissible parameters: tau vanishes at n={witness}.")
        self.witness = witness


class UndeterminedParametersException(KrallLaguerreException):
    """
    Raised when the weight parameters cannot be solved for.
    """

    exit_code = 3

    def __init__(self) -> None:
        super().__init__("u-parameters not determined")


class NoOperatorException(KrallLaguerreException):
    """
    Raised by the command layer when no operator realizes the requested eigenvalue.
    """

    exit_code = 4

    def __init__(self, order: int, remainder: Optional[str] = None) -> None:
        super().__init__(f"not in 𝒜̄ at this order (order: {order}).")
        self.order = order
        self.remainder = remainder


class UnsupportedSingularMatrixException(KrallLaguerreException):
    """
    Raised for singular Sobolev matrices other than diag(0, v0).
    """

    exit_code = 5

    def __init__(self) -> None:
        super().__init__("no basis rule given")
