from dataclasses import dataclass
from typing import Optional, Tuple, Union

from sympy import Poly, Rational

from krall_laguerre.models.system import DarbouxSystem


@dataclass(frozen=True)
class GenericityReport:
    """
    The resultant of tau(n) and L^_n(0) for a system; the parameters are generic iff it is nonzero.
    For symbolic parameters the resultant is a polynomial and `generic` means it is not
    identically zero.
    """

    system: DarbouxSystem
    resultant_value: Union[Rational, Poly]
    generic: bool
    closed_form_match: Optional[bool] = None


@dataclass(frozen=True)
class ProbeDegree:
    """
    The outcome of the search for eigenvalues of one degree.
    `member_dim` counts the eigenvalues h of degree <= `degree` with h(0) = 0.
    """

    degree: int
    candidate_dim: int
    member_dim: int
    probed: bool
    example: Optional[Poly] = None
    outside_algebra: bool = False
    operator_order: Optional[int] = None


@dataclass(frozen=True)
class ProbeReport:
    max_deg: int
    divisor: Poly
    degrees: Tuple[ProbeDegree, ...]
    verified_up_to: int = 0

    @property
    def minimal_degree(self) -> Optional[int]:
        return next((entry.degree for entry in self.degrees if entry.member_dim), None)

    @property
    def algebra_extended(self) -> bool:
        """
        :return: whether some eigenvalue found is outside the explicit algebra.
        """
        return any(entry.outside_algebra for entry in self.degrees)
