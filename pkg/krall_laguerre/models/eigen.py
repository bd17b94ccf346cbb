from dataclasses import dataclass
from typing import Optional, Tuple

from sympy import Poly

from krall_laguerre.helpers.diffop import DiffOp
from krall_laguerre.models.enums import Construction


@dataclass(frozen=True)
class EigenPoly:
    """
    An element h of the eigenvalue algebra, with the certified quotient
    g(n) = (h(n) - h(n-1)) / tau(n-1).
    """

    h: Poly
    g: Poly


@dataclass(frozen=True)
class NotMember:
    """
    A polynomial whose backward difference is not divisible by tau(n-1).
    """

    h: Poly
    remainder: Poly

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class EigenOperator:
    """
    A differential operator having the generalized polynomials as eigenfunctions, with
    eigenvalue h(n). `member` is set when h belongs to the eigenvalue algebra. The equations of
    `build_range` were imposed, those up to `solved_up_to` by elimination.
    """

    op: DiffOp
    eigenvalue: Poly
    construction: Construction
    member: Optional[EigenPoly] = None
    annihilator_dim: int = 0
    build_range: Tuple[int, int] = (0, 0)
    verified_range: Tuple[int, int] = (0, 0)
    solved_up_to: Optional[int] = None

    @property
    def order(self) -> int:
        return self.op.order


@dataclass(frozen=True)
class NoOperator:
    """
    The outcome of a reconstruction finding no operator up to the given order.
    """

    eigenvalue: Poly
    order_cap: int
    reason: str
    witness: Optional[int] = None

    def __bool__(self) -> bool:
        return False
