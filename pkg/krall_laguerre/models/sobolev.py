from dataclasses import dataclass
from typing import Optional, Tuple

from sympy import Rational

from krall_laguerre.models.system import DarbouxSystem


@dataclass(frozen=True)
class SobolevSpec(DarbouxSystem):
    """
    A two-step system on top of J^(alpha) with the kernel polynomials
    psi^(0) = beta0 + l0 (n+1)/(alpha-1) + binom(n+alpha, alpha) and
    psi^(1) = beta1 + l1 (n+1)/(alpha-1) - binom(n+alpha+1, alpha+1).
    `v0` is set instead for the singular matrix diag(0, v0), which uses its own basis.
    """

    beta0: Rational = Rational(0)
    beta1: Rational = Rational(0)
    l0: Rational = Rational(0)
    l1: Rational = Rational(0)
    v0: Optional[Rational] = None

    @property
    def singular(self) -> bool:
        return self.v0 is not None


@dataclass(frozen=True)
class SobolevInnerProduct:
    """
    <F, G> = 1/(alpha-2)! int F G x^(alpha-2) e^(-x) dx + [F(0), F'(0)] A [G(0), G'(0)]^T
    with A = [[u0, u1], [u1, v0]].
    """

    alpha: int
    u0: Rational
    u1: Rational
    v0: Rational

    @property
    def matrix(self) -> Tuple[Tuple[Rational, Rational], Tuple[Rational, Rational]]:
        return (self.u0, self.u1), (self.u1, self.v0)

    @property
    def det(self) -> Rational:
        return self.u0 * self.v0 - self.u1 ** 2
