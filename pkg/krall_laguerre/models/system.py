from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

from sympy import Expr, Poly, Rational

from krall_laguerre.helpers.exact import casorati, npoly, parameters_of


@dataclass(frozen=True)
class JacobiRow:
    """
    Row n of a tridiagonal Jacobi matrix: c_n at column n-1, b_n at n, a_n at n+1.
    """

    n: int
    a: Rational
    b: Rational
    c: Rational


@dataclass(frozen=True)
class DarbouxSystem:
    """
    The data shared by every Casorati construction on top of the Laguerre polynomials of
    parameter alpha: a list of kernel polynomials psi^(0), ..., psi^(k-1) in n.
    """

    alpha: int
    psis: Tuple[Poly, ...]

    @property
    def k(self) -> int:
        return len(self.psis)

    @property
    def params(self):
        """
        :return: the symbolic parameters in the kernel polynomials (empty for concrete values).
        """
        return tuple(parameters_of(*self.psis)) if self.psis else ()

    @cached_property
    def tau(self) -> Poly:
        """
        tau(n) = Wr_n(psi^(0), ..., psi^(k-1)), the constant 1 when k = 0.
        """
        return casorati(self.psis)

    @cached_property
    def rho(self) -> Poly:
        """
        The Casorati determinant on the rows n, n-2, n-3, ..., n-k (rho = psi^(0) for k = 1).
        """
        if not self.psis:
            return npoly(0)
        return casorati(self.psis, [0] + list(range(2, self.k + 1)))

    @cached_property
    def cofactors(self) -> Tuple[Poly, ...]:
        """
        The Q-row polynomials q_j(n) = q_{n,n-j}, j = 0..k, so that
        Wr_n(psi^(0), ..., psi^(k-1), f_n) = sum_j q_j(n) f_{n-j}.
        """
        k = self.k
        columns = list(range(k + 1))
        return tuple(
            casorati(self.psis, columns[:j] + columns[j + 1 :]) * (-1) ** (k + j)
            for j in columns
        )


@dataclass(frozen=True)
class SystemSpec(DarbouxSystem):
    """
    The system built by k Darboux steps from J^(alpha), with parameters beta_0..beta_{k-1}.
    Entries of beta are rationals, or symbols for symbolic runs.
    """

    beta: Tuple[Expr, ...] = ()


@dataclass(frozen=True)
class MomentFunctional:
    """
    M(f) = 1/(alpha_eff)! sum_m f_m (m + alpha_eff)! + sum_j u_j f^(j)(0).
    """

    alpha_eff: int
    u: Tuple[Rational, ...]
