import logging
from dataclasses import dataclass
from math import comb
from typing import Dict, Iterator, Mapping, Tuple, Union

from sympy import Poly, Rational, oo

from krall_laguerre.helpers.exact import X, format_poly, xpoly

_LOGGER = logging.getLogger(__name__)


def derivative(p: Poly, times: int = 1) -> Poly:
    return p.diff((X, times)) if times else p


@dataclass(frozen=True)
class DiffOp:
    """
    A differential operator sum_j b_j(x) (d/dx)^j, kept in coefficient-times-derivative normal
    form: one entry per order, sorted, with no zero coefficient.
    """

    terms: Tuple[Tuple[int, Poly], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, Poly]) -> "DiffOp":
        return cls(
            tuple(sorted((order, coeff) for order, coeff in mapping.items() if not coeff.is_zero))
        )

    @classmethod
    def multiplication(cls, p: Union[Poly, int, Rational]) -> "DiffOp":
        """
        :return: the order-zero operator multiplying by p.
        """
        return cls.from_mapping({0: p if isinstance(p, Poly) else xpoly(p)})

    @property
    def order(self):
        """
        :return: the highest order with a nonzero coefficient, -oo for the zero operator.
        """
        return self.terms[-1][0] if self.terms else -oo

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, order: int) -> Poly:
        return dict(self.terms).get(order, xpoly(0))

    def items(self) -> Iterator[Tuple[int, Poly]]:
        return iter(self.terms)

    def scale(self, factor: Union[int, Rational]) -> "DiffOp":
        return DiffOp.from_mapping({j: coeff.mul_ground(factor) for j, coeff in self.terms})

    def __add__(self, other: "DiffOp") -> "DiffOp":
        result: Dict[int, Poly] = dict(self.terms)
        for order, coeff in other.terms:
            result[order] = result[order] + coeff if order in result else coeff
        return DiffOp.from_mapping(result)

    def __neg__(self) -> "DiffOp":
        return self.scale(-1)

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def __mul__(self, other: "DiffOp") -> "DiffOp":
        return diffop_compose(self, other)

    def __str__(self) -> str:
        return format_diffop(self)


def format_diffop(op: DiffOp) -> str:
    """
    Canonical text form, e.g. "(x^2-1)*D^2 + 3*D^0", highest order first.
    """
    if op.is_zero:
        return "0"
    parts = []
    for order, coeff in reversed(op.terms):
        text = format_poly(coeff)
        if len(coeff.terms()) > 1:
            text = "(" + text.replace(" ", "") + ")"
        parts.append(f"{text}*D^{order}")
    return " + ".join(parts)


def diffop_compose(a: DiffOp, b: DiffOp) -> DiffOp:
    """
    The composition a∘b, by the Leibniz rule
    a_i D^i b_j D^j = sum_l binom(i, l) a_i b_j^(l) D^(i - l + j).

    :return: the composition in normal form.
    """
    result: Dict[int, Poly] = {}
    for i, a_i in a.terms:
        for j, b_j in b.terms:
            current = b_j
            for l in range(i + 1):
                if current.is_zero:
                    break
                term = (a_i * current).mul_ground(comb(i, l))
                key = i - l + j
                result[key] = result[key] + term if key in result else term
                current = current.diff(X)
    return DiffOp.from_mapping(result)


def diffop_apply(op: DiffOp, f: Poly) -> Poly:
    """
    :return: sum_j b_j(x) f^(j)(x).
    """
    total = f.mul_ground(0)
    for order, coeff in op.terms:
        total += coeff * derivative(f, order)
    return total


def identity() -> DiffOp:
    return DiffOp.multiplication(1)


def d_dx() -> DiffOp:
    """
    The generator D1 = d/dx.
    """
    return DiffOp.from_mapping({1: xpoly(1)})


def weyl_d2() -> DiffOp:
    """
    The generator D2 = x d²/dx² - x d/dx.
    """
    return DiffOp.from_mapping({2: xpoly(X), 1: xpoly(-X)})


def laguerre_operator(alpha: Union[int, Rational]) -> DiffOp:
    """
    B = -x d²/dx² - (alpha + 1 - x) d/dx, with B L_n = n L_n.
    Equivalently B = -D2 - (alpha + 1) D1.

    :param alpha: the Laguerre parameter.
    :return: the second order Laguerre operator.
    """
    return DiffOp.from_mapping({2: xpoly(-X), 1: xpoly(X - alpha - 1)})


def op_substitute(h: Poly, base: DiffOp, shift: int = 0) -> DiffOp:
    """
    Evaluate a polynomial at an operator, h(base + shift), by Horner's scheme with composition.

    :param h: the polynomial in n.
    :param base: the operator substituted for n.
    :param shift: the constant added to the operator argument.
    :return: the resulting operator.
    """
    if shift:
        h = h.shift(shift)
    result = DiffOp()
    for coeff in h.all_coeffs():
        result = diffop_compose(result, base) + DiffOp.multiplication(Rational(coeff))
    return result
