import logging
import random
from dataclasses import dataclass
from functools import reduce
from typing import List, Sequence, Tuple, Union

from sympy import Expr, Poly, QQ, Rational, S, Symbol
from sympy.polys.matrices import DomainMatrix
from sympy.polys.subresultants_qq_zz import sylvester

from krall_laguerre.core.exceptions import InvalidParameterException, UndefinedResultantException

_LOGGER = logging.getLogger(__name__)

# The discrete index and the continuous variable.
N = Symbol("n")
X = Symbol("x")

_COFACTOR_MAX_SIZE = 4

Scalar = Union[Rational, Expr]


def npoly(expr: Union[Expr, int], params: Sequence[Symbol] = ()) -> Poly:
    """
    Build a polynomial in n, over QQ or over QQ[params] when symbolic parameters are involved.

    :param expr: the expression to convert.
    :param params: the symbolic parameters allowed in the coefficients.
    :return: the polynomial in n.
    """
    domain = QQ[tuple(params)] if params else QQ
    return Poly(expr, N, domain=domain)


def xpoly(expr: Union[Expr, int]) -> Poly:
    return Poly(expr, X, domain=QQ)


def coefficients(p: Poly) -> List[Scalar]:
    """
    :param p: a univariate polynomial.
    :return: its coefficients in ascending degree (the zero polynomial gives an empty list).
    """
    if p.is_zero:
        return []
    return list(reversed(p.all_coeffs()))


def coefficient(p: Poly, power: int) -> Scalar:
    return p.nth(power) if power >= 0 else S.Zero


def poly_eval(p: Poly, value: Scalar) -> Scalar:
    """
    Evaluate exactly with Horner's scheme.

    :param p: the polynomial to evaluate.
    :param value: the point.
    :return: p(value).
    """
    return p.eval(value)


def shifted(p: Poly, offset: int) -> Poly:
    """
    :return: the polynomial n -> p(n + offset).
    """
    return p.shift(offset) if offset else p


def _unified_domain(entries: Sequence[Poly]):
    return reduce(lambda left, right: left.unify(right), (entry.domain for entry in entries))


def _cofactor_det(rows: List[List[Poly]]) -> Poly:
    if len(rows) == 1:
        return rows[0][0]
    total = rows[0][0].mul_ground(0)
    for j, entry in enumerate(rows[0]):
        if entry.is_zero:
            continue
        minor = [row[:j] + row[j + 1 :] for row in rows[1:]]
        term = entry * _cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _fraction_free_det(rows: List[List[Poly]]) -> Poly:
    size = len(rows)
    flat = [entry for row in rows for entry in row]
    gen = flat[0].gen
    matrix = DomainMatrix.from_list_sympy(size, size, [[e.as_expr() for e in row] for row in rows])
    value = matrix.domain.to_sympy(matrix.det())
    return Poly(value, gen, domain=_unified_domain(flat))


def poly_det(matrix: Sequence[Sequence[Poly]]) -> Poly:
    """
    Determinant of a square matrix of polynomials in the same variable.
    Small matrices are expanded by cofactors, larger ones are eliminated fraction-free
    over the polynomial ring.

    :param matrix: the rows of the matrix.
    :return: the determinant, in canonical form.
    :raises: InvalidParameterException if the matrix is not square or is empty.
    """
    rows = [list(row) for row in matrix]
    size = len(rows)
    if size == 0:
        raise InvalidParameterException("Cannot take the determinant of an empty matrix.")
    if any(len(row) != size for row in rows):
        raise InvalidParameterException("The determinant needs a square matrix.")
    if size <= _COFACTOR_MAX_SIZE:
        return _cofactor_det(rows)
    return _fraction_free_det(rows)


def casorati(functions: Sequence[Poly], shifts: Sequence[int] = ()) -> Poly:
    """
    The Casorati determinant det(f^(i)(n - s_j)), one row per function and one column per
    shift. The default shifts 0, 1, ..., m-1 give Wr_n(f^(1), ..., f^(m)).

    :param functions: polynomials in n, evaluated by polynomial extension at every index.
    :param shifts: the downward shifts of the columns.
    :return: the determinant as a polynomial in n (the constant 1 for no functions).
    """
    if not functions:
        return npoly(1)
    shifts = list(shifts) or list(range(len(functions)))
    return poly_det([[shifted(f, -s) for s in shifts] for f in functions])


def parameters_of(*polys: Poly) -> List[Symbol]:
    """
    :return: the symbolic parameters in the coefficients of the given polynomials, sorted by name.
    """
    symbols = set()
    for p in polys:
        symbols |= p.free_symbols
    return sorted(symbols - {N, X}, key=str)


def resultant(p: Poly, q: Poly) -> Union[Rational, Poly]:
    """
    Determinant of the Sylvester matrix of p and q, rows of p first, so that
    Res(p, q) = lc(p)^deg(q) * prod(q(r) for the roots r of p).

    :param p: the first polynomial.
    :param q: the second polynomial.
    :return: a rational, or a polynomial in the parameters when the coefficients are symbolic.
    :raises: UndefinedResultantException if p or q is the zero polynomial.
    """
    if p.is_zero or q.is_zero:
        raise UndefinedResultantException()
    gen = p.gen
    matrix = sylvester(p.as_expr(), q.as_expr(), gen, method=1)
    if matrix.shape == (0, 0):
        value = S.One
    else:
        rows, cols = matrix.shape
        dm = DomainMatrix.from_list_sympy(rows, cols, matrix.tolist())
        value = dm.domain.to_sympy(dm.det())
    if params := parameters_of(p, q):
        return Poly(value, *params, domain=QQ)
    return Rational(value)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """
    Monic gcd over QQ[n], read off the last subresultant.

    :return: the monic gcd (the zero polynomial only when both inputs vanish).
    """
    if p.is_zero:
        return q if q.is_zero else q.monic()
    if q.is_zero:
        return p.monic()
    if p.degree() < q.degree():
        p, q = q, p
    return p.subresultants(q)[-1].monic()


def format_poly(p: Poly) -> str:
    """
    Canonical text form, e.g. "3/2*n^2 - 1".
    """
    if p.is_zero:
        return "0"
    var = str(p.gen)
    text = ""
    for index, ((power,), coeff) in enumerate(p.terms()):
        monomial = "" if power == 0 else var if power == 1 else f"{var}^{power}"
        if coeff.is_Rational:
            negative, magnitude = coeff < 0, abs(coeff)
            scale = "" if magnitude == 1 and power else str(magnitude)
        else:
            negative, scale = False, f"({coeff})"
        body = "*".join(part for part in (scale, monomial) if part)
        if index == 0:
            text = f"-{body}" if negative else body
        else:
            text += f" - {body}" if negative else f" + {body}"
    return text


def random_rational(rng: random.Random, height: int = 5) -> Rational:
    return Rational(rng.randint(-height, height), rng.randint(1, height))


def random_npoly(rng: random.Random, degree: int, height: int = 5) -> Poly:
    """
    :return: a random polynomial in n of exactly the given degree, with small rational coefficients.
    """
    coeffs = [random_rational(rng, height) for _ in range(degree)]
    leading = S.Zero
    while leading == 0:
        leading = random_rational(rng, height)
    return npoly(sum(c * N ** i for i, c in enumerate(coeffs + [leading])))


@dataclass(frozen=True)
class LinSystem:
    """
    An exact linear system matrix * v = rhs over QQ.
    """

    matrix: Tuple[Tuple[Rational, ...], ...]
    rhs: Tuple[Rational, ...]

    def __post_init__(self) -> None:
        if len(self.matrix) != len(self.rhs):
            raise InvalidParameterException("Rows of the matrix and the right-hand side differ.")
        if len({len(row) for row in self.matrix}) > 1:
            raise InvalidParameterException("Rows of the matrix have different lengths.")

    @property
    def n_unknowns(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0


@dataclass(frozen=True)
class Unique:
    vector: Tuple[Rational, ...]


@dataclass(frozen=True)
class Affine:
    dim: int
    particular: Tuple[Rational, ...]


@dataclass(frozen=True)
class Infeasible:
    pass


Solution = Union[Unique, Affine, Infeasible]


def _domain_matrix(rows: Sequence[Sequence[Rational]], n_cols: int) -> DomainMatrix:
    return DomainMatrix(
        [[QQ.from_sympy(S(entry)) for entry in row] for row in rows], (len(rows), n_cols), QQ
    )


def rational_det(rows: Sequence[Sequence[Rational]]) -> Rational:
    """
    :return: the determinant of a square matrix of rationals (1 for the empty matrix).
    """
    if not rows:
        return S.One
    return QQ.to_sympy(_domain_matrix(rows, len(rows)).det())


def linsolve(system: LinSystem) -> Solution:
    """
    Solve exactly by Gauss-Jordan elimination over QQ.

    :param system: the linear system.
    :return: Unique with the solution, Affine with the dimension of the solution set and a
      particular solution (free unknowns set to zero), or Infeasible.
    """
    n_unknowns = system.n_unknowns
    if not system.matrix:
        return Unique(()) if n_unknowns == 0 else Affine(n_unknowns, (S.Zero,) * n_unknowns)
    augmented = [list(row) + [rhs] for row, rhs in zip(system.matrix, system.rhs)]
    reduced, pivots = _domain_matrix(augmented, n_unknowns + 1).rref()
    if n_unknowns in pivots:
        return Infeasible()
    rows = reduced.to_list()
    particular = [S.Zero] * n_unknowns
    for row_index, pivot in enumerate(pivots):
        particular[pivot] = QQ.to_sympy(rows[row_index][n_unknowns])
    if len(pivots) == n_unknowns:
        return Unique(tuple(particular))
    return Affine(dim=n_unknowns - len(pivots), particular=tuple(particular))


def nullspace(rows: Sequence[Sequence[Rational]], n_cols: int) -> List[List[Rational]]:
    """
    :return: a basis of the right kernel of the matrix, one vector per entry.
    """
    if not rows:
        return [[S.One if i == j else S.Zero for i in range(n_cols)] for j in range(n_cols)]
    basis = _domain_matrix(rows, n_cols).nullspace()
    return [[QQ.to_sympy(entry) for entry in vector] for vector in basis.to_list()]
