"""Exact rational linear algebra.

Vectors are tuples of ``fractions.Fraction`` (canonical ``p/q`` with a positive
denominator after every operation), matrices are sequences of such row
vectors. Nothing in this module touches floating point.
"""
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

from src.geometry.exceptions import InputError

Vector = tuple[Fraction, ...]
Matrix = Sequence[Vector]


def to_rational(value: object) -> Fraction:
    """Convert an integer, a Fraction or a ``"p/q"`` string to a Fraction.

    Floats are refused: a binary float is almost never the rational the
    caller had in mind.

    Raises:
        InputError: If the value is not an exact rational.
    """
    if isinstance(value, bool):
        raise InputError(f"Not a rational number: {value!r}")
    if isinstance(value, _RationalABC):
        return Fraction(value)  # type: ignore[arg-type]
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise InputError(f"Not an exact rational: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"Not a rational number: {value!r}") from e
    raise InputError(f"Not a rational number: {value!r}")


def to_vector(coords: Iterable[object]) -> Vector:
    return tuple(to_rational(c) for c in coords)


def zero_vector(d: int) -> Vector:
    return (Fraction(0),) * d


def unit_vector(i: int, d: int) -> Vector:
    """Return e_{i+1} in R^d (``i`` is 0-based)."""
    return tuple(Fraction(1 if j == i else 0) for j in range(d))


def is_zero(v: Vector) -> bool:
    return all(c == 0 for c in v)


def add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def neg(v: Vector) -> Vector:
    return tuple(-a for a in v)


def scale(c: Fraction, v: Vector) -> Vector:
    return tuple(c * a for a in v)


def dot(u: Vector, v: Vector) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def linear_combination(
    coefficients: Sequence[Fraction], vectors: Sequence[Vector], d: int
) -> Vector:
    result = [Fraction(0)] * d
    for c, v in zip(coefficients, vectors):
        if c == 0:
            continue
        for j in range(d):
            result[j] += c * v[j]
    return tuple(result)


def transpose(rows: Matrix, ncols: int) -> list[Vector]:
    return [tuple(row[j] for row in rows) for j in range(ncols)]


def rref(rows: Matrix, ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals.

    Returns:
        The nonzero rows of the reduced matrix and the list of pivot columns.
    """
    m = [list(row) for row in rows]
    pivots: list[int] = []
    piv_r = 0
    for piv_c in range(ncols):
        if piv_r == len(m):
            break
        for i_row in range(piv_r, len(m)):
            if m[i_row][piv_c] != 0:
                break
        else:
            continue
        m[piv_r], m[i_row] = m[i_row], m[piv_r]
        fp = m[piv_r][piv_c]
        if fp != 1:
            m[piv_r] = [x / fp for x in m[piv_r]]
        for r in range(len(m)):
            if r == piv_r:
                continue
            fr = m[r][piv_c]
            if fr == 0:
                continue
            pivot_row = m[piv_r]
            m[r] = [a - fr * b for a, b in zip(m[r], pivot_row)]
        pivots.append(piv_c)
        piv_r += 1
    return m[:piv_r], pivots


def rank(rows: Matrix) -> int:
    """Rank of a rectangular rational matrix; the empty matrix has rank 0."""
    if not rows:
        return 0
    _, pivots = rref(rows, len(rows[0]))
    return len(pivots)


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of R^d kept as the reduced row echelon basis.

    The canonical basis makes equal subspaces compare equal.

    Attributes:
        basis: Linearly independent vectors in reduced row echelon form
        ambient_dim: Dimension d of the ambient space
    """

    basis: tuple[Vector, ...]
    ambient_dim: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def zero(cls, d: int) -> "Subspace":
        return cls((), d)

    @classmethod
    def full(cls, d: int) -> "Subspace":
        return cls(tuple(unit_vector(i, d) for i in range(d)), d)

    def contains(self, v: Vector) -> bool:
        if is_zero(v):
            return True
        return rank(list(self.basis) + [v]) == self.dim



def span(vectors: Iterable[Vector], ambient_dim: int) -> Subspace:
    """Linear hull of the vectors as a canonical Subspace."""
    rows = [v for v in vectors if not is_zero(v)]
    if not rows:
        return Subspace.zero(ambient_dim)
    reduced, _ = rref(rows, ambient_dim)
    return Subspace(tuple(tuple(r) for r in reduced), ambient_dim)


def kernel_basis(rows: Matrix, ambient_dim: int) -> Subspace:
    """Basis of {x : Mx = 0} for the matrix with the given rows.

    The returned basis satisfies Mx = 0 exactly and has d - rank(M) vectors.
    """
    if not rows:
        return Subspace.full(ambient_dim)
    reduced, pivots = rref(rows, ambient_dim)
    pivot_set = set(pivots)
    vectors = []
    for free in range(ambient_dim):
        if free in pivot_set:
            continue
        x = [Fraction(0)] * ambient_dim
        x[free] = Fraction(1)
        for row, p in zip(reduced, pivots):
            x[p] = -row[free]
        vectors.append(tuple(x))
    return span(vectors, ambient_dim)


def solve(matrix: Matrix, rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve a square nonsingular system exactly.

    Raises:
        InputError: If the matrix is singular.
    """
    n = len(matrix)
    augmented = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    reduced, pivots = rref(augmented, n + 1)
    if pivots != list(range(n)):
        raise InputError("Singular system")
    return [reduced[i][n] for i in range(n)]


class Projector:
    """Orthogonal projection onto the orthogonal complement of a subspace L.

    P(v) = v - B^T (B B^T)^{-1} B v for the basis rows B of L, solved exactly.
    The projection of every vector is orthogonal to L and v - P(v) lies in L.
    """

    def __init__(self, subspace: Subspace):
        self.subspace = subspace
        basis = subspace.basis
        n = len(basis)
        gram = [[dot(basis[i], basis[j]) for j in range(n)] for i in range(n)]
        self._inverse_columns = [
            solve(gram, [Fraction(1 if i == j else 0) for i in range(n)])
            for j in range(n)
        ]

    @property
    def is_identity(self) -> bool:
        return self.subspace.dim == 0

    def __call__(self, v: Vector) -> Vector:
        basis = self.subspace.basis
        if not basis:
            return v
        n = len(basis)
        products = [dot(b, v) for b in basis]
        coefficients = [
            sum(
                (self._inverse_columns[j][i] * products[j] for j in range(n)),
                Fraction(0),
            )
            for i in range(n)
        ]
        return sub(v, linear_combination(coefficients, basis, len(v)))


def orthogonal_projector(subspace: Subspace) -> Projector:
    """Return the projector onto the orthogonal complement of ``subspace``."""
    return Projector(subspace)


def identity_projector(d: int) -> Projector:
    return Projector(Subspace.zero(d))
