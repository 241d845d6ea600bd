"""Finitely generated convex cones: positive-hull membership, lineality spaces
and positive bases."""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import structlog

from src.geometry.exceptions import InputError, NoLinealityError
from src.geometry.ratlin import (
    Projector,
    Subspace,
    Vector,
    is_zero,
    kernel_basis,
    linear_combination,
    neg,
    rank,
    span,
    transpose,
)
from src.geometry.simplex import find_nonnegative_solution

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class VectorSet:
    """Finite ordered list of vectors of one ambient dimension.

    Use :meth:`checked` for user-facing sets: it rejects duplicates and,
    when asked, zero vectors. The plain constructor only checks dimensions,
    which lets internal code pass rainbow picks around unchanged.

    Attributes:
        vectors: The generators, in order
        ambient_dim: Dimension d of the ambient space
    """

    vectors: tuple[Vector, ...]
    ambient_dim: int

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise InputError("Ambient dimension must be positive")
        for v in self.vectors:
            if len(v) != self.ambient_dim:
                raise InputError(
                    f"Dimension mismatch: expected {self.ambient_dim}, got {len(v)}"
                )

    @classmethod
    def checked(
        cls,
        vectors: Iterable[Vector],
        ambient_dim: int,
        nonzero_required: bool = False,
    ) -> "VectorSet":
        vectors = tuple(vectors)
        if len(set(vectors)) != len(vectors):
            raise InputError("Duplicate vectors in one set")
        if nonzero_required and any(is_zero(v) for v in vectors):
            raise InputError("Zero vector in a set that must consist of nonzero vectors")
        return cls(vectors, ambient_dim)

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self) -> Iterator[Vector]:
        return iter(self.vectors)

    def __getitem__(self, index: int) -> Vector:
        return self.vectors[index]

    def subset(self, indices: Iterable[int]) -> "VectorSet":
        return VectorSet(tuple(self.vectors[i] for i in indices), self.ambient_dim)

    def without(self, index: int) -> "VectorSet":
        return VectorSet(
            self.vectors[:index] + self.vectors[index + 1:], self.ambient_dim
        )

    def deduplicated(self) -> "VectorSet":
        return VectorSet(tuple(dict.fromkeys(self.vectors)), self.ambient_dim)

    def has_zero(self) -> bool:
        return any(is_zero(v) for v in self.vectors)


@dataclass(frozen=True)
class DependenceCertificate:
    """Nonnegative combination sum coeff_i * v_i = value.

    Only strictly positive coefficients are listed.
    """

    coefficients: dict[int, Fraction] = field(hash=False)
    value: Vector

    def verify(self, vectors: VectorSet) -> bool:
        if any(c <= 0 for c in self.coefficients.values()):
            return False
        indices = sorted(self.coefficients)
        total = linear_combination(
            [self.coefficients[i] for i in indices],
            [vectors[i] for i in indices],
            vectors.ambient_dim,
        )
        return total == self.value


@dataclass(frozen=True)
class Lineality:
    """Lineality space of pos A and the indices of the generators inside it."""

    subspace: Subspace
    generator_indices: frozenset[int]


def _check_dimension(vectors: VectorSet, v: Vector) -> None:
    if len(v) != vectors.ambient_dim:
        raise InputError(
            f"Dimension mismatch: set lives in R^{vectors.ambient_dim}, "
            f"vector has {len(v)} coordinates"
        )


def _columns(vectors: Sequence[Vector], d: int) -> list[Vector]:
    """Constraint rows of sum lambda_i v_i = x: one row per coordinate."""
    return transpose(vectors, d) if vectors else [() for _ in range(d)]


def pos_membership(
    vectors: VectorSet, v: Vector
) -> tuple[bool, DependenceCertificate | None]:
    """Decide v in pos A by exact LP feasibility.

    Returns:
        (True, certificate) with sum lambda_i a_i = v, or (False, None).

    Raises:
        InputError: If A and v have different ambient dimensions.
    """
    _check_dimension(vectors, v)
    if is_zero(v):
        return True, DependenceCertificate({}, v)
    if not vectors.vectors:
        return False, None
    solution = find_nonnegative_solution(
        _columns(vectors.vectors, vectors.ambient_dim), list(v)
    )
    if solution is None:
        return False, None
    coefficients = {i: c for i, c in enumerate(solution) if c > 0}
    return True, DependenceCertificate(coefficients, v)


def zero_in_convex_hull(vectors: Sequence[Vector], d: int) -> list[Fraction] | None:
    """Convex weights lambda with sum lambda_i v_i = 0, or None."""
    if not vectors:
        return None
    rows = [list(r) for r in _columns(vectors, d)]
    rows.append([Fraction(1)] * len(vectors))
    rhs = [Fraction(0)] * d + [Fraction(1)]
    return find_nonnegative_solution(rows, rhs)


@lru_cache(maxsize=65536)
def _lineality(vectors: tuple[Vector, ...], d: int) -> Lineality:
    n = len(vectors)
    if n == 0:
        return Lineality(Subspace.zero(d), frozenset())
    # pointed cones are settled by a single LP
    weights = zero_in_convex_hull(vectors, d)
    if weights is None:
        return Lineality(Subspace.zero(d), frozenset())
    marked = {i for i, w in enumerate(weights) if w > 0}
    vector_set = VectorSet(vectors, d)
    for i in range(n):
        if i in marked:
            continue
        member, certificate = pos_membership(vector_set, neg(vectors[i]))
        if member and certificate is not None:
            # a_i + sum c_j a_j = 0 puts every a_j of the support in lpos A too
            marked.add(i)
            marked.update(certificate.coefficients)
    indices = frozenset(marked)
    return Lineality(span((vectors[i] for i in sorted(indices)), d), indices)


def lineality_space(vectors: VectorSet) -> Lineality:
    """lpos A = pos A intersected with -pos A, and the generators lying in it.

    a_i lies in lpos A iff -a_i lies in pos A; the lineality space is the
    span of those generators.
    """
    return _lineality(vectors.vectors, vectors.ambient_dim)


def solution_dimension(vectors: VectorSet) -> int:
    """Maximum number of linearly independent solutions of <a, x> <= 0, a in A.

    Equals d - dim lpos A.

    Raises:
        InputError: If A contains the zero vector.
    """
    if vectors.has_zero():
        raise InputError("Homogeneous systems must consist of nonzero vectors")
    return vectors.ambient_dim - lineality_space(vectors).subspace.dim


def is_pointed(vectors: VectorSet) -> bool:
    return lineality_space(vectors).subspace.dim == 0


def _is_removable(vectors: VectorSet, index: int) -> bool:
    member, _ = pos_membership(vectors.without(index), vectors[index])
    return member


def spans_subspace_positively(vectors: VectorSet) -> bool:
    """True iff pos B equals the linear span of B."""
    return len(lineality_space(vectors).generator_indices) == len(vectors)


def is_positive_basis(vectors: VectorSet, subspace: Subspace) -> bool:
    """True iff pos B = L and no element of B can be dropped.

    Raises:
        InputError: If some vector of B lies outside L.
    """
    if vectors.ambient_dim != subspace.ambient_dim:
        raise InputError("Dimension mismatch between set and subspace")
    for v in vectors:
        if not subspace.contains(v):
            raise InputError("Vector outside the subspace")
    if span(vectors.vectors, vectors.ambient_dim) != subspace:
        return False
    if not spans_subspace_positively(vectors):
        return False
    return not any(_is_removable(vectors, i) for i in range(len(vectors)))


def is_minimal_positive_basis(vectors: VectorSet) -> tuple[bool, Subspace | None]:
    """True iff |B| = dim span B + 1 >= 2 and pos B = span B.

    Decided through the dependence kernel: it must be one-dimensional with a
    strictly positive generator.

    Returns:
        (True, span B) on success, (False, None) otherwise.
    """
    n = len(vectors)
    d = vectors.ambient_dim
    if n < 2:
        return False, None
    if rank(vectors.vectors) != n - 1:
        return False, None
    dependence = kernel_basis(_columns(vectors.vectors, d), n)
    if dependence.dim != 1:
        return False, None
    generator = dependence.basis[0]
    if not (all(c > 0 for c in generator) or all(c < 0 for c in generator)):
        return False, None
    return True, span(vectors.vectors, d)


def extract_minimal_positive_basis(vectors: VectorSet) -> VectorSet:
    """First subset (by size, then index order) that is a minimal positive basis.

    Raises:
        InputError: If B is not a positive basis of its span.
    """
    return vectors.subset(extract_minimal_positive_basis_indices(vectors))


def extract_minimal_positive_basis_indices(vectors: VectorSet) -> tuple[int, ...]:
    if not is_positive_basis(vectors, span(vectors.vectors, vectors.ambient_dim)):
        raise InputError("Set is not a positive basis of its span")
    for size in range(2, len(vectors) + 1):
        for indices in combinations(range(len(vectors)), size):
            found, _ = is_minimal_positive_basis(vectors.subset(indices))
            if found:
                return indices
    raise InputError("Set is not a positive basis of a nontrivial subspace")


def positive_basis_of_lineality_indices(vectors: VectorSet) -> tuple[int, ...]:
    lineality = lineality_space(vectors)
    if lineality.subspace.dim == 0:
        raise NoLinealityError()
    kept = sorted(lineality.generator_indices)
    for index in list(kept):
        rest = [i for i in kept if i != index]
        member, _ = pos_membership(vectors.subset(rest), vectors[index])
        if member:
            kept = rest
    return tuple(kept)


def positive_basis_of_lineality(vectors: VectorSet) -> VectorSet:
    """A subset of A that is a positive basis of lpos A.

    Greedy removal in index order from the generators lying in lpos A.

    Raises:
        NoLinealityError: If lpos A is trivial.
    """
    return vectors.subset(positive_basis_of_lineality_indices(vectors))


def project_vectors(projector: Projector, vectors: Iterable[Vector]) -> list[Vector]:
    """Images under P with zero images and repeated images dropped."""
    images = (projector(v) for v in vectors)
    return list(dict.fromkeys(img for img in images if not is_zero(img)))
