"""Colorful selections: colorful Caratheodory at the origin and rainbow
minimal positive bases, including the maximal-cardinality search used by the
Reay decomposition.

Every search walks candidates in one total order: by size, then by the tuple
of colors, then by the tuple of vector indices. The first hit wins, so all
outputs are deterministic.
"""
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

import structlog

from src.geometry.cone import (
    VectorSet,
    extract_minimal_positive_basis_indices,
    is_minimal_positive_basis,
    lineality_space,
    positive_basis_of_lineality_indices,
    zero_in_convex_hull,
)
from src.geometry.exceptions import InputError, InvariantBreachError
from src.geometry.ratlin import Projector, Subspace, Vector, identity_projector, is_zero, rank, span

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class ColoredSystem:
    """Ordered list of color classes sharing one ambient dimension."""

    colors: tuple[VectorSet, ...]
    ambient_dim: int

    def __post_init__(self):
        if not self.colors:
            raise InputError("A colored system needs at least one color")
        for i, color in enumerate(self.colors):
            if not len(color):
                raise InputError(f"Color {i} is empty")
            if color.ambient_dim != self.ambient_dim:
                raise InputError(f"Color {i} lives in a different dimension")

    @classmethod
    def from_vectors(
        cls,
        colors: Iterable[Iterable[Vector]],
        ambient_dim: int,
        nonzero_required: bool = False,
    ) -> "ColoredSystem":
        return cls(
            tuple(
                VectorSet.checked(c, ambient_dim, nonzero_required) for c in colors
            ),
            ambient_dim,
        )

    @classmethod
    def copies(cls, vectors: VectorSet, count: int) -> "ColoredSystem":
        return cls((vectors,) * count, vectors.ambient_dim)

    def __len__(self) -> int:
        return len(self.colors)

    def has_zero(self) -> bool:
        return any(color.has_zero() for color in self.colors)


@dataclass(frozen=True, order=True)
class RainbowSelection:
    """At most one pick per color, stored as sorted (color, index) pairs."""

    picks: tuple[tuple[int, int], ...]

    def __post_init__(self):
        colors = [c for c, _ in self.picks]
        if any(a >= b for a, b in zip(colors, colors[1:])):
            raise InputError("A rainbow selection takes at most one vector per color")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "RainbowSelection":
        return cls(tuple(sorted(pairs)))

    @property
    def colors(self) -> tuple[int, ...]:
        return tuple(c for c, _ in self.picks)

    def as_dict(self) -> dict[int, int]:
        return dict(self.picks)

    def __len__(self) -> int:
        return len(self.picks)

    def vectors(self, system: ColoredSystem) -> tuple[Vector, ...]:
        try:
            return tuple(system.colors[c][i] for c, i in self.picks)
        except IndexError as e:
            raise InputError(f"Selection {self.picks} does not fit the system") from e

    def vector_set(self, system: ColoredSystem) -> VectorSet:
        """The picked vectors with repeats removed (pos is unaffected)."""
        return VectorSet(tuple(dict.fromkeys(self.vectors(system))), system.ambient_dim)


@dataclass(frozen=True)
class RainbowBlock:
    """Rainbow sub-selection whose projection is a minimal positive basis.

    Attributes:
        index_set: Colors used, one pick each
        selection: The picks
        subspace: pos P(R), the minimal subspace spanned by the projection
    """

    index_set: tuple[int, ...]
    selection: RainbowSelection
    subspace: Subspace


def iter_rainbow_selections(
    system: ColoredSystem, size: int, colors: Sequence[int] | None = None
) -> Iterator[RainbowSelection]:
    """All rainbow sub-selections of one size in the global lexicographic order."""
    pool = range(len(system)) if colors is None else colors
    for combo in combinations(pool, size):
        ranges = [range(len(system.colors[c])) for c in combo]
        for indices in product(*ranges):
            yield RainbowSelection(tuple(zip(combo, indices)))


def _check_color_count(system: ColoredSystem, dimension: int | None) -> int:
    n = system.ambient_dim if dimension is None else dimension
    if len(system) != n + 1:
        raise InputError(
            f"Expected {n + 1} colors in dimension {n}, got {len(system)}"
        )
    every = [v for color in system.colors for v in color]
    if rank(every) > n:
        raise InputError(f"Colors do not fit into a {n}-dimensional subspace")
    return n


def colorful_caratheodory_zero(
    system: ColoredSystem, dimension: int | None = None
) -> RainbowSelection:
    """Full rainbow selection whose convex hull contains the origin.

    Args:
        system: n + 1 colors, each with the origin in its convex hull
        dimension: n, the dimension of a subspace holding all colors
            (defaults to the ambient dimension)

    Raises:
        InputError: If the color count is wrong or 0 is outside conv of a color.
    """
    n = _check_color_count(system, dimension)
    for i, color in enumerate(system.colors):
        if zero_in_convex_hull(color.vectors, system.ambient_dim) is None:
            raise InputError(f"0 is not in the convex hull of color {i}")
    for selection in iter_rainbow_selections(system, n + 1):
        vectors = selection.vectors(system)
        if zero_in_convex_hull(vectors, system.ambient_dim) is not None:
            logger.debug("colorful_caratheodory_zero: found", picks=selection.picks)
            return selection
    raise InvariantBreachError("No rainbow selection contains 0 in its convex hull")


def _candidates(
    system: ColoredSystem, colors: Sequence[int], projector: Projector
) -> dict[int, list[tuple[int, Vector]]]:
    result = {}
    for c in colors:
        images = ((i, projector(v)) for i, v in enumerate(system.colors[c]))
        result[c] = [(i, img) for i, img in images if not is_zero(img)]
    return result


def _first_block_of_size(
    candidates: dict[int, list[tuple[int, Vector]]],
    colors: Sequence[int],
    size: int,
    d: int,
) -> RainbowBlock | None:
    """Lexicographically first rainbow pick of ``size`` colors whose images
    form a minimal positive basis.

    Any size-1 elements of a minimal positive basis are independent, so
    dependent prefixes are pruned without changing the enumeration order.
    """

    def extend(
        combo: tuple[int, ...], picks: list[tuple[int, int]], images: list[Vector]
    ) -> tuple[list[tuple[int, int]], Subspace] | None:
        depth = len(picks)
        color = combo[depth]
        for index, image in candidates[color]:
            if depth < size - 1:
                if rank(images + [image]) != depth + 1:
                    continue
                found = extend(combo, picks + [(color, index)], images + [image])
                if found is not None:
                    return found
            else:
                ok, subspace = is_minimal_positive_basis(
                    VectorSet(tuple(images + [image]), d)
                )
                if ok and subspace is not None:
                    return picks + [(color, index)], subspace
        return None

    # colors with identical candidate lists make equivalent combos
    keys = {c: tuple(img for _, img in candidates[c]) for c in colors}
    failed: set[tuple[tuple[Vector, ...], ...]] = set()
    for combo in combinations(colors, size):
        if any(not candidates[c] for c in combo):
            continue
        key = tuple(keys[c] for c in combo)
        if key in failed:
            continue
        found = extend(combo, [], [])
        if found is None:
            failed.add(key)
            continue
        picks, subspace = found
        return RainbowBlock(combo, RainbowSelection(tuple(picks)), subspace)
    return None


def max_cardinality_rainbow_mpb(
    available_colors: Sequence[int],
    system: ColoredSystem,
    projector: Projector | None = None,
) -> RainbowBlock | None:
    """Largest index set I admitting a rainbow pick R (one per color of I)
    with P(R) a minimal positive basis of pos P(R).

    Ties go to the lexicographically smallest I, then the smallest picks.

    Returns:
        The block, or None when no such index set exists.
    """
    colors = sorted(set(available_colors))
    if not colors:
        raise InputError("No colors available")
    d = system.ambient_dim
    projector = projector or identity_projector(d)
    candidates = _candidates(system, colors, projector)
    complement_dim = d - projector.subspace.dim
    top = min(len(colors), complement_dim + 1)
    for size in range(top, 1, -1):
        block = _first_block_of_size(candidates, colors, size, d)
        if block is not None:
            logger.debug(
                "max_cardinality_rainbow_mpb: found",
                size=size,
                picks=block.selection.picks,
            )
            return block
    return None


def rainbow_minimal_positive_basis(
    system: ColoredSystem, dimension: int | None = None
) -> tuple[RainbowSelection, Subspace]:
    """Nonempty rainbow sub-selection R that is a minimal positive basis of pos R.

    The colorful Caratheodory pipeline (positive basis of each lineality,
    rainbow selection around the origin, extraction of a minimal basis)
    provides a witness; the answer is the lexicographically first minimal
    positive basis no larger than that witness.

    Raises:
        InputError: If the color count is wrong or some color has trivial lineality.
    """
    n = _check_color_count(system, dimension)
    d = system.ambient_dim
    reduced_indices = []
    for i, color in enumerate(system.colors):
        if lineality_space(color).subspace.dim < 1:
            raise InputError(f"Color {i} has trivial lineality space")
        reduced_indices.append(positive_basis_of_lineality_indices(color))
    reduced = ColoredSystem(
        tuple(color.subset(idx) for color, idx in zip(system.colors, reduced_indices)),
        d,
    )
    around_zero = colorful_caratheodory_zero(reduced, n)
    picks = [(c, reduced_indices[c][i]) for c, i in around_zero.picks]
    unique: dict[Vector, tuple[int, int]] = {}
    for c, i in picks:
        unique.setdefault(system.colors[c][i], (c, i))
    witness_set = VectorSet(tuple(unique), d)
    basis = witness_set.subset(positive_basis_of_lineality_indices(witness_set))
    witness = extract_minimal_positive_basis_indices(basis)

    colors = list(range(len(system)))
    candidates = _candidates(system, colors, identity_projector(d))
    for size in range(2, len(witness) + 1):
        block = _first_block_of_size(candidates, colors, size, d)
        if block is not None:
            return block.selection, block.subspace
    raise InvariantBreachError("Witness of the colorful pipeline was not found again")


def selection_span(selection: RainbowSelection, system: ColoredSystem) -> Subspace:
    return span(selection.vectors(system), system.ambient_dim)
