"""Colorful Reay decomposition: construction and independent verification."""
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import structlog

from src.geometry.cone import (
    VectorSet,
    is_minimal_positive_basis,
    is_positive_basis,
    lineality_space,
    positive_basis_of_lineality_indices,
    spans_subspace_positively,
)
from src.geometry.exceptions import InputError, InvariantBreachError
from src.geometry.rainbow import (
    ColoredSystem,
    RainbowSelection,
    max_cardinality_rainbow_mpb,
)
from src.geometry.ratlin import (
    Projector,
    Subspace,
    Vector,
    identity_projector,
    orthogonal_projector,
    span,
)

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class ReayBlock:
    index_set: tuple[int, ...]
    selection: RainbowSelection

    def __len__(self) -> int:
        return len(self.selection)


@dataclass(frozen=True)
class ReayDecomposition:
    """Blocks R_1..R_m with L_i = pos(R_1 u ... u R_i).

    Attributes:
        blocks: Index set and rainbow picks of every block, in order
        block_subspaces: L_1..L_m, one per block prefix
    """

    blocks: tuple[ReayBlock, ...]
    block_subspaces: tuple[Subspace, ...]

    @property
    def m(self) -> int:
        return len(self.blocks)

    def prefix_picks(self, i: int) -> list[tuple[int, int]]:
        """Picks of the first ``i`` blocks in block order."""
        return [pick for block in self.blocks[:i] for pick in block.selection.picks]

    def union(self) -> RainbowSelection:
        return RainbowSelection.from_pairs(self.prefix_picks(self.m))


def _check_hypothesis(system: ColoredSystem, k: int) -> None:
    d = system.ambient_dim
    if not 1 <= k <= d:
        raise InputError(f"k must satisfy 1 <= k <= d, got k={k}, d={d}")
    if len(system) != d + k:
        raise InputError(f"Expected {d + k} colors, got {len(system)}")
    for i, color in enumerate(system.colors):
        dim = lineality_space(color).subspace.dim
        if dim < k:
            raise InputError(
                f"Color {i} has lineality of dimension {dim}, at least {k} required"
            )


def _pick_vectors(system: ColoredSystem, picks: Sequence[tuple[int, int]]) -> list[Vector]:
    return [system.colors[c][i] for c, i in picks]


def _check_step(
    system: ColoredSystem,
    previous: ReayBlock,
    current: ReayBlock,
    projector: Projector,
) -> None:
    """Projected by the projector that found ``previous``, the two blocks
    R and Q satisfy |Q| <= |R| and span a subspace of dimension |R| + |Q| - 2
    which pos(R u Q) fills."""
    d = system.ambient_dim
    r_images = [projector(v) for v in _pick_vectors(system, previous.selection.picks)]
    q_images = [projector(v) for v in _pick_vectors(system, current.selection.picks)]
    if len(q_images) > len(r_images):
        raise InvariantBreachError(
            f"Block sizes increase: {len(r_images)} then {len(q_images)}"
        )
    joined = r_images + q_images
    if span(joined, d).dim != len(joined) - 2:
        raise InvariantBreachError("Consecutive blocks span a subspace of wrong dimension")
    if not spans_subspace_positively(VectorSet(tuple(joined), d).deduplicated()):
        raise InvariantBreachError("Consecutive blocks do not positively span a subspace")


def _build(system: ColoredSystem, k: int) -> ReayDecomposition:
    """Greedy block construction: each block is the maximal rainbow block of
    the remaining colors after projecting away the current subspace."""
    d = system.ambient_dim
    n_colors = len(system)
    available = list(range(n_colors))
    projector = identity_projector(d)
    projectors: list[Projector] = []
    blocks: list[ReayBlock] = []
    subspaces: list[Subspace] = []
    subspace = Subspace.zero(d)
    while subspace.dim < k:
        if len(blocks) >= k:
            raise InvariantBreachError(f"More than {k} blocks without reaching dimension {k}")
        found = max_cardinality_rainbow_mpb(available, system, projector)
        if found is None:
            raise InvariantBreachError(
                f"No rainbow block found after {len(blocks)} blocks (dim L = {subspace.dim})"
            )
        block = ReayBlock(found.index_set, found.selection)
        if blocks:
            _check_step(system, blocks[-1], block, projectors[-1])
        projectors.append(projector)
        blocks.append(block)
        available = [c for c in available if c not in found.index_set]

        picks = [pick for b in blocks for pick in b.selection.picks]
        subspace = span(_pick_vectors(system, picks), d)
        expected = len(picks) - len(blocks)
        if subspace.dim != expected:
            raise InvariantBreachError(
                f"dim L_{len(blocks)} = {subspace.dim}, expected {expected}"
            )
        subspaces.append(subspace)

        if len(available) != n_colors - subspace.dim - len(blocks):
            raise InvariantBreachError("Remaining color count breaks the budget identity")
        if subspace.dim < k:
            if len(available) < d - subspace.dim + 1:
                raise InvariantBreachError("Too few colors left to continue")
            projector = orthogonal_projector(subspace)
        logger.debug(
            "reay: block added",
            block=len(blocks),
            size=len(block),
            dim=subspace.dim,
            remaining=len(available),
        )
    return ReayDecomposition(tuple(blocks), tuple(subspaces))


def reay_decompose_weak(system: ColoredSystem, k: int) -> ReayDecomposition:
    """Weak Colorful Reay decomposition of d + k colors.

    Args:
        system: d + k colors, each positively spanning a subspace of
            dimension at least k
        k: Target dimension, 1 <= k <= d

    Returns:
        Blocks of weakly decreasing size >= 2 whose union positively spans
        a subspace of dimension at least k.

    Raises:
        InputError: If the hypothesis does not hold.
        InvariantBreachError: If a guaranteed block is not found.
    """
    _check_hypothesis(system, k)
    logger.info("reay_decompose_weak: started", d=system.ambient_dim, k=k)
    decomposition = _build(system, k)
    logger.info("reay_decompose_weak: completed", m=decomposition.m)
    return decomposition


def _prefix_vector_set(
    decomposition: ReayDecomposition, system: ColoredSystem, i: int
) -> VectorSet:
    vectors = _pick_vectors(system, decomposition.prefix_picks(i))
    return VectorSet(tuple(vectors), system.ambient_dim).deduplicated()


def _is_strong(decomposition: ReayDecomposition, system: ColoredSystem) -> bool:
    return all(
        is_positive_basis(_prefix_vector_set(decomposition, system, i + 1), subspace)
        for i, subspace in enumerate(decomposition.block_subspaces)
    )


def reay_decompose(system: ColoredSystem, k: int) -> ReayDecomposition:
    """Strong Colorful Reay decomposition: every prefix union is a positive
    basis of its subspace.

    The weak decomposition is returned as is when it already qualifies,
    otherwise it goes through ``strengthen_decomposition``.

    Raises:
        InputError: If the hypothesis does not hold.
        InvariantBreachError: If the construction fails.
    """
    _check_hypothesis(system, k)
    logger.info("reay_decompose: started", d=system.ambient_dim, k=k)
    weak = _build(system, k)
    if _is_strong(weak, system):
        logger.info("reay_decompose: completed", m=weak.m, rebuilt=False)
        return weak
    strong = strengthen_decomposition(weak, system, k)
    logger.info("reay_decompose: completed", m=strong.m, rebuilt=True)
    return strong


def strengthen_decomposition(
    weak: ReayDecomposition, system: ColoredSystem, k: int
) -> ReayDecomposition:
    """Turn a weak decomposition into a strong one.

    A positive basis R of pos R' (R' the weak union) is rebuilt into blocks
    from d + dim pos R' identical copies of R, and each pick is relabeled to
    the original color it came from.

    Raises:
        InputError: If the hypothesis does not hold or ``weak`` fails the
            weak clauses.
        InvariantBreachError: If the rebuilt decomposition is not strong.
    """
    _check_hypothesis(system, k)
    check = verify_decomposition(weak, system, k, strong=False)
    if not check.passed:
        raise InputError(
            f"Not a weak decomposition, clause '{check.failed_clause}': {check.message}"
        )
    d = system.ambient_dim
    origin: dict[Vector, tuple[int, int]] = {}
    for pick in weak.union().picks:
        origin.setdefault(system.colors[pick[0]][pick[1]], pick)
    union = VectorSet(tuple(origin), d)
    basis = union.subset(positive_basis_of_lineality_indices(union))
    copies = ColoredSystem.copies(basis, d + span(union.vectors, d).dim)
    rebuilt = _build(copies, k)

    blocks = []
    for block in rebuilt.blocks:
        picks = RainbowSelection.from_pairs(
            origin[basis[index]] for _, index in block.selection.picks
        )
        blocks.append(ReayBlock(picks.colors, picks))
    strong = ReayDecomposition(tuple(blocks), rebuilt.block_subspaces)
    check = verify_decomposition(strong, system, k, strong=True)
    if not check.passed:
        raise InvariantBreachError(
            f"Rebuilt decomposition fails clause '{check.failed_clause}': {check.message}"
        )
    logger.debug("strengthen_decomposition: rebuilt", weak_m=weak.m, m=strong.m)
    return strong


class Clause(str, Enum):
    RAINBOW = "rainbow"
    BLOCK_SIZE = "block size"
    MONOTONE_SIZES = "monotone sizes"
    DIMENSION_FORMULA = "dimension formula"
    LINEAR_SUBSPACE = "linear subspace"
    FIRST_BLOCK_MINIMAL = "first block minimal"
    FINAL_DIMENSION = "final dimension"
    POSITIVE_BASIS = "positive basis"


@dataclass(frozen=True)
class DecompositionVerification:
    passed: bool
    failed_clause: Clause | None = None
    message: str = ""

    @classmethod
    def fail(cls, clause: Clause, message: str) -> "DecompositionVerification":
        return cls(False, clause, message)


def _check_references(decomposition: ReayDecomposition, system: ColoredSystem) -> None:
    if len(decomposition.block_subspaces) != decomposition.m:
        raise InputError("One subspace per block is required")
    for subspace in decomposition.block_subspaces:
        if subspace.ambient_dim != system.ambient_dim:
            raise InputError("Subspace of a different ambient dimension")
    for j, block in enumerate(decomposition.blocks):
        if tuple(sorted(block.index_set)) != block.selection.colors:
            raise InputError(f"Block {j + 1}: index set does not match its picks")
        for c, i in block.selection.picks:
            if not 0 <= c < len(system) or not 0 <= i < len(system.colors[c]):
                raise InputError(f"Block {j + 1}: pick ({c}, {i}) is out of range")


def verify_decomposition(
    decomposition: ReayDecomposition,
    system: ColoredSystem,
    k: int,
    strong: bool,
) -> DecompositionVerification:
    """Recompute every property of a decomposition from the raw vectors.

    Clauses are checked in a fixed order and the first violated one is
    reported.

    Raises:
        InputError: If the decomposition references colors or vectors that
            do not exist.
    """
    _check_references(decomposition, system)
    d = system.ambient_dim
    blocks = decomposition.blocks

    used = [c for block in blocks for c in block.index_set]
    if len(used) != len(set(used)):
        return DecompositionVerification.fail(Clause.RAINBOW, "A color is used twice")

    for j, block in enumerate(blocks):
        if len(block) < 2:
            return DecompositionVerification.fail(
                Clause.BLOCK_SIZE, f"Block {j + 1} has {len(block)} vectors"
            )
    for j in range(1, len(blocks)):
        if len(blocks[j - 1]) < len(blocks[j]):
            return DecompositionVerification.fail(
                Clause.MONOTONE_SIZES,
                f"|R_{j}| = {len(blocks[j - 1])} < |R_{j + 1}| = {len(blocks[j])}",
            )

    total = 0
    for i, claimed in enumerate(decomposition.block_subspaces, start=1):
        total += len(blocks[i - 1])
        vectors = _pick_vectors(system, decomposition.prefix_picks(i))
        actual = span(vectors, d)
        if actual.dim != total - i or actual != claimed:
            return DecompositionVerification.fail(
                Clause.DIMENSION_FORMULA,
                f"Prefix {i} spans dimension {actual.dim}, expected {total - i} "
                "and the claimed subspace",
            )
        if not spans_subspace_positively(_prefix_vector_set(decomposition, system, i)):
            return DecompositionVerification.fail(
                Clause.LINEAR_SUBSPACE, f"pos of prefix {i} is not a linear subspace"
            )

    if not blocks:
        return DecompositionVerification.fail(Clause.FIRST_BLOCK_MINIMAL, "No blocks")
    first = VectorSet(tuple(_pick_vectors(system, blocks[0].selection.picks)), d)
    if not is_minimal_positive_basis(first)[0]:
        return DecompositionVerification.fail(
            Clause.FIRST_BLOCK_MINIMAL, "R_1 is not a minimal positive basis"
        )

    final_dim = decomposition.block_subspaces[-1].dim
    if final_dim < k:
        return DecompositionVerification.fail(
            Clause.FINAL_DIMENSION, f"dim L_m = {final_dim} < {k}"
        )

    if strong:
        for i, subspace in enumerate(decomposition.block_subspaces, start=1):
            prefix = _prefix_vector_set(decomposition, system, i)
            if len(prefix) != len(decomposition.prefix_picks(i)) or not is_positive_basis(
                prefix, subspace
            ):
                return DecompositionVerification.fail(
                    Clause.POSITIVE_BASIS,
                    f"Prefix {i} is not a positive basis of L_{i}",
                )
    return DecompositionVerification(True)
