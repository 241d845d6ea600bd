"""Instance generators: the extremal constructions showing the color counts
and Helly numbers are optimal, and seeded random instances.

Random instances replay bit for bit: each color draws from its own
``random.Random`` seeded with the first 8 bytes (big endian) of
``blake2b(f"{seed}:{color}")``. Coordinates are p/q with |p| <= 100 and
1 <= q <= 10.
"""
import hashlib
import random
from enum import Enum
from fractions import Fraction
from typing import Sequence

import structlog
from pydantic import BaseModel, Field, model_validator

from src.geometry.cone import VectorSet
from src.geometry.exceptions import GenerationError, InputError
from src.geometry.rainbow import ColoredSystem
from src.geometry.ratlin import Vector, add, is_zero, neg, rank, scale, unit_vector, zero_vector

logger = structlog.get_logger(__name__)

NUMERATOR_BOUND = 100
DENOMINATOR_BOUND = 10
REDRAW_CAP = 1000


class GeneratorKind(str, Enum):
    CROSS_POLYTOPE = "cross_polytope"
    SIMPLEX = "simplex"
    EXTREMAL_COLORFUL = "extremal_colorful"
    OPTIMAL_SIZE = "optimal_size"
    RANDOM_PLANTED = "random_planted"
    RANDOM_COLORS = "random_colors"
    RANDOM_POINTED = "random_pointed"


class GeneratorSpec(BaseModel):
    """Parameters of one generated instance.

    Attributes:
        kind: Which construction to run
        d: Ambient dimension
        k: Dimension parameter of the construction
        seed: Seed of the random kinds
        colors: Number of colors of the random kinds (default d + k)
        extra: Extra random vectors per planted color
        sizes: Per-color extra counts, overriding ``extra``
        size: Vectors per color for ``random_colors`` and ``random_pointed``
        tight: Appended extremal colors with lineality exactly k
    """

    kind: GeneratorKind
    d: int = Field(ge=1)
    k: int = 1
    seed: int = 0
    colors: int | None = Field(default=None, ge=1)
    extra: int = Field(default=0, ge=0)
    sizes: list[int] | None = None
    size: int = Field(default=3, ge=1)
    tight: bool = False

    @model_validator(mode="after")
    def check_ranges(self):
        """Range of k per kind."""
        if self.kind == GeneratorKind.CROSS_POLYTOPE and not 0 <= self.k <= self.d - 1:
            raise ValueError("cross_polytope needs 0 <= k <= d - 1")
        if self.kind == GeneratorKind.OPTIMAL_SIZE and not 0 <= self.k <= self.d - 1:
            raise ValueError("optimal_size needs 0 <= k <= d - 1")
        if self.kind in (GeneratorKind.EXTREMAL_COLORFUL, GeneratorKind.RANDOM_PLANTED):
            if not 1 <= self.k <= self.d:
                raise ValueError(f"{self.kind.value} needs 1 <= k <= d")
        if self.sizes is not None and any(s < 0 for s in self.sizes):
            raise ValueError("sizes must be nonnegative")
        return self


def gen_cross_polytope(k: int, d: int) -> VectorSet:
    """{+-e_1, ..., +-e_{k+1}} in R^d, ordered e_1, -e_1, e_2, -e_2, ..."""
    if k < 0 or k + 1 > d:
        raise InputError(f"Cross-polytope needs 0 <= k and k + 1 <= d, got k={k}, d={d}")
    vectors = []
    for i in range(k + 1):
        e = unit_vector(i, d)
        vectors += [e, neg(e)]
    return VectorSet(tuple(vectors), d)


def gen_simplex_vertices(d: int) -> VectorSet:
    """e_1, ..., e_d and -(e_1 + ... + e_d): zero sum, every d independent."""
    if d < 1:
        raise InputError("Dimension must be positive")
    units = [unit_vector(i, d) for i in range(d)]
    return VectorSet(tuple(units) + ((Fraction(-1),) * d,), d)


def _appended_color(j: int, d: int) -> VectorSet:
    """e_i + e_j (i < j), e_j and -(e_0 + ... + e_{j-1} + (j+1) e_j), 0-based.

    A minimal positive basis of R^{j+1} with no vector inside R^j.
    """
    e_j = unit_vector(j, d)
    vectors = [add(unit_vector(i, d), e_j) for i in range(j)]
    vectors.append(e_j)
    closing = zero_vector(d)
    for i in range(j):
        closing = add(closing, unit_vector(i, d))
    closing = add(closing, scale(Fraction(j + 1), e_j))
    vectors.append(neg(closing))
    return VectorSet(tuple(vectors), d)


def _tight_color(j: int, k: int, d: int) -> VectorSet:
    """Same shape inside span{e_0, ..., e_{k-2}, e_j}: lineality exactly k."""
    e_j = unit_vector(j, d)
    vectors = [add(unit_vector(i, d), e_j) for i in range(k - 1)]
    vectors.append(e_j)
    closing = scale(Fraction(k), e_j)
    for i in range(k - 1):
        closing = add(closing, unit_vector(i, d))
    vectors.append(neg(closing))
    return VectorSet(tuple(vectors), d)


def gen_extremal_colorful(d: int, k: int, tight_lineality: bool = False) -> ColoredSystem:
    """d + k - 1 colors, each positively spanning a subspace of dimension at
    least k, with no rainbow sub-selection doing so.

    Base: 2k - 1 copies of {+-e_1, ..., +-e_k}. Each further coordinate j
    adds a minimal positive basis of R^j off R^{j-1}, or, with
    ``tight_lineality``, of span{e_1, ..., e_{k-1}, e_j}.

    Raises:
        InputError: Unless 1 <= k <= d.
    """
    if not 1 <= k <= d:
        raise InputError(f"Extremal construction needs 1 <= k <= d, got k={k}, d={d}")
    base = gen_cross_polytope(k - 1, d)
    colors = [base] * (2 * k - 1)
    for j in range(k, d):
        colors.append(_tight_color(j, k, d) if tight_lineality else _appended_color(j, d))
    return ColoredSystem(tuple(colors), d)


def gen_optimal_size_example(k: int, d: int) -> VectorSet:
    """Set with dim lpos >= k + 1 whose subsets of size < h(k,d) have dim lpos <= k."""
    if not 0 <= k <= d - 1:
        raise InputError(f"Optimal-size example needs 0 <= k <= d - 1, got k={k}, d={d}")
    if d + 1 >= 2 * (k + 1):
        return gen_simplex_vertices(d)
    return gen_cross_polytope(k, d)


def color_seed(seed: int, color: int | str) -> int:
    digest = hashlib.blake2b(f"{seed}:{color}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def _random_rational(rng: random.Random) -> Fraction:
    numerator = rng.randint(-NUMERATOR_BOUND, NUMERATOR_BOUND)
    return Fraction(numerator, rng.randint(1, DENOMINATOR_BOUND))


def _random_vector(rng: random.Random, d: int) -> Vector:
    return tuple(_random_rational(rng) for _ in range(d))


def _draw(rng: random.Random, d: int, accept) -> Vector:
    for _ in range(REDRAW_CAP):
        v = _random_vector(rng, d)
        if accept(v):
            return v
    raise GenerationError(f"No acceptable vector after {REDRAW_CAP} draws")


def _planted_color(rng: random.Random, d: int, k: int, extra: int) -> VectorSet:
    basis: list[Vector] = []
    for _ in range(k):
        basis.append(_draw(rng, d, lambda v: rank(basis + [v]) == len(basis) + 1))
    total = zero_vector(d)
    for v in basis:
        total = add(total, v)
    vectors = basis + [neg(total)]
    for _ in range(extra):
        vectors.append(_draw(rng, d, lambda v: not is_zero(v) and v not in vectors))
    return VectorSet.checked(vectors, d, nonzero_required=True)


def gen_random_planted(
    d: int,
    k: int,
    n_colors: int,
    extra: int | Sequence[int],
    seed: int,
) -> ColoredSystem:
    """Colors planted with a minimal positive basis of a random k-dimensional
    subspace (k random independent vectors and minus their sum), followed by
    ``extra`` random nonzero vectors.

    Args:
        extra: One count for every color, or one count per color

    Raises:
        InputError: For out-of-range parameters.
        GenerationError: If the redraw cap is hit.
    """
    if not 1 <= k <= d:
        raise InputError(f"Planted instances need 1 <= k <= d, got k={k}, d={d}")
    if n_colors < 1:
        raise InputError("At least one color is required")
    extras = [extra] * n_colors if isinstance(extra, int) else list(extra)
    if len(extras) != n_colors or any(e < 0 for e in extras):
        raise InputError("One nonnegative extra count per color is required")
    colors = tuple(
        _planted_color(random.Random(color_seed(seed, c)), d, k, extras[c])
        for c in range(n_colors)
    )
    logger.debug("gen_random_planted: completed", d=d, k=k, colors=n_colors, seed=seed)
    return ColoredSystem(colors, d)


def gen_random_colors(d: int, n_colors: int, size: int, seed: int) -> ColoredSystem:
    """Colors of ``size`` distinct random nonzero vectors, nothing planted."""
    if d < 1 or n_colors < 1 or size < 1:
        raise InputError("Dimension, color count and size must be positive")
    colors = []
    for c in range(n_colors):
        rng = random.Random(color_seed(seed, f"free:{c}"))
        vectors: list[Vector] = []
        for _ in range(size):
            vectors.append(_draw(rng, d, lambda v: not is_zero(v) and v not in vectors))
        colors.append(VectorSet.checked(vectors, d, nonzero_required=True))
    return ColoredSystem(tuple(colors), d)


def blocked_color(n_colors: int, seed: int) -> int:
    return seed % n_colors


def gen_random_pointed(d: int, n_colors: int, size: int, seed: int) -> ColoredSystem:
    """Colors of ``size`` random vectors in the open positive orthant, except
    color ``seed % n_colors``, which is the cross-polytope {+-e_1, ..., +-e_d}.

    A rainbow sub-selection holds at most one cross-polytope vector and
    every other vector has all coordinates positive, so each selection spans
    a pointed cone. Both colorful hypotheses hold for every k while the
    cross-polytope color fails both conclusions.

    Raises:
        InputError: Unless d >= 2 and the counts are positive.
    """
    if d < 2 or n_colors < 1 or size < 1:
        raise InputError("Pointed instances need d >= 2 and positive counts")
    blocked = blocked_color(n_colors, seed)
    colors = []
    for c in range(n_colors):
        if c == blocked:
            colors.append(gen_cross_polytope(d - 1, d))
            continue
        rng = random.Random(color_seed(seed, f"orthant:{c}"))
        vectors: list[Vector] = []
        for _ in range(size):
            v = _draw(rng, d, lambda v: all(v) and tuple(map(abs, v)) not in vectors)
            vectors.append(tuple(map(abs, v)))
        colors.append(VectorSet.checked(vectors, d, nonzero_required=True))
    logger.debug("gen_random_pointed: completed", d=d, colors=n_colors, blocked=blocked, seed=seed)
    return ColoredSystem(tuple(colors), d)


def generate(spec: GeneratorSpec) -> ColoredSystem | VectorSet:
    """Run the construction named by ``spec.kind``."""
    match spec.kind:
        case GeneratorKind.CROSS_POLYTOPE:
            return gen_cross_polytope(spec.k, spec.d)
        case GeneratorKind.SIMPLEX:
            return gen_simplex_vertices(spec.d)
        case GeneratorKind.EXTREMAL_COLORFUL:
            return gen_extremal_colorful(spec.d, spec.k, spec.tight)
        case GeneratorKind.OPTIMAL_SIZE:
            return gen_optimal_size_example(spec.k, spec.d)
        case GeneratorKind.RANDOM_PLANTED:
            n_colors = spec.colors or spec.d + spec.k
            extra = spec.sizes if spec.sizes is not None else spec.extra
            return gen_random_planted(spec.d, spec.k, n_colors, extra, spec.seed)
        case GeneratorKind.RANDOM_COLORS:
            n_colors = spec.colors or spec.d + spec.k
            return gen_random_colors(spec.d, n_colors, spec.size, spec.seed)
        case GeneratorKind.RANDOM_POINTED:
            n_colors = spec.colors or spec.d + spec.k
            return gen_random_pointed(spec.d, n_colors, spec.size, spec.seed)
    raise InputError(f"Unknown generator kind: {spec.kind}")
