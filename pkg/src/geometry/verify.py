"""Colorful Helly verifiers.

Each verifier runs in two phases. Phase 1 checks the hypothesis on every
rainbow sub-selection up to the Helly number; Phase 2 looks for a color
satisfying the conclusion. A failed Phase 2 after a passed Phase 1 with the
theorem's number of colors would contradict the theorem and is reported as
a counterexample.

All violations searched by Phase 1 are upward closed (adding vectors or
polyhedra can only make things worse), so a single scan at the largest size
decides whether a violation exists. The reported witness is always the first
violation in the global order (size, colors, indices).
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import chain, combinations, islice, product
from typing import Callable, Hashable, Iterable, Iterator, Sequence

import structlog

from src.geometry.cone import (
    VectorSet,
    lineality_space,
    pos_membership,
    solution_dimension,
)
from src.geometry.exceptions import InputError, InvariantBreachError
from src.geometry.rainbow import ColoredSystem, RainbowSelection
from src.geometry.ratlin import Vector, add, dot, rank, zero_vector
from src.geometry.simplex import find_nonnegative_solution

logger = structlog.get_logger(__name__)

Picks = tuple[tuple[int, int], ...]

_CHUNK_SIZE = 256


@dataclass(frozen=True)
class HellyParameters:
    d: int
    k: int
    m: int
    h: int


def helly_numbers(k: int, d: int) -> HellyParameters:
    """m(k,d) = max{d+1, 2(d-k+1)} and h(k,d) = max{d+1, 2(k+1)}.

    Raises:
        InputError: Unless 1 <= k <= d.
    """
    if not 1 <= k <= d:
        raise InputError(f"Helly numbers need 1 <= k <= d, got k={k}, d={d}")
    return HellyParameters(
        d=d, k=k, m=max(d + 1, 2 * (d - k + 1)), h=max(d + 1, 2 * (k + 1))
    )


def lemma_inequality_violations(k: int, d: int) -> list[int]:
    """Values j in 2..k+1 (with k+1 <= d) where jk/(j-1) + j exceeds h(k,d).

    The list is empty whenever the inequality holds, which it always should.
    """
    h = helly_numbers(k, d).h
    return [
        j
        for j in range(2, min(k + 1, d) + 1)
        if Fraction(j * k, j - 1) + j > h
    ]


class Verdict(str, Enum):
    HYPOTHESIS_FAILS = "hypothesis_fails"
    CONCLUSION_HOLDS = "conclusion_holds"
    COUNTEREXAMPLE = "counterexample"
    TIGHTNESS_WITNESS = "tightness_witness"


class VerifyMode(str, Enum):
    SOLUTIONS = "solutions"
    LINEALITY = "lineality"
    POLY = "poly"
    MONO = "mono"


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of a verifier with the data needed to re-check it.

    Attributes:
        mode: Which theorem was checked
        verdict: Result of both phases
        k: Parameter of the theorem
        cap: Largest sub-selection size examined by Phase 1 (None: no cap)
        violation: First violating rainbow sub-selection, if any
        subset: First violating subset (monochromatic mode)
        violation_value: Measure of the violating selection
        color: Index of the first color satisfying the conclusion
        color_values: Measure of every color, in order
    """

    mode: VerifyMode
    verdict: Verdict
    k: int
    cap: int | None
    violation: RainbowSelection | None = None
    subset: tuple[int, ...] | None = None
    violation_value: int | None = None
    color: int | None = None
    color_values: tuple[int, ...] = ()


@dataclass(frozen=True)
class Polyhedron:
    """{x : <b_i, x> <= c_i for all i}; a cone when every offset is zero."""

    normals: tuple[Vector, ...]
    offsets: tuple[Fraction, ...]
    ambient_dim: int

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise InputError("Ambient dimension must be positive")
        if len(self.normals) != len(self.offsets):
            raise InputError(
                f"{len(self.normals)} normals but {len(self.offsets)} offsets"
            )
        for b in self.normals:
            if len(b) != self.ambient_dim:
                raise InputError(
                    f"Normal of length {len(b)} in dimension {self.ambient_dim}"
                )

    @classmethod
    def cone(cls, normals: Iterable[Vector], ambient_dim: int) -> "Polyhedron":
        normals = tuple(normals)
        return cls(normals, (Fraction(0),) * len(normals), ambient_dim)

    def contains(self, x: Vector) -> bool:
        return all(dot(b, x) <= c for b, c in zip(self.normals, self.offsets))

    def recedes_along(self, direction: Vector) -> bool:
        return all(dot(b, direction) <= 0 for b in self.normals)

    def translated(self, t: Vector) -> "Polyhedron":
        """t + P, i.e. offsets c_i + <b_i, t>."""
        return Polyhedron(
            self.normals,
            tuple(c + dot(b, t) for b, c in zip(self.normals, self.offsets)),
            self.ambient_dim,
        )

    def feasible_point(self) -> Vector | None:
        return intersection_point([self])


def _check_same_dimension(polys: Sequence[Polyhedron]) -> int:
    if not polys:
        raise InputError("At least one polyhedron is required")
    d = polys[0].ambient_dim
    if any(p.ambient_dim != d for p in polys):
        raise InputError("Polyhedra of different ambient dimensions")
    return d


def intersection_point(polys: Sequence[Polyhedron]) -> Vector | None:
    """A point in the intersection, or None when it is empty.

    Solved as Bu - Bw + s = c with u, w, s >= 0 and x = u - w.
    """
    d = _check_same_dimension(polys)
    normals = [b for p in polys for b in p.normals]
    offsets = [c for p in polys for c in p.offsets]
    if not normals:
        return zero_vector(d)
    m = len(normals)
    rows = [
        list(b) + [-x for x in b] + [Fraction(1 if j == i else 0) for j in range(m)]
        for i, b in enumerate(normals)
    ]
    solution = find_nonnegative_solution(rows, offsets)
    if solution is None:
        return None
    point = tuple(solution[j] - solution[d + j] for j in range(d))
    if not all(p.contains(point) for p in polys):
        raise InvariantBreachError("Feasible point violates a constraint")
    return point


def _recession_dimension(polys: Sequence[Polyhedron], d: int) -> int:
    normals = tuple(
        dict.fromkeys(b for p in polys for b in p.normals if any(b))
    )
    if not normals:
        return d
    return solution_dimension(VectorSet(normals, d))


def polyhedron_cone_dimension(polys: Sequence[Polyhedron]) -> int:
    """Largest k such that the intersection contains a translate of a
    k-dimensional cone.

    Zero for an empty intersection; otherwise the number of linearly
    independent directions of the joint recession cone.

    Raises:
        InputError: If the polyhedra live in different dimensions.
    """
    d = _check_same_dimension(polys)
    if intersection_point(polys) is None:
        return 0
    return _recession_dimension(polys, d)


def family_cone_dimension(family: Sequence[Polyhedron]) -> int:
    """Dimension of the largest cone C whose translates fit into every member.

    Zero if some member is empty; otherwise the solution dimension of all
    normals of the family pooled together.
    """
    d = _check_same_dimension(family)
    if any(p.feasible_point() is None for p in family):
        return 0
    return _recession_dimension(family, d)


def contains_cone(polyhedron: Polyhedron, apex: Vector, generators: Sequence[Vector]) -> bool:
    """True iff apex + pos(generators) lies in the polyhedron."""
    return polyhedron.contains(apex) and all(
        polyhedron.recedes_along(g) for g in generators
    )


def shift_cone_apex(
    polyhedron: Polyhedron,
    apex: Vector,
    generators: Sequence[Vector],
    point: Vector,
) -> Vector:
    """Move the apex of a contained cone to any point of the polyhedron.

    Returns:
        ``point``, after checking that point + pos(generators) still fits.

    Raises:
        InputError: If the cone at ``apex`` does not fit or ``point`` is outside.
    """
    if not contains_cone(polyhedron, apex, generators):
        raise InputError("The cone at the given apex is not contained")
    if not polyhedron.contains(point):
        raise InputError("The new apex lies outside the polyhedron")
    if not contains_cone(polyhedron, point, generators):
        raise InvariantBreachError("Shifted cone left the polyhedron")
    return point


def common_apex(apexes: Sequence[Vector], generators: Sequence[Vector], d: int) -> Vector:
    """c_1 + ... + c_n, an apex whose cone lies in every c_i + pos(generators)
    when each c_i lies in pos(generators).

    Raises:
        InputError: If some c_i is outside pos(generators).
    """
    cone = VectorSet(tuple(generators), d)
    total = zero_vector(d)
    for c in apexes:
        if not pos_membership(cone, c)[0]:
            raise InputError("Apex outside the cone")
        total = add(total, c)
    return total


@dataclass(frozen=True)
class _SolutionsViolation:
    d: int
    k: int

    def __call__(self, vectors: tuple[Vector, ...]) -> bool:
        if rank(vectors) < self.d - self.k + 1:
            return False
        return solution_dimension(VectorSet(vectors, self.d)) < self.k


@dataclass(frozen=True)
class _LinealityViolation:
    d: int
    k: int

    def __call__(self, vectors: tuple[Vector, ...]) -> bool:
        if rank(vectors) < self.k + 1:
            return False
        return lineality_space(VectorSet(vectors, self.d)).subspace.dim > self.k


@dataclass(frozen=True)
class _ConeViolation:
    k: int

    def __call__(self, polys: tuple[Polyhedron, ...]) -> bool:
        return polyhedron_cone_dimension(polys) < self.k


def _combo_picks(counts: Sequence[int], combo: tuple[int, ...]) -> Iterator[Picks]:
    for indices in product(*(range(counts[c]) for c in combo)):
        yield tuple(zip(combo, indices))


def _chunked(selections: Iterator[Picks], size: int) -> Iterator[list[Picks]]:
    while True:
        chunk = list(islice(selections, size))
        if not chunk:
            return
        yield chunk


_worker_state: dict[str, object] = {}


def _init_worker(predicate: Callable, items: Sequence[Sequence[Hashable]]) -> None:
    _worker_state["predicate"] = predicate
    _worker_state["items"] = items


def _first_hit(
    chunk: Iterable[Picks],
    predicate: Callable,
    items: Sequence[Sequence[Hashable]],
    memo: dict,
) -> int | None:
    for position, picks in enumerate(chunk):
        selected = tuple(dict.fromkeys(items[c][i] for c, i in picks))
        key = frozenset(selected)
        hit = memo.get(key)
        if hit is None:
            hit = memo[key] = predicate(selected)
        if hit:
            return position
    return None


def _scan_chunk(chunk: list[Picks]) -> int | None:
    return _first_hit(chunk, _worker_state["predicate"], _worker_state["items"], {})


class PhaseOneScanner:
    """Finds the first rainbow sub-selection violating a hypothesis.

    Violations are upward closed, so existence is decided on maximal
    selections only: colors equal as sets form a group, and a group of s
    colors over n distinct items contributes each set of min(s, n) items.
    Copies of one color therefore cost one candidate per item set instead
    of the full product. Only color combinations known to hold a violation
    are walked in index order.

    With ``jobs > 1`` chunks of selections are evaluated in worker processes;
    results are consumed in order, so the answer does not depend on ``jobs``.

    Attributes:
        examined: Selections handed to the predicate so far, memo hits included
    """

    def __init__(
        self,
        items: Sequence[Sequence[Hashable]],
        predicate: Callable,
        jobs: int = 1,
    ):
        self.items = [tuple(color) for color in items]
        self.counts = [len(color) for color in self.items]
        self.predicate = predicate
        self.jobs = max(1, jobs)
        self.examined = 0
        self._nonempty = tuple(c for c, n in enumerate(self.counts) if n)
        self._keys = [frozenset(color) for color in self.items]
        self._positions = [
            {item: i for i, item in reversed(list(enumerate(color)))}
            for color in self.items
        ]
        self._memo: dict = {}
        self._pool: ProcessPoolExecutor | None = None

    def __enter__(self) -> "PhaseOneScanner":
        if self.jobs > 1:
            self._pool = ProcessPoolExecutor(
                max_workers=self.jobs,
                initializer=_init_worker,
                initargs=(self.predicate, self.items),
            )
        return self

    def __exit__(self, *exc_info) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def _search(self, selections: Iterator[Picks]) -> Picks | None:
        chunks = _chunked(selections, _CHUNK_SIZE)
        if self._pool is None:
            hits = (
                (chunk, _first_hit(chunk, self.predicate, self.items, self._memo))
                for chunk in chunks
            )
        else:
            hits = (
                pair
                for window in iter(lambda: list(islice(chunks, self.jobs * 2)), [])
                for pair in zip(window, self._pool.map(_scan_chunk, window))
            )
        for chunk, hit in hits:
            if hit is not None:
                self.examined += hit + 1
                return chunk[hit]
            self.examined += len(chunk)
        return None

    def _maximal_picks(self, combo: tuple[int, ...]) -> Iterator[Picks]:
        groups: dict[frozenset, list[int]] = {}
        for c in combo:
            groups.setdefault(self._keys[c], []).append(c)
        options = []
        for colors in groups.values():
            pool = tuple(dict.fromkeys(self.items[colors[0]]))
            chosen = min(len(colors), len(pool))
            options.append([
                tuple(
                    (c, self._positions[c][pool[subset[min(j, chosen - 1)]]])
                    for j, c in enumerate(colors)
                )
                for subset in combinations(range(len(pool)), chosen)
            ])
        for parts in product(*options):
            yield tuple(sorted(chain.from_iterable(parts)))

    def exists(self, size: int) -> bool:
        """Whether some selection of exactly ``size`` colors violates."""
        candidates = chain.from_iterable(
            self._maximal_picks(combo) for combo in combinations(self._nonempty, size)
        )
        return self._search(candidates) is not None

    def first_violation(self, size: int) -> Picks | None:
        """First violating selection of exactly ``size`` colors, in
        (colors, indices) order."""
        for combo in combinations(self._nonempty, size):
            if self._search(self._maximal_picks(combo)) is None:
                continue
            found = self._search(_combo_picks(self.counts, combo))
            if found is None:
                raise InvariantBreachError(
                    f"Colors {combo} hold a violation but no selection of them violates"
                )
            return found
        return None

    def scan(self, lower: int, cap: int) -> Picks | None:
        """First violation of size in [lower, cap], or None."""
        low = max(lower, 1)
        top = min(cap, len(self._nonempty))
        if top < low or not self.exists(top):
            return None
        # adding a color never removes a violation: bisect for the smallest size
        while low < top:
            middle = (low + top) // 2
            if self.exists(middle):
                top = middle
            else:
                low = middle + 1
        found = self.first_violation(top)
        if found is None:
            raise InvariantBreachError(f"No violation of size {top} after bisection")
        return found


def _check_k(k: int, d: int) -> None:
    if not 1 <= k <= d - 1:
        raise InputError(f"k must satisfy 1 <= k <= d - 1, got k={k}, d={d}")


def _final_verdict(holds: int | None, enforce_color_count: bool, mode: VerifyMode) -> Verdict:
    if holds is not None:
        return Verdict.CONCLUSION_HOLDS
    if enforce_color_count:
        logger.error("verify: theorem counterexample", mode=mode.value)
        return Verdict.COUNTEREXAMPLE
    return Verdict.TIGHTNESS_WITNESS


def _run_colorful(
    mode: VerifyMode,
    items: Sequence[Sequence[Hashable]],
    k: int,
    cap: int | None,
    lower: int,
    violates: Callable,
    measure: Callable,
    satisfies: Callable[[int], bool],
    color_measure: Callable[[int], int],
    enforce_color_count: bool,
    jobs: int,
) -> VerificationReport:
    logger.info(
        f"verify_{mode.value}: started",
        colors=len(items),
        k=k,
        cap=cap,
        jobs=jobs,
    )
    limit = len(items) if cap is None else cap
    with PhaseOneScanner(items, violates, jobs) as scanner:
        found = scanner.scan(lower, limit)
    if found is not None:
        selected = tuple(dict.fromkeys(items[c][i] for c, i in found))
        report = VerificationReport(
            mode=mode,
            verdict=Verdict.HYPOTHESIS_FAILS,
            k=k,
            cap=cap,
            violation=RainbowSelection(found),
            violation_value=measure(selected),
        )
    else:
        values = tuple(color_measure(i) for i in range(len(items)))
        holds = next((i for i, v in enumerate(values) if satisfies(v)), None)
        report = VerificationReport(
            mode=mode,
            verdict=_final_verdict(holds, enforce_color_count, mode),
            k=k,
            cap=cap,
            color=holds,
            color_values=values,
        )
    logger.info(f"verify_{mode.value}: completed", verdict=report.verdict.value)
    return report


def verify_colorful_solutions(
    system: ColoredSystem,
    k: int,
    enforce_color_count: bool = True,
    jobs: int = 1,
) -> VerificationReport:
    """Colorful Helly theorem for homogeneous systems <a, x> <= 0.

    If every rainbow sub-selection of size at most m(k,d) has at least k
    linearly independent solutions, some color has too.

    Args:
        system: d + (d - k) + 1 colors of nonzero vectors (any number when
            ``enforce_color_count`` is off)
        k: 1 <= k <= d - 1
        enforce_color_count: Off for optimality demonstrations; Phase 1 then
            has no size cap and a failed Phase 2 is a tightness witness
        jobs: Worker processes for Phase 1

    Raises:
        InputError: For zero vectors, a bad k or a wrong color count.
    """
    d = system.ambient_dim
    _check_k(k, d)
    if system.has_zero():
        raise InputError("Homogeneous systems must consist of nonzero vectors")
    expected = 2 * d - k + 1
    if enforce_color_count and len(system) != expected:
        raise InputError(f"Expected {expected} colors, got {len(system)}")
    cap = helly_numbers(k, d).m if enforce_color_count else None
    return _run_colorful(
        VerifyMode.SOLUTIONS,
        [color.vectors for color in system.colors],
        k,
        cap,
        lower=d - k + 2,
        violates=_SolutionsViolation(d, k),
        measure=lambda vectors: solution_dimension(VectorSet(vectors, d)),
        satisfies=lambda value: value >= k,
        color_measure=lambda i: solution_dimension(system.colors[i]),
        enforce_color_count=enforce_color_count,
        jobs=jobs,
    )


def verify_colorful_lineality(
    system: ColoredSystem,
    k: int,
    enforce_color_count: bool = True,
    jobs: int = 1,
) -> VerificationReport:
    """Colorful Helly theorem for lineality spaces.

    If dim lpos R <= k for every rainbow sub-selection R of size at most
    h(k,d), some color has dim lpos <= k.

    Raises:
        InputError: For a bad k or a wrong color count.
    """
    d = system.ambient_dim
    _check_k(k, d)
    expected = d + k + 1
    if enforce_color_count and len(system) != expected:
        raise InputError(f"Expected {expected} colors, got {len(system)}")
    cap = helly_numbers(k, d).h if enforce_color_count else None
    return _run_colorful(
        VerifyMode.LINEALITY,
        [color.vectors for color in system.colors],
        k,
        cap,
        lower=k + 2,
        violates=_LinealityViolation(d, k),
        measure=lambda vectors: lineality_space(VectorSet(vectors, d)).subspace.dim,
        satisfies=lambda value: value <= k,
        color_measure=lambda i: lineality_space(system.colors[i]).subspace.dim,
        enforce_color_count=enforce_color_count,
        jobs=jobs,
    )


def verify_nonhomogeneous(
    families: Sequence[Sequence[Polyhedron]],
    k: int,
    enforce_color_count: bool = True,
    jobs: int = 1,
) -> VerificationReport:
    """Colorful Helly theorem for polyhedra containing translated cones.

    Phase 1 asks every rainbow choice of at most m(k,d) polyhedra to have an
    intersection containing a k-dimensional cone; Phase 2 looks for a family
    whose members all contain translates of one common k-dimensional cone.

    Raises:
        InputError: For an empty family, mixed dimensions, a bad k or a wrong
            family count.
    """
    if not families or any(not family for family in families):
        raise InputError("Families must be nonempty")
    d = _check_same_dimension([p for family in families for p in family])
    _check_k(k, d)
    expected = 2 * d - k + 1
    if enforce_color_count and len(families) != expected:
        raise InputError(f"Expected {expected} families, got {len(families)}")
    cap = helly_numbers(k, d).m if enforce_color_count else None
    return _run_colorful(
        VerifyMode.POLY,
        [tuple(family) for family in families],
        k,
        cap,
        lower=1,
        violates=_ConeViolation(k),
        measure=polyhedron_cone_dimension,
        satisfies=lambda value: value >= k,
        color_measure=lambda i: family_cone_dimension(families[i]),
        enforce_color_count=enforce_color_count,
        jobs=jobs,
    )


def verify_monochromatic(vectors: VectorSet, k: int, jobs: int = 1) -> VerificationReport:
    """Monochromatic form: if every B in A of size at most m(k,d) has k
    linearly independent solutions, so does A."""
    d = vectors.ambient_dim
    if not 1 <= k <= d:
        raise InputError(f"k must satisfy 1 <= k <= d, got k={k}, d={d}")
    if vectors.has_zero():
        raise InputError("Homogeneous systems must consist of nonzero vectors")
    cap = helly_numbers(k, d).m
    logger.info("verify_mono: started", size=len(vectors), k=k, cap=cap)
    # subsets of A are the rainbow sub-selections of singleton colors
    singletons = [(v,) for v in vectors]
    with PhaseOneScanner(singletons, _SolutionsViolation(d, k), jobs) as scanner:
        found = scanner.scan(d - k + 2, cap)
    if found is not None:
        subset = tuple(c for c, _ in found)
        report = VerificationReport(
            mode=VerifyMode.MONO,
            verdict=Verdict.HYPOTHESIS_FAILS,
            k=k,
            cap=cap,
            subset=subset,
            violation_value=solution_dimension(vectors.subset(subset)),
        )
    else:
        value = solution_dimension(vectors)
        report = VerificationReport(
            mode=VerifyMode.MONO,
            verdict=_final_verdict(0 if value >= k else None, True, VerifyMode.MONO),
            k=k,
            cap=cap,
            color=0 if value >= k else None,
            color_values=(value,),
        )
    logger.info("verify_mono: completed", verdict=report.verdict.value)
    return report


def lift_to_polyhedra(system: ColoredSystem) -> list[list[Polyhedron]]:
    """Each vector a becomes the halfspace {x : <a, x> <= 0}."""
    return [
        [Polyhedron.cone([a], system.ambient_dim) for a in color]
        for color in system.colors
    ]
