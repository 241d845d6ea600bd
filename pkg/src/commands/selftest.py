"""Acceptance checks run by ``selftest``.

Every check is deterministic: random instances are drawn from fixed seeds.
"""
from itertools import combinations
from typing import Callable

import structlog

from src.commands.schemas import CheckSchema, InstanceDocument
from src.commands.storage import dump_document
from src.geometry.cone import lineality_space, pos_membership, solution_dimension
from src.geometry.gen import (
    gen_cross_polytope,
    blocked_color,
    gen_extremal_colorful,
    gen_random_colors,
    gen_random_planted,
    gen_random_pointed,
    gen_simplex_vertices,
)
from src.geometry.oracles import lineality_by_circuits, lineality_by_elimination
from src.geometry.rainbow import ColoredSystem
from src.geometry.reay import reay_decompose, verify_decomposition
from src.geometry.verify import (
    Verdict,
    helly_numbers,
    lemma_inequality_violations,
    lift_to_polyhedra,
    verify_colorful_lineality,
    verify_colorful_solutions,
    verify_nonhomogeneous,
)

logger = structlog.get_logger(__name__)

FORMULA_MAX_D = 12


class _Failure(Exception):
    pass


def _expect(condition: bool, detail: str) -> None:
    if not condition:
        raise _Failure(detail)


def check_formulas(max_d: int, instances: int, vectors_per_color: int, jobs: int) -> int:
    count = 0
    for d in range(1, FORMULA_MAX_D + 1):
        _expect(helly_numbers(d, d).m == d + 1, f"m({d},{d}) != {d + 1}")
        for k in range(1, d):
            _expect(helly_numbers(k, d).h == helly_numbers(d - k, d).m, f"h({k},{d}) != m({d - k},{d})")
            _expect(not lemma_inequality_violations(k, d), f"inequality fails for k={k}, d={d}")
            count += 1
    return count


def check_extremal_sets(max_d: int, instances: int, vectors_per_color: int, jobs: int) -> int:
    count = 0
    for d in range(2, max_d + 1):
        for k in range(0, d):
            cross = gen_cross_polytope(k, d)
            _expect(lineality_space(cross).subspace.dim == k + 1, f"cross-polytope k={k}, d={d}")
            for i in range(len(cross)):
                _expect(
                    lineality_space(cross.without(i)).subspace.dim <= k,
                    f"cross-polytope deletion {i}, k={k}, d={d}",
                )
            count += 1
        simplex = gen_simplex_vertices(d)
        _expect(lineality_space(simplex).subspace.dim == d, f"simplex d={d}")
        for size in range(1, d + 1):
            for indices in combinations(range(d + 1), size):
                _expect(
                    lineality_space(simplex.subset(indices)).subspace.dim == 0,
                    f"simplex subset {indices}, d={d}",
                )
        count += 1
    return count


def check_color_tightness(max_d: int, instances: int, vectors_per_color: int, jobs: int) -> int:
    count = 0
    for d in range(2, max_d + 1):
        for k in range(1, d):
            system = gen_extremal_colorful(d, k + 1)
            lineality = verify_colorful_lineality(system, k, enforce_color_count=False, jobs=jobs)
            solutions = verify_colorful_solutions(system, d - k, enforce_color_count=False, jobs=jobs)
            for report in (lineality, solutions):
                _expect(
                    report.verdict == Verdict.TIGHTNESS_WITNESS,
                    f"extremal d={d}, k={k + 1}, {report.mode.value}: {report.verdict.value}",
                )
            count += 1
    return count


def check_reay(max_d: int, instances: int, vectors_per_color: int, jobs: int) -> int:
    count = 0
    for d in range(1, max_d + 1):
        for k in range(1, d + 1):
            for seed in range(instances):
                system = gen_random_planted(d, k, d + k, seed % 2, seed)
                decomposition = reay_decompose(system, k)
                check = verify_decomposition(decomposition, system, k, strong=True)
                _expect(check.passed, f"d={d}, k={k}, seed={seed}: {check.failed_clause}")
                _expect(decomposition.m <= k, f"d={d}, k={k}, seed={seed}: m > k")
                count += 1
    return count


def _mixed_system(d: int, k: int, n_colors: int, size: int, seed: int) -> ColoredSystem:
    """Planted colors (lineality d - k) and free random colors, alternating by seed."""
    planted = gen_random_planted(d, d - k, n_colors, max(0, size - (d - k + 1)), seed)
    free = gen_random_colors(d, n_colors, size, seed)
    colors = tuple(
        planted.colors[i] if (i + seed) % 3 else free.colors[i] for i in range(n_colors)
    )
    return ColoredSystem(colors, d)


def check_colorful_theorems(max_d: int, instances: int, vectors_per_color: int, jobs: int) -> int:
    count = 0
    for d in range(2, max_d + 1):
        for k in range(1, d):
            for seed in range(instances):
                system = _mixed_system(d, k, 2 * d - k + 1, vectors_per_color, seed)
                solutions = verify_colorful_solutions(system, k, jobs=jobs)
                lineality = verify_colorful_lineality(system, d - k, jobs=jobs)
                where = f"d={d}, k={k}, seed={seed}"
                _expect(solutions.verdict != Verdict.COUNTEREXAMPLE, f"solutions counterexample {where}")
                _expect(lineality.verdict != Verdict.COUNTEREXAMPLE, f"lineality counterexample {where}")
                _expect(
                    solutions.verdict == lineality.verdict
                    and solutions.violation == lineality.violation
                    and solutions.color == lineality.color,
                    f"duality mismatch {where}",
                )
                count += 1
    return count


def check_pointed_colors(max_d: int, instances: int, vectors_per_color: int, jobs: int) -> int:
    """Every rainbow selection is pointed, so the verdict comes from the blocked color."""
    count = 0
    for d in range(2, max_d + 1):
        size = 2 if d <= 3 else 1
        for k in range(1, d):
            n_colors = 2 * d - k + 1
            for seed in range(min(instances, n_colors)):
                system = gen_random_pointed(d, n_colors, size, seed)
                expected = 1 if blocked_color(n_colors, seed) == 0 else 0
                reports = (
                    verify_colorful_solutions(system, k, jobs=jobs),
                    verify_colorful_lineality(system, d - k, jobs=jobs),
                    verify_nonhomogeneous(lift_to_polyhedra(system), k, jobs=jobs),
                )
                for report in reports:
                    _expect(
                        report.verdict == Verdict.CONCLUSION_HOLDS and report.color == expected,
                        f"pointed d={d}, k={k}, seed={seed}, {report.mode.value}: {report.verdict.value}",
                    )
                count += 1
    return count


def check_oracles(max_d: int, instances: int, vectors_per_color: int, jobs: int) -> int:
    count = 0
    for d in range(1, max_d + 1):
        for seed in range(instances):
            planted = gen_random_planted(d, 1 + seed % d, 1, seed % 3, seed).colors[0]
            free = gen_random_colors(d, 1, 2 + seed % 4, seed).colors[0]
            for vectors in (planted, free):
                expected = lineality_space(vectors).subspace
                _expect(lineality_by_circuits(vectors) == expected, f"circuits d={d}, seed={seed}")
                _expect(lineality_by_elimination(vectors) == expected, f"elimination d={d}, seed={seed}")
                for v in free:
                    member, certificate = pos_membership(vectors, v)
                    _expect(
                        not member or (certificate is not None and certificate.verify(vectors)),
                        f"certificate d={d}, seed={seed}",
                    )
                count += 1
    return count


def check_nonhomogeneous(max_d: int, instances: int, vectors_per_color: int, jobs: int) -> int:
    count = 0
    for d in range(2, max_d + 1):
        for k in range(1, d):
            for seed in range(instances):
                system = _mixed_system(d, k, 2 * d - k + 1, vectors_per_color, seed)
                homogeneous = verify_colorful_solutions(system, k, jobs=jobs)
                families = lift_to_polyhedra(system)
                lifted = verify_nonhomogeneous(families, k, jobs=jobs)
                where = f"d={d}, k={k}, seed={seed}"
                _expect(
                    lifted.verdict == homogeneous.verdict
                    and lifted.violation == homogeneous.violation,
                    f"lifted verdict differs {where}",
                )
                shift = gen_random_colors(d, 1, 1, seed).colors[0][0]
                common = [[p.translated(shift) for p in fam] for fam in families]
                _expect(
                    verify_nonhomogeneous(common, k, jobs=jobs).verdict == lifted.verdict,
                    f"common translation changes verdict {where}",
                )
                shifts = gen_random_colors(d, len(families), max(len(f) for f in families), seed + 1)
                moved = [
                    [p.translated(shifts.colors[c][i]) for i, p in enumerate(fam)]
                    for c, fam in enumerate(families)
                ]
                report = verify_nonhomogeneous(moved, k, jobs=jobs)
                _expect(report.verdict != Verdict.COUNTEREXAMPLE, f"counterexample after shifts {where}")
                if report.verdict != Verdict.HYPOTHESIS_FAILS:
                    _expect(
                        report.color_values
                        == tuple(solution_dimension(c) for c in system.colors),
                        f"family cone dimensions changed {where}",
                    )
                count += 1
    return count


def check_determinism(max_d: int, instances: int, vectors_per_color: int, jobs: int) -> int:
    for seed in range(instances):
        first = gen_random_planted(max_d, 1, max_d + 1, 1, seed)
        second = gen_random_planted(max_d, 1, max_d + 1, 1, seed)
        _expect(
            dump_document(InstanceDocument.from_system(first))
            == dump_document(InstanceDocument.from_system(second)),
            f"seed {seed} is not reproducible",
        )
    return instances


CHECKS: list[tuple[str, Callable[[int, int, int, int], int]]] = [
    ("formulas", check_formulas),
    ("extremal sets", check_extremal_sets),
    ("color count tightness", check_color_tightness),
    ("reay decomposition", check_reay),
    ("colorful theorems", check_colorful_theorems),
    ("pointed colors", check_pointed_colors),
    ("lineality oracles", check_oracles),
    ("nonhomogeneous reduction", check_nonhomogeneous),
    ("determinism", check_determinism),
]


def run_selftest(
    max_d: int, instances: int, vectors_per_color: int, jobs: int = 1
) -> list[CheckSchema]:
    results = []
    for name, check in CHECKS:
        try:
            count = check(max_d, instances, vectors_per_color, jobs)
        except _Failure as e:
            logger.error("selftest: check failed", check=name, detail=str(e))
            results.append(CheckSchema(name=name, passed=False, detail=str(e)))
            continue
        logger.info("selftest: check passed", check=name, instances=count)
        results.append(CheckSchema(name=name, passed=True, instances=count))
    return results
