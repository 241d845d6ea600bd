from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.geometry.cone import VectorSet, lineality_space
from src.geometry.exceptions import InputError
from src.geometry.gen import (
    blocked_color,
    gen_extremal_colorful,
    gen_random_colors,
    gen_random_pointed,
)
from src.geometry.ratlin import to_vector
from src.geometry.verify import (
    PhaseOneScanner,
    Polyhedron,
    Verdict,
    VerifyMode,
    common_apex,
    contains_cone,
    family_cone_dimension,
    helly_numbers,
    intersection_point,
    lemma_inequality_violations,
    lift_to_polyhedra,
    polyhedron_cone_dimension,
    shift_cone_apex,
    verify_colorful_lineality,
    verify_colorful_solutions,
    verify_monochromatic,
    verify_nonhomogeneous,
)
from tests.geometry.unit.conftest import make_set, make_system

CROSS = [(1, 0), (-1, 0), (0, 1), (0, -1)]


def halfspace(normal, offset=0):
    return Polyhedron((to_vector(normal),), (Fraction(offset),), len(normal))


@pytest.fixture
def four_crosses():
    return make_system(CROSS, CROSS, CROSS, CROSS)


@pytest.mark.parametrize(
    "k, d, m, h",
    [(1, 2, 4, 4), (2, 2, 3, 6), (1, 3, 6, 4), (2, 3, 4, 6), (3, 3, 4, 8), (2, 5, 8, 6)],
)
def test_helly_numbers(k, d, m, h):
    numbers = helly_numbers(k, d)
    assert (numbers.m, numbers.h) == (m, h)


@pytest.mark.parametrize("k, d", [(0, 2), (3, 2)])
def test_helly_numbers_range(k, d):
    with pytest.raises(InputError):
        helly_numbers(k, d)


def test_helly_number_duality():
    for d in range(2, 13):
        assert helly_numbers(d, d).m == d + 1
        for k in range(1, d):
            assert helly_numbers(k, d).h == helly_numbers(d - k, d).m
            assert lemma_inequality_violations(k, d) == []


def test_polyhedron_cone_dimension():
    assert polyhedron_cone_dimension([halfspace((1, 0))]) == 2
    assert polyhedron_cone_dimension([halfspace((1, 0), -1), halfspace((-1, 0))]) == 0
    assert polyhedron_cone_dimension([halfspace((1, 0), 1), halfspace((-1, 0), 1)]) == 1
    assert polyhedron_cone_dimension([Polyhedron((), (), 3)]) == 3
    with pytest.raises(InputError):
        polyhedron_cone_dimension([halfspace((1, 0)), halfspace((1, 0, 0))])


def test_intersection_point():
    strip = [halfspace((1, 0), 1), halfspace((-1, 0), 1), halfspace((0, -1), -2)]
    point = intersection_point(strip)
    assert all(p.contains(point) for p in strip)
    assert intersection_point([halfspace((1, 1), -1), halfspace((-1, -1), 0)]) is None


def test_family_cone_dimension():
    assert family_cone_dimension([halfspace((1, 0), 5), halfspace((0, 1), -3)]) == 2
    assert family_cone_dimension([halfspace((1, 0), 5), halfspace((-1, 0), 2)]) == 1
    empty = Polyhedron((to_vector((1, 0)), to_vector((-1, 0))), (Fraction(-1), Fraction(0)), 2)
    assert family_cone_dimension([halfspace((1, 0)), empty]) == 0


def test_polyhedron_validation():
    with pytest.raises(InputError):
        Polyhedron((to_vector((1, 0)),), (), 2)
    with pytest.raises(InputError):
        Polyhedron((to_vector((1, 0)),), (Fraction(0),), 3)


def test_translation_moves_offsets():
    moved = halfspace((1, 2), 1).translated(to_vector((1, 1)))
    assert moved.offsets == (Fraction(4),)
    assert moved.contains(to_vector((2, 1)))


def test_shift_cone_apex():
    upper = halfspace((0, -1))
    generators = [to_vector((0, 1)), to_vector((1, 0))]
    assert contains_cone(upper, to_vector((0, 0)), generators)
    assert shift_cone_apex(upper, to_vector((0, 0)), generators, to_vector((5, 3))) == to_vector((5, 3))
    with pytest.raises(InputError):
        shift_cone_apex(upper, to_vector((0, -1)), generators, to_vector((5, 3)))
    with pytest.raises(InputError):
        shift_cone_apex(upper, to_vector((0, 0)), generators, to_vector((0, -1)))


def test_common_apex():
    generators = [to_vector((1, 0)), to_vector((0, 1))]
    apexes = [to_vector((1, 0)), to_vector((0, 2))]
    assert common_apex(apexes, generators, 2) == to_vector((1, 2))
    with pytest.raises(InputError):
        common_apex([to_vector((-1, 0))], generators, 2)


def test_identical_colors_satisfy_the_conclusion():
    system = make_system([(1, 0)], [(1, 0)], [(1, 0)], [(1, 0)])
    report = verify_colorful_solutions(system, 1)
    assert report.verdict == Verdict.CONCLUSION_HOLDS
    assert report.color == 0
    assert report.color_values == (2, 2, 2, 2)
    assert report.cap == 4


def test_cross_polytopes_fail_the_hypothesis(four_crosses):
    report = verify_colorful_lineality(four_crosses, 1)
    assert report.mode == VerifyMode.LINEALITY
    assert report.verdict == Verdict.HYPOTHESIS_FAILS
    assert report.violation.picks == ((0, 0), (1, 1), (2, 2), (3, 3))
    assert report.violation_value == 2
    assert report.color is None

    dual = verify_colorful_solutions(four_crosses, 1)
    assert dual.verdict == Verdict.HYPOTHESIS_FAILS
    assert dual.violation == report.violation
    assert dual.violation_value == 0


def test_extremal_system_is_a_tightness_witness():
    system = gen_extremal_colorful(2, 2)
    for verifier in (verify_colorful_solutions, verify_colorful_lineality):
        report = verifier(system, 1, enforce_color_count=False)
        assert report.verdict == Verdict.TIGHTNESS_WITNESS
        assert report.cap is None
        assert report.color is None


def test_counterexample_needs_the_theorem_color_count():
    system = gen_extremal_colorful(2, 2)
    with pytest.raises(InputError):
        verify_colorful_lineality(system, 1)
    with pytest.raises(InputError):
        verify_colorful_solutions(system, 1)


def test_verifier_input_checks(four_crosses):
    with pytest.raises(InputError):
        verify_colorful_solutions(four_crosses, 2)
    with pytest.raises(InputError):
        verify_colorful_solutions(make_system([(0, 0), (1, 0)], CROSS, CROSS, CROSS), 1)
    with pytest.raises(InputError):
        verify_nonhomogeneous([], 1)
    with pytest.raises(InputError):
        verify_monochromatic(make_set((1, 0)), 3)


def test_monochromatic_form():
    report = verify_monochromatic(make_set((1, 0), (0, 1), (-1, -1)), 1)
    assert report.verdict == Verdict.HYPOTHESIS_FAILS
    assert report.subset == (0, 1, 2)
    assert report.violation_value == 0

    report = verify_monochromatic(make_set((1, 0), (-1, 0), (0, 1)), 1)
    assert report.verdict == Verdict.CONCLUSION_HOLDS
    assert report.color_values == (1,)


def test_lifted_polyhedra_match_the_homogeneous_verdict(four_crosses):
    families = lift_to_polyhedra(four_crosses)
    assert len(families) == 4 and len(families[0]) == 4
    lifted = verify_nonhomogeneous(families, 1)
    homogeneous = verify_colorful_solutions(four_crosses, 1)
    assert lifted.verdict == homogeneous.verdict
    assert lifted.violation == homogeneous.violation


@pytest.mark.parametrize("seed", range(4))
def test_random_systems_never_contradict(seed):
    system = gen_random_colors(2, 4, 3, seed)
    solutions = verify_colorful_solutions(system, 1)
    lineality = verify_colorful_lineality(system, 1)
    assert solutions.verdict != Verdict.COUNTEREXAMPLE
    assert solutions.verdict == lineality.verdict
    assert solutions.violation == lineality.violation

    families = lift_to_polyhedra(system)
    lifted = verify_nonhomogeneous(families, 1)
    assert lifted.verdict == solutions.verdict

    shift = to_vector((3, "-1/2"))
    shifted = [[p.translated(shift) for p in family] for family in families]
    assert verify_nonhomogeneous(shifted, 1).verdict == lifted.verdict

    shifts = gen_random_colors(2, 4, 3, seed + 100)
    moved = [
        [p.translated(shifts.colors[c][i]) for i, p in enumerate(family)]
        for c, family in enumerate(families)
    ]
    assert verify_nonhomogeneous(moved, 1).verdict != Verdict.COUNTEREXAMPLE


def test_parallel_scan_matches_serial(four_crosses):
    system = gen_random_colors(2, 4, 3, 7)
    for instance in (system, four_crosses):
        serial = verify_colorful_lineality(instance, 1, jobs=1)
        parallel = verify_colorful_lineality(instance, 1, jobs=2)
        assert parallel == serial


@pytest.mark.parametrize("d, k", [(4, 3), (5, 4), (5, 2)])
def test_extremal_tightness_in_higher_dimensions(d, k):
    system = gen_extremal_colorful(d, k + 1)
    report = verify_colorful_lineality(system, k, enforce_color_count=False)
    assert report.verdict == Verdict.TIGHTNESS_WITNESS
    assert len(report.color_values) == d + k
    assert min(report.color_values) >= k + 1


def test_copies_of_one_color_are_scanned_once_per_item_set():
    d, k = 5, 4
    system = gen_extremal_colorful(d, k + 1)

    def violates(vectors):
        return lineality_space(VectorSet(vectors, d)).subspace.dim > k

    with PhaseOneScanner([color.vectors for color in system.colors], violates) as scanner:
        assert scanner.scan(k + 2, len(system)) is None
    # nine copies of ten vectors: one candidate per choice of nine of them
    assert scanner.examined == 10


def first_violation_by_enumeration(items, violates, lower, cap):
    for size in range(max(lower, 1), min(cap, len(items)) + 1):
        for combo in combinations(range(len(items)), size):
            for indices in product(*(range(len(items[c])) for c in combo)):
                picks = tuple(zip(combo, indices))
                if violates(tuple(dict.fromkeys(items[c][i] for c, i in picks))):
                    return picks
    return None


@st.composite
def repeated_colors(draw):
    base = draw(
        st.lists(
            st.lists(st.integers(min_value=1, max_value=6), min_size=1, max_size=4, unique=True),
            min_size=1,
            max_size=3,
        )
    )
    colors = []
    for color in base:
        for _ in range(draw(st.integers(min_value=1, max_value=2))):
            colors.append(tuple(draw(st.permutations(color))))
    return draw(st.permutations(colors))


@settings(max_examples=80, deadline=None)
@given(repeated_colors(), st.integers(min_value=1, max_value=4), st.integers(min_value=3, max_value=16), st.data())
def test_scan_reports_the_first_violation_in_order(items, lower, threshold, data):
    cap = data.draw(st.integers(min_value=1, max_value=len(items)))

    def violates(selected):
        return sum(selected) >= threshold

    with PhaseOneScanner(items, violates) as scanner:
        found = scanner.scan(lower, cap)
    assert found == first_violation_by_enumeration(items, violates, lower, cap)


@pytest.mark.parametrize("d, k, seed", [(2, 1, 0), (2, 1, 1), (3, 1, 2), (3, 2, 0), (3, 2, 3)])
def test_pointed_colors_reach_the_conclusion(d, k, seed):
    n_colors = 2 * d - k + 1
    system = gen_random_pointed(d, n_colors, 2, seed)
    blocked = blocked_color(n_colors, seed)
    expected = 1 if blocked == 0 else 0

    solutions = verify_colorful_solutions(system, k)
    assert solutions.verdict == Verdict.CONCLUSION_HOLDS
    assert solutions.color == expected
    assert solutions.color_values == tuple(0 if c == blocked else d for c in range(n_colors))

    lineality = verify_colorful_lineality(system, d - k)
    assert lineality.verdict == Verdict.CONCLUSION_HOLDS
    assert lineality.color == expected
    assert lineality.color_values == tuple(d if c == blocked else 0 for c in range(n_colors))

    lifted = verify_nonhomogeneous(lift_to_polyhedra(system), k)
    assert lifted.verdict == Verdict.CONCLUSION_HOLDS
    assert lifted.color == expected
    assert lifted.color_values == solutions.color_values
