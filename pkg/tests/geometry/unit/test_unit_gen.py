import pytest
from pydantic import ValidationError

from src.geometry.cone import VectorSet, lineality_space
from src.geometry.exceptions import InputError
from src.geometry.gen import (
    DENOMINATOR_BOUND,
    NUMERATOR_BOUND,
    GeneratorKind,
    GeneratorSpec,
    blocked_color,
    color_seed,
    gen_cross_polytope,
    gen_extremal_colorful,
    gen_optimal_size_example,
    gen_random_colors,
    gen_random_planted,
    gen_random_pointed,
    gen_simplex_vertices,
    generate,
)
from src.geometry.rainbow import ColoredSystem, iter_rainbow_selections
from src.geometry.verify import Verdict, verify_colorful_lineality
from tests.geometry.unit.conftest import make_set


def test_cross_polytope_order():
    assert gen_cross_polytope(1, 2) == make_set((1, 0), (-1, 0), (0, 1), (0, -1))
    assert gen_cross_polytope(0, 3) == make_set((1, 0, 0), (-1, 0, 0))
    with pytest.raises(InputError):
        gen_cross_polytope(2, 2)


def test_simplex_vertices():
    assert gen_simplex_vertices(2) == make_set((1, 0), (0, 1), (-1, -1))
    assert lineality_space(gen_simplex_vertices(4)).subspace.dim == 4


def test_extremal_small_cases():
    assert gen_extremal_colorful(1, 1) == ColoredSystem((make_set((1,), (-1,)),), 1)
    system = gen_extremal_colorful(2, 1)
    assert system.colors == (
        make_set((1, 0), (-1, 0)),
        make_set((1, 1), (0, 1), (-1, -2)),
    )
    with pytest.raises(InputError):
        gen_extremal_colorful(2, 3)


@pytest.mark.parametrize("d, k, tight", [(2, 2, False), (3, 2, False), (3, 2, True), (3, 3, False)])
def test_extremal_colors_have_enough_lineality(d, k, tight):
    system = gen_extremal_colorful(d, k, tight)
    assert len(system) == d + k - 1
    dims = [lineality_space(color).subspace.dim for color in system.colors]
    assert all(dim >= k for dim in dims)
    if tight:
        assert all(dim == k for dim in dims)


@pytest.mark.parametrize("d, k, tight", [(2, 2, False), (3, 2, False), (3, 2, True)])
def test_extremal_systems_are_tight(d, k, tight):
    report = verify_colorful_lineality(
        gen_extremal_colorful(d, k, tight), k - 1, enforce_color_count=False
    )
    assert report.verdict == Verdict.TIGHTNESS_WITNESS


def test_extremal_rainbow_selections_stay_below_k():
    system = gen_extremal_colorful(3, 2)
    for size in range(1, len(system) + 1):
        for selection in iter_rainbow_selections(system, size):
            vectors = selection.vector_set(system)
            assert lineality_space(vectors).subspace.dim < 2, selection.picks


@pytest.mark.parametrize(
    "k, d, expected",
    [(0, 2, "simplex"), (1, 2, "cross"), (1, 3, "simplex"), (2, 3, "cross"), (1, 5, "simplex")],
)
def test_optimal_size_example(k, d, expected):
    example = gen_optimal_size_example(k, d)
    if expected == "simplex":
        assert example == gen_simplex_vertices(d)
    else:
        assert example == gen_cross_polytope(k, d)
    assert lineality_space(example).subspace.dim >= k + 1


def test_optimal_size_example_range():
    with pytest.raises(InputError):
        gen_optimal_size_example(2, 2)


def test_color_seed_is_stable_and_distinct():
    assert color_seed(3, 0) == color_seed(3, 0)
    assert color_seed(3, 0) != color_seed(3, 1)
    assert color_seed(3, "free:0") != color_seed(3, 0)


def test_planted_colors():
    system = gen_random_planted(3, 2, 5, [0, 1, 2, 0, 1], seed=7)
    assert len(system) == 5
    assert [len(color) for color in system.colors] == [3, 4, 5, 3, 4]
    for color in system.colors:
        assert lineality_space(color).subspace.dim >= 2
        assert not color.has_zero()


def test_planted_is_deterministic():
    assert gen_random_planted(2, 1, 3, 1, seed=11) == gen_random_planted(2, 1, 3, 1, seed=11)
    assert gen_random_planted(2, 1, 3, 1, seed=11) != gen_random_planted(2, 1, 3, 1, seed=12)


@pytest.mark.parametrize(
    "d, k, n_colors, extra",
    [(2, 0, 3, 0), (2, 3, 3, 0), (2, 1, 0, 0), (2, 1, 3, [1, 1]), (2, 1, 2, -1)],
)
def test_planted_rejects_bad_parameters(d, k, n_colors, extra):
    with pytest.raises(InputError):
        gen_random_planted(d, k, n_colors, extra, seed=0)


def test_random_colors_are_bounded_rationals():
    system = gen_random_colors(3, 4, 5, seed=2)
    assert len(system) == 4
    for color in system.colors:
        assert len(color) == 5
        assert not color.has_zero()
        for v in color:
            for c in v:
                assert abs(c.numerator) <= NUMERATOR_BOUND
                assert 1 <= c.denominator <= DENOMINATOR_BOUND
    assert system == gen_random_colors(3, 4, 5, seed=2)
    with pytest.raises(InputError):
        gen_random_colors(3, 4, 0, seed=2)


@pytest.mark.parametrize(
    "fields",
    [
        {"kind": "cross_polytope", "d": 2, "k": 2},
        {"kind": "optimal_size", "d": 2, "k": -1},
        {"kind": "extremal_colorful", "d": 2, "k": 0},
        {"kind": "random_planted", "d": 2, "k": 3},
        {"kind": "random_planted", "d": 2, "k": 1, "sizes": [1, -1, 0]},
        {"kind": "simplex", "d": 0},
        {"kind": "pyramid", "d": 2},
    ],
)
def test_generator_spec_validation(fields):
    with pytest.raises(ValidationError):
        GeneratorSpec(**fields)


def test_generate_dispatch():
    assert generate(GeneratorSpec(kind=GeneratorKind.SIMPLEX, d=2)) == gen_simplex_vertices(2)
    assert generate(GeneratorSpec(kind="cross_polytope", d=3, k=1)) == gen_cross_polytope(1, 3)
    assert isinstance(generate(GeneratorSpec(kind="optimal_size", d=3, k=1)), VectorSet)

    planted = generate(GeneratorSpec(kind="random_planted", d=2, k=2, seed=5))
    assert planted == gen_random_planted(2, 2, 4, 0, 5)

    sized = generate(GeneratorSpec(kind="random_planted", d=2, k=1, sizes=[0, 2, 1], extra=5))
    assert [len(color) for color in sized.colors] == [2, 4, 3]

    free = generate(GeneratorSpec(kind="random_colors", d=2, k=1, colors=5, size=2, seed=3))
    assert free == gen_random_colors(2, 5, 2, 3)

    pointed = generate(GeneratorSpec(kind="random_pointed", d=3, k=1, size=2, seed=4))
    assert pointed == gen_random_pointed(3, 4, 2, 4)


@pytest.mark.parametrize("seed", range(3))
def test_random_pointed_colors(seed):
    system = gen_random_pointed(3, 5, 4, seed)
    blocked = blocked_color(5, seed)
    assert system.colors[blocked] == gen_cross_polytope(2, 3)
    for c, color in enumerate(system.colors):
        if c == blocked:
            continue
        assert len(color) == 4
        assert all(x > 0 for v in color for x in v)
        assert lineality_space(color).subspace.dim == 0
    assert gen_random_pointed(3, 5, 4, seed) == system


def test_random_pointed_rejects_bad_parameters():
    with pytest.raises(InputError):
        gen_random_pointed(1, 3, 2, 0)
    with pytest.raises(InputError):
        gen_random_pointed(2, 0, 2, 0)
