import pytest

from src.geometry.exceptions import InputError
from src.geometry.gen import gen_random_planted
from src.geometry.rainbow import RainbowSelection
from src.geometry.ratlin import Subspace, span, unit_vector
from src.geometry.reay import (
    Clause,
    ReayBlock,
    ReayDecomposition,
    reay_decompose,
    reay_decompose_weak,
    strengthen_decomposition,
    verify_decomposition,
)
from tests.geometry.unit.conftest import make_system

CROSS = [(1, 0), (-1, 0), (0, 1), (0, -1)]
SIMPLEX = [(1, 0), (0, 1), (-1, -1)]
LINE = span([unit_vector(0, 2)], 2)


def block(*picks):
    selection = RainbowSelection.from_pairs(picks)
    return ReayBlock(selection.colors, selection)


def decomposition(blocks, subspaces):
    return ReayDecomposition(tuple(blocks), tuple(subspaces))


@pytest.fixture
def four_crosses():
    return make_system(CROSS, CROSS, CROSS, CROSS)


def test_decompose_cross_polytopes(four_crosses):
    result = reay_decompose_weak(four_crosses, 2)
    assert result.m == 2
    assert [s.dim for s in result.block_subspaces] == [1, 2]
    assert result.blocks[0].selection.picks == ((0, 0), (1, 1))
    assert result.blocks[1].selection.picks == ((2, 2), (3, 3))
    assert result.blocks[1].index_set == (2, 3)
    assert reay_decompose(four_crosses, 2) == result
    assert verify_decomposition(result, four_crosses, 2, strong=True).passed


def test_decompose_single_block():
    system = make_system(SIMPLEX, SIMPLEX, SIMPLEX)
    result = reay_decompose(system, 1)
    assert result.m == 1
    assert result.blocks[0].selection.picks == ((0, 0), (1, 1), (2, 2))
    assert result.block_subspaces == (Subspace.full(2),)


def test_decompose_on_the_line():
    system = make_system([(1,), (-1,)], [(-1,), (1,)])
    result = reay_decompose(system, 1)
    assert result.m == 1
    assert result.blocks[0].selection.picks == ((0, 0), (1, 0))
    assert result.block_subspaces == (Subspace.full(1),)


def test_union_and_prefixes(four_crosses):
    result = reay_decompose(four_crosses, 2)
    assert result.prefix_picks(1) == [(0, 0), (1, 1)]
    assert result.union().picks == ((0, 0), (1, 1), (2, 2), (3, 3))


@pytest.mark.parametrize(
    "k, system",
    [
        (0, make_system(CROSS, CROSS)),
        (3, make_system(CROSS, CROSS, CROSS, CROSS, CROSS)),
        (2, make_system(CROSS, CROSS, CROSS)),
        (2, make_system(CROSS, CROSS, CROSS, [(1, 0), (-1, 0)])),
    ],
)
def test_decompose_rejects_bad_hypothesis(k, system):
    with pytest.raises(InputError):
        reay_decompose(system, k)
    with pytest.raises(InputError):
        reay_decompose_weak(system, k)


@pytest.mark.parametrize("d, k", [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)])
@pytest.mark.parametrize("seed", range(3))
def test_planted_instances_verify(d, k, seed):
    system = gen_random_planted(d, k, d + k, seed % 2, seed)
    result = reay_decompose(system, k)
    check = verify_decomposition(result, system, k, strong=True)
    assert check.passed, check.message
    assert result.m <= k
    sizes = [len(b) for b in result.blocks]
    assert sizes == sorted(sizes, reverse=True)


def test_verify_reports_rainbow(four_crosses):
    bad = decomposition([block((0, 0), (1, 1)), block((0, 2), (3, 3))], [LINE, Subspace.full(2)])
    check = verify_decomposition(bad, four_crosses, 2, strong=False)
    assert check.failed_clause == Clause.RAINBOW


def test_verify_reports_block_size(four_crosses):
    bad = decomposition([block((0, 0))], [LINE])
    assert verify_decomposition(bad, four_crosses, 1, strong=False).failed_clause == Clause.BLOCK_SIZE


def test_verify_reports_monotone_sizes():
    system = make_system(CROSS, CROSS, SIMPLEX, SIMPLEX, SIMPLEX)
    bad = decomposition(
        [block((0, 0), (1, 1)), block((2, 0), (3, 1), (4, 2))],
        [LINE, Subspace.full(2)],
    )
    check = verify_decomposition(bad, system, 2, strong=False)
    assert not check.passed
    assert check.failed_clause == Clause.MONOTONE_SIZES


def test_verify_reports_dimension_formula(four_crosses):
    bad = decomposition([block((0, 0), (1, 2)), block((2, 2), (3, 3))], [LINE, Subspace.full(2)])
    check = verify_decomposition(bad, four_crosses, 2, strong=False)
    assert check.failed_clause == Clause.DIMENSION_FORMULA

    wrong_claim = decomposition(
        [block((0, 0), (1, 1)), block((2, 2), (3, 3))],
        [span([unit_vector(1, 2)], 2), Subspace.full(2)],
    )
    check = verify_decomposition(wrong_claim, four_crosses, 2, strong=False)
    assert check.failed_clause == Clause.DIMENSION_FORMULA


def test_verify_reports_linear_subspace(four_crosses):
    bad = decomposition([block((0, 0), (1, 1)), block((2, 2), (3, 2))], [LINE, Subspace.full(2)])
    check = verify_decomposition(bad, four_crosses, 2, strong=False)
    assert check.failed_clause == Clause.LINEAR_SUBSPACE


def test_verify_reports_final_dimension(four_crosses):
    short = decomposition([block((0, 0), (1, 1))], [LINE])
    assert verify_decomposition(short, four_crosses, 1, strong=True).passed
    check = verify_decomposition(short, four_crosses, 2, strong=True)
    assert check.failed_clause == Clause.FINAL_DIMENSION


def test_verify_reports_positive_basis_only_when_strong():
    system = make_system(
        [(1, 0), (-1, 0)], [(1, 0), (-1, 0)], [(1, 1), (1, -1)], [(1, 1), (1, -1)]
    )
    redundant = decomposition(
        [block((0, 0), (1, 1)), block((2, 0), (3, 1))], [LINE, Subspace.full(2)]
    )
    assert verify_decomposition(redundant, system, 2, strong=False).passed
    check = verify_decomposition(redundant, system, 2, strong=True)
    assert check.failed_clause == Clause.POSITIVE_BASIS


def test_verify_rejects_dangling_references(four_crosses):
    with pytest.raises(InputError):
        verify_decomposition(decomposition([block((0, 0), (7, 0))], [LINE]), four_crosses, 1, strong=False)
    with pytest.raises(InputError):
        verify_decomposition(decomposition([block((0, 0), (1, 9))], [LINE]), four_crosses, 1, strong=False)
    with pytest.raises(InputError):
        verify_decomposition(decomposition([block((0, 0), (1, 1))], []), four_crosses, 1, strong=False)


def test_strengthen_rebuilds_a_redundant_prefix():
    wedge = [(1, 1), (1, -1), (-1, 0)]
    system = make_system(CROSS, CROSS, wedge, wedge)
    weak = decomposition(
        [block((0, 0), (1, 1)), block((2, 0), (3, 1))], [LINE, Subspace.full(2)]
    )
    assert verify_decomposition(weak, system, 2, strong=False).passed
    assert verify_decomposition(weak, system, 2, strong=True).failed_clause == Clause.POSITIVE_BASIS

    strong = strengthen_decomposition(weak, system, 2)
    assert strong.m == 1
    assert strong.blocks[0].selection.picks == ((1, 1), (2, 0), (3, 1))
    assert strong.blocks[0].index_set == (1, 2, 3)
    assert strong.block_subspaces == (Subspace.full(2),)
    assert verify_decomposition(strong, system, 2, strong=True).passed


def test_strengthen_rejects_a_broken_decomposition(four_crosses):
    short = decomposition([block((0, 0), (1, 1))], [LINE])
    with pytest.raises(InputError):
        strengthen_decomposition(short, four_crosses, 2)
