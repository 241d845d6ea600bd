import pytest

from src.geometry.cone import VectorSet
from src.geometry.rainbow import ColoredSystem
from src.geometry.ratlin import to_vector


def make_set(*coords, d=None):
    vectors = tuple(to_vector(c) for c in coords)
    return VectorSet(vectors, d if d is not None else len(vectors[0]))


def make_system(*colors):
    sets = tuple(make_set(*color) for color in colors)
    return ColoredSystem(sets, sets[0].ambient_dim)


@pytest.fixture
def cross_2d():
    return make_set((1, 0), (-1, 0), (0, 1), (0, -1))


@pytest.fixture
def simplex_2d():
    return make_set((1, 0), (0, 1), (-1, -1))
