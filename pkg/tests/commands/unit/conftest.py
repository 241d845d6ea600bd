import pytest

from src.commands.schemas import InstanceDocument


@pytest.fixture
def cross_payload():
    return {
        "dimension": 2,
        "k": 1,
        "colors": [[["1", "0"], ["-1", 0], [0, 1], ["0", "-2/2"]]],
    }


@pytest.fixture
def cross_document(cross_payload):
    return InstanceDocument.model_validate(cross_payload)
