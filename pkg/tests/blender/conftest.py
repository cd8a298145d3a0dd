import pytest

from blenderlab.blender import BlenderSpec
from tests.blender.models import affine_blender


@pytest.fixture
def overlap_data():
    return affine_blender((0.7, 0.7), (0.0, 0.3))


@pytest.fixture
def overlap_spec(overlap_data):
    return BlenderSpec.from_json(overlap_data)


@pytest.fixture
def gap_spec():
    return BlenderSpec.from_json(affine_blender((0.4, 0.4), (0.0, 0.6)))


@pytest.fixture
def cu_spec():
    """Inverse-oriented twin of the overlap blender: its cs view has central rates 0.7."""
    return BlenderSpec.from_json(
        {
            "dims": {"ss": 1, "cs": 1, "uu": 1},
            "orientation": "cu",
            "U": {"lo": [0.0, -0.5, -0.5], "hi": [1.0, 1.5, 1.5]},
            "branches": [
                {
                    "linear": {"ss": [[0.4]], "c": [[1 / 0.7]], "uu": [[2.0]]},
                    "offset": [0.1, 0.0, -0.5],
                    "domain": {"lo": [0.0, -0.3, 0.0], "hi": [1.0, 1.0, 1.0]},
                },
                {
                    "linear": {"ss": [[0.4]], "c": [[1 / 0.7]], "uu": [[2.0]]},
                    "offset": [0.6, -0.3 / 0.7, -0.5],
                    "domain": {"lo": [0.0, 0.0, 0.0], "hi": [1.0, 1.3, 1.0]},
                },
            ],
        }
    )
