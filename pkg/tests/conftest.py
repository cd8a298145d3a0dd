import pytest

from blenderlab.client import BlenderLab


@pytest.fixture
def lab():
    return BlenderLab()


@pytest.fixture
def threaded_lab():
    return BlenderLab(threads=4, seed=7)
