import pytest

from mackey_fusion.constructions import named_system
from mackey_fusion.fusion import OrbitCategory

_CACHE = {}


def system(name):
    """Fusion system with its full and centric orbit categories, built once per session."""
    if name not in _CACHE:
        fs = named_system(name)
        _CACHE[name] = (fs, OrbitCategory(fs), OrbitCategory(fs, centric_only=True))
    return _CACHE[name]


@pytest.fixture(scope="session")
def d8():
    return system("d8")


@pytest.fixture(scope="session")
def s4():
    return system("s4")


@pytest.fixture(scope="session")
def heis():
    return system("27")
