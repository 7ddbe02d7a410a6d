import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import mvtrack as mv

FIXTURES = Path(__file__).parent.parent / "fixtures"


@pytest.fixture(scope="session")
def triangle():
    return mv.Complex.from_maximal([[0, 1, 2]])


@pytest.fixture(scope="session")
def merging_saddles():
    """The two-saddle collision scene: complex, three fields, seed."""
    from mvtrack.io import load_scene
    return load_scene(FIXTURES / "merging_saddles.json")


@pytest.fixture(scope="session")
def repeller_disk():
    """Hexagonal disk with a repelling central triangle, one field."""
    from mvtrack.io import load_scene
    return load_scene(FIXTURES / "repeller_disk.json")


@pytest.fixture(scope="session")
def nine_fields():
    from mvtrack.io import load_scene
    return load_scene(FIXTURES / "saddle_collision_nine.json")
