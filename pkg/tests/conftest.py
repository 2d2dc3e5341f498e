import json
from pathlib import Path

import numpy as np
import pytest

from formations.templates import default_registry

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def stability_segments():
    doc = json.loads((DATA / "stability_segments.json").read_text())
    return [{pid: tuple(xy) for pid, xy in seg.items()} for seg in doc]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
