"""Pytest configuration and shared fixtures."""

import random
import tempfile
from pathlib import Path

import pytest
import yaml

from stonekernels.dsl.loader import Program, ProgramLoader
from stonekernels.settings import get_settings

COINS_PROGRAM = {
    "objects": {
        "X": 2,
        "Y": 3,
        "B": {"family": "binary_prefix"},
        "XX": {"family": "product", "factors": ["X", "X"]},
        "XB": {"family": "product", "factors": ["X", "B"]},
        "S": {"family": "power", "factor": "X"},
    },
    "kernels": {
        "f": {"dom": "X", "cod": "X", "matrix": [["1/2", "1/2"], ["0", "1"]]},
        "g": {"dom": "X", "cod": "Y", "matrix": [["1/3", "1/3", "1/3"], [1, 0, 0]]},
        "neg": {"dom": "X", "cod": "X", "map": [1, 0]},
        "coin": {"state": "coin", "bias": "1/2", "cod": "B"},
        "biased": {"state": "coin", "bias": "1/3", "cod": "B"},
        "flip": {"state": "coin", "bias": "1/2", "cod": "X"},
        "stream": {"state": "coin", "bias": "1/2", "cod": "S"},
        "one": {"state": "point", "element": 1, "cod": "X"},
        "joint": {"dom": "unit", "cod": "XX", "matrix": [["1/4", "1/4", "0", "1/2"]]},
        "lopsided": {"dom": "unit", "cod": "XX", "matrix": [["1/4", "3/4", "0", "0"]]},
    },
    "terms": {
        "law": "copy[X] ; (id[X] (x) discard[X])",
        "fg": "f ; g",
        "mixed": "one (x) coin",
    },
}


@pytest.fixture(autouse=True)
def clear_settings_cache():
    """Re-read the environment for every test so monkeypatched variables take effect."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    """A generator with a fixed seed."""
    return random.Random(20240611)


@pytest.fixture
def temp_output_dir():
    """Create a temporary directory for test outputs."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def coins_data():
    """A fresh copy of the sample program as a dictionary."""
    return yaml.safe_load(yaml.safe_dump(COINS_PROGRAM))


@pytest.fixture
def coins_yaml(temp_output_dir, coins_data):
    """The sample program written as a YAML file."""
    path = temp_output_dir / "coins.yaml"
    path.write_text(yaml.safe_dump(coins_data, sort_keys=False), encoding="utf-8")
    return path


@pytest.fixture
def coins_program(coins_data) -> Program:
    """The sample program, loaded."""
    return ProgramLoader().load_from_dict(coins_data)
