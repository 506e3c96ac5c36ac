import json
import os

import pytest
import yaml

from spechtcoh.utils.combinatorics import Partition
from spechtcoh.utils.constructions import hand_vector_33

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture
def config_file(tmp_path, monkeypatch):
    """A config file with a cache directory inside tmp_path."""
    monkeypatch.delenv("SPECHTCOH_CACHE_DIR", raising=False)

    def _write(**overrides):
        config = {
            "dimension_cap": 200000,
            "dense_cap": 6000,
            "oracle_max_d": 8,
            "cache_type": "directory",
            "cache_uri": str(tmp_path / "cache"),
            "scan_jobs": 1,
            "log_level": "INFO",
            "selftest_max_d": 3,
        }
        config.update(overrides)
        path = tmp_path / "config.yaml"
        path.write_text(yaml.safe_dump(config))
        return str(path)

    return _write


@pytest.fixture
def cocycle_regression():
    with open(os.path.join(DATA_DIR, "cocycle_regression.json"), "r") as file:
        return json.load(file)


@pytest.fixture
def partition_33():
    return Partition((3, 3))


@pytest.fixture
def hand_vector():
    return hand_vector_33()
