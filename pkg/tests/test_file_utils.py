import json
import os

from spechtcoh.utils.file_utils import write_json_atomic


def test_write_json_atomic(tmp_path):
    path = tmp_path / "nested" / "record.json"
    write_json_atomic({"b": 1, "a": [1, 2]}, str(path))
    write_json_atomic({"b": 2}, str(path))
    assert json.loads(path.read_text()) == {"b": 2}
    assert os.listdir(path.parent) == ["record.json"]
