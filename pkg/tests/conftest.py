import json

import pytest


@pytest.fixture
def write_map(tmp_path):
    """Write a map-spec dict to a JSON file and return its path as str."""

    def _write(data, name="map.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)

    return _write
