import json
from fractions import Fraction

import pytest

from qkmismatch.common import SettingsError
from qkmismatch.settings import DEFAULT_SETTINGS_PATH, Settings, loadSettings


def test_default_file_matches_dataclass_defaults():
    assert DEFAULT_SETTINGS_PATH.exists()
    assert loadSettings() == Settings()


def test_defaults():
    settings = loadSettings()

    assert settings.qsearch.c == Fraction(6, 5)
    assert settings.qsearch.C == 12
    assert settings.boost.constant == 18
    assert settings.count.confidence == 6
    assert settings.backend.kind == "analytic"
    assert settings.backend.qubitCap == 24


def test_user_file_overrides_single_key(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"boost": {"minLambda": 5}, "qsearch": {"c": "3/2"}}))

    settings = loadSettings(path)

    assert settings.boost.minLambda == 5
    assert settings.boost.constant == 18
    assert settings.qsearch.c == Fraction(3, 2)


@pytest.mark.parametrize("content", [
    {"boost": {"lambda": 5}},
    {"sampling": {"shots": 10}},
    {"boost": 4},
    [1, 2, 3],
])
def test_invalid_user_file(tmp_path, content):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps(content))

    with pytest.raises(SettingsError):
        loadSettings(path)


def test_unreadable_user_file(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text("{ not json")

    with pytest.raises(SettingsError):
        loadSettings(path)
    with pytest.raises(SettingsError):
        loadSettings(tmp_path / "missing.json")
