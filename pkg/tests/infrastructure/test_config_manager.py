import json

import pytest

from src.infrastructure.config_manager import ConfigManager


@pytest.fixture
def config(monkeypatch):
    """Fixture with the bound and log level taken from a clean environment."""
    monkeypatch.delenv('MLL_MAX_LEAVES', raising=False)
    monkeypatch.delenv('LOG_LEVEL', raising=False)
    return ConfigManager()


def test_defaults(config):
    """Test default bounds and suite settings."""
    assert config.get_enumeration_bound() == 12
    assert config.get_cli_config()['max_leaves'] == 8
    suite = config.get_suite_config()
    assert suite['vars'] == ['p', 'q']
    assert suite['max_leaves'] == 6
    assert suite['neg_depth'] == 2
    assert suite['enumeration_bound'] == 12
    assert 'diagrams' not in suite
    assert config.get_log_level() == 'WARNING'


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv('MLL_MAX_LEAVES', '5')
    monkeypatch.setenv('LOG_LEVEL', 'DEBUG')
    config = ConfigManager()
    assert config.get_enumeration_bound() == 5
    assert config.get_cli_config()['max_leaves'] == 5
    assert config.get_log_level() == 'DEBUG'


def test_bad_environment_bound_falls_back(monkeypatch):
    monkeypatch.setenv('MLL_MAX_LEAVES', 'many')
    assert ConfigManager().get_enumeration_bound() == 12


@pytest.mark.parametrize("bound,valid", [(1, True), (12, True), (0, False), (-3, False), (True, False), ('4', False)])
def test_validate_bound(config, bound, valid):
    assert config.validate_bound(bound) is valid


def test_update_suite_settings(config):
    config.update_suite_settings({'samples': 3, 'seed': 9})
    assert config.get_suite_config()['samples'] == 3
    assert config.get_suite_config()['seed'] == 9
    with pytest.raises(ValueError):
        config.update_suite_settings({'max_leaves': 0})


def test_update_enumeration_bound(config):
    config.update_enumeration_bound(7)
    assert config.get_enumeration_bound() == 7
    with pytest.raises(ValueError):
        config.update_enumeration_bound(-1)


def test_export_import_round_trip(config, tmp_path):
    path = tmp_path / 'config.json'
    config.update_suite_settings({'samples': 2})
    exported = config.export_config(str(path))
    assert json.loads(exported)['suite']['samples'] == 2

    fresh = ConfigManager()
    fresh.import_config(str(path))
    assert fresh.get_suite_config()['samples'] == 2
    assert fresh.config == config.config


def test_import_merges_sections(config, tmp_path):
    path = tmp_path / 'partial.json'
    path.write_text(json.dumps({'suite': {'seed': 4}}))
    config.import_config(str(path))
    assert config.get_suite_config()['seed'] == 4
    assert config.get_suite_config()['max_leaves'] == 6


def test_import_missing_file(config, tmp_path):
    with pytest.raises(OSError):
        config.import_config(str(tmp_path / 'missing.json'))


def test_suite_defaults_include_exhaustive_tier(config):
    assert config.get_suite_config()['exhaustive_leaves'] == 4
    assert 'vars' not in config.get_cli_config()


def test_update_suite_settings_rejects_unknown_and_negative(config):
    with pytest.raises(ValueError):
        config.update_suite_settings({'colour': 'blue'})
    with pytest.raises(ValueError):
        config.update_suite_settings({'samples': -1})
    config.update_suite_settings({'samples': 0, 'exhaustive_leaves': 0})
    assert config.get_suite_config()['samples'] == 0


def test_update_cli_bound(config):
    config.update_cli_bound(3)
    assert config.get_cli_config()['max_leaves'] == 3
    with pytest.raises(ValueError):
        config.update_cli_bound(0)


@pytest.mark.parametrize("payload", [
    {'network': {'port': 1}},
    {'suite': {'colour': 'blue'}},
    {'enumeration': {'max_leaves': 0}},
    {'suite': {'seed': 1, 'max_leaves': -2}},
    {'cli': 8},
])
def test_rejected_import_leaves_config_unchanged(config, tmp_path, payload):
    before = json.loads(config.export_config())
    path = tmp_path / 'bad.json'
    path.write_text(json.dumps(payload))
    with pytest.raises(ValueError):
        config.import_config(str(path))
    assert json.loads(config.export_config()) == before


def test_import_sets_log_level(config, tmp_path):
    path = tmp_path / 'logging.json'
    path.write_text(json.dumps({'system': {'log_level': 'INFO'}}))
    config.import_config(str(path))
    assert config.get_log_level() == 'INFO'
