import pytest
import yaml

from src.core.exceptions import ConfigurationException
from src.utils.config_manager import DEFAULT_CONFIG_PATH, ConfigManager


@pytest.fixture
def write_config(tmp_path):
    def _write(data):
        path = tmp_path / "config.yaml"
        path.write_text(yaml.safe_dump(data), encoding="utf-8")
        return str(path)
    return _write


class TestConfigManager:
    def test_bundled_config_loads(self, monkeypatch):
        monkeypatch.delenv("TENSHULL_THREADS", raising=False)
        assert DEFAULT_CONFIG_PATH.exists()
        config = ConfigManager()
        assert config.get_spectral_options().tol == 1e-10
        assert config.get_search_budget().starts == 64
        assert config.get_hull_settings().threads is None
        assert config.get_irreducible_cap() == 16
        # the version lives in TOOL_VERSION only
        assert "app" not in config.config

    def test_partial_file_keeps_defaults(self, write_config):
        config = ConfigManager(write_config({'spectral': {'tol': 1e-8}}))
        assert config.get_spectral_options().tol == 1e-8
        assert config.get_spectral_options().max_iters == 100000
        assert config.get_reporting()['json_indent'] == 2

    def test_missing_explicit_file(self, tmp_path):
        with pytest.raises(ConfigurationException, match="not found"):
            ConfigManager(str(tmp_path / "nope.yaml"))

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("spectral: [unclosed", encoding="utf-8")
        with pytest.raises(ConfigurationException, match="Invalid YAML"):
            ConfigManager(str(path))

    def test_non_mapping(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n", encoding="utf-8")
        with pytest.raises(ConfigurationException, match="mapping"):
            ConfigManager(str(path))

    def test_invalid_log_level(self, write_config):
        with pytest.raises(ConfigurationException, match="logging.level"):
            ConfigManager(write_config({'logging': {'level': 'LOUD'}}))

    def test_invalid_numeric_setting(self, write_config):
        with pytest.raises(ConfigurationException, match="Invalid numeric setting"):
            ConfigManager(write_config({'classify': {'starts': 'many'}}))

    def test_invalid_irreducible_cap(self, write_config):
        with pytest.raises(ConfigurationException):
            ConfigManager(write_config({'structure': {'irreducible_cap': 0}}))

    def test_env_placeholder(self, write_config, monkeypatch):
        monkeypatch.setenv("TENSHULL_THREADS", "3")
        config = ConfigManager(write_config({'interval': {'threads': '${TENSHULL_THREADS}'}}))
        assert config.get_hull_settings().threads == 3
        assert config.get_hull_settings(threads=5).threads == 5

    def test_bad_thread_env(self, write_config, monkeypatch):
        monkeypatch.setenv("TENSHULL_THREADS", "lots")
        with pytest.raises(ConfigurationException, match="interval.threads"):
            ConfigManager(write_config({'interval': {'threads': '${TENSHULL_THREADS}'}}))

    def test_seed_override(self, write_config):
        config = ConfigManager(write_config({'classify': {'seed': 4}}))
        assert config.get_search_budget().seed == 4
        assert config.get_search_budget(seed=9).seed == 9
        assert config.get_hull_settings(seed=9).budget.seed == 9
