import copy
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from ..analyzer.models.options import (
    HullSettings,
    MTolerances,
    OracleSettings,
    SearchBudget,
    SpectralOptions,
)
from ..core.exceptions import ConfigurationException

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[2] / "config" / "config.yaml"

DEFAULTS: Dict[str, Any] = {
    'spectral': {'tol': 1e-10, 'max_iters': 100000, 'shift': 1.0},
    'structure': {'irreducible_cap': 16},
    'classify': {
        'strict_rel_tol': 1e-9, 'cert_tol': 1e-9, 'pd_tol': 1e-9, 'starts': 64,
        'max_iters': 500, 'support_cap': 8, 'minor_cap': 12, 'seed': 0,
    },
    'interval': {'vertex_cap': 20, 'threads': None, 'sample_attempts': 64},
    'oracle': {'cw_effort': 4000, 'grid_resolution': 0.01, 'subset_cap': 10, 'matrix_cap': 12},
    'reporting': {'include_timing': True, 'json_indent': 2},
    'logging': {
        'level': 'WARNING',
        'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        'file_path': None,
    },
}

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class ConfigManager:
    def __init__(self, config_path: Optional[str] = None):
        self.config_path = Path(config_path) if config_path else DEFAULT_CONFIG_PATH
        self.explicit = config_path is not None
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """Load and validate configuration"""
        # Load environment variables
        load_dotenv()

        if self.config_path.exists():
            try:
                with open(self.config_path, 'r', encoding='utf-8') as file:
                    loaded = yaml.safe_load(file) or {}
            except yaml.YAMLError as e:
                raise ConfigurationException(f"Invalid YAML in {self.config_path}: {e}")
            if not isinstance(loaded, dict):
                raise ConfigurationException(f"Config file {self.config_path} must hold a mapping")
        elif self.explicit:
            raise ConfigurationException(f"Config file not found: {self.config_path}")
        else:
            loaded = {}

        # Replace environment variable placeholders
        config = self._replace_env_variables(_merge(DEFAULTS, loaded))

        # Validate required settings
        self._validate_config(config)

        return config

    def _replace_env_variables(self, config: Dict[str, Any]) -> Dict[str, Any]:
        """Replace ${VAR} placeholders; unset variables become None"""
        def replace_recursive(obj):
            if isinstance(obj, dict):
                return {k: replace_recursive(v) for k, v in obj.items()}
            elif isinstance(obj, list):
                return [replace_recursive(item) for item in obj]
            elif isinstance(obj, str) and obj.startswith("${") and obj.endswith("}"):
                value = os.getenv(obj[2:-1])
                return value if value not in ("", None) else None
            return obj

        return replace_recursive(config)

    def _validate_config(self, config: Dict[str, Any]):
        """Validate configuration parameters by building every option object once"""
        level = str(config['logging'].get('level', 'WARNING')).upper()
        if level not in LOG_LEVELS:
            raise ConfigurationException(f"logging.level must be one of {', '.join(LOG_LEVELS)}, got {level}")

        cap = config['structure'].get('irreducible_cap')
        if not isinstance(cap, int) or cap < 1:
            raise ConfigurationException("structure.irreducible_cap must be a positive integer")

        try:
            self._spectral(config)
            self._budget(config)
            self._tolerances(config)
            self._oracle(config)
            self._hull(config, None)
        except (TypeError, ValueError) as e:
            raise ConfigurationException(f"Invalid numeric setting: {e}")

    # -- typed views ------------------------------------------------------------

    @staticmethod
    def _spectral(config: Dict[str, Any]) -> SpectralOptions:
        section = config['spectral']
        return SpectralOptions(tol=float(section['tol']), max_iters=int(section['max_iters']),
                               shift=float(section['shift']))

    @staticmethod
    def _tolerances(config: Dict[str, Any]) -> MTolerances:
        return MTolerances(strict_rel_tol=float(config['classify']['strict_rel_tol']))

    @staticmethod
    def _budget(config: Dict[str, Any], seed: Optional[int] = None) -> SearchBudget:
        section = config['classify']
        return SearchBudget(
            starts=int(section['starts']),
            max_iters=int(section['max_iters']),
            seed=int(section['seed'] if seed is None else seed),
            cert_tol=float(section['cert_tol']),
            pd_tol=float(section['pd_tol']),
            support_cap=int(section['support_cap']),
            minor_cap=int(section['minor_cap']),
        )

    @staticmethod
    def _oracle(config: Dict[str, Any]) -> OracleSettings:
        section = config['oracle']
        return OracleSettings(cw_effort=int(section['cw_effort']),
                              grid_resolution=float(section['grid_resolution']),
                              subset_cap=int(section['subset_cap']),
                              matrix_cap=int(section['matrix_cap']))

    def _hull(self, config: Dict[str, Any], threads: Optional[int], seed: Optional[int] = None) -> HullSettings:
        section = config['interval']
        configured = section.get('threads')
        if threads is None and configured is not None:
            try:
                threads = int(configured)
            except (TypeError, ValueError):
                raise ConfigurationException(f"interval.threads must be an integer, got {configured!r}")
        return HullSettings(
            vertex_cap=int(section['vertex_cap']),
            threads=threads,
            sample_attempts=int(section['sample_attempts']),
            spectral=self._spectral(config),
            tolerances=self._tolerances(config),
            budget=self._budget(config, seed),
        )

    def get_spectral_options(self) -> SpectralOptions:
        return self._spectral(self.config)

    def get_tolerances(self) -> MTolerances:
        return self._tolerances(self.config)

    def get_search_budget(self, seed: Optional[int] = None) -> SearchBudget:
        """Search budget, with the seed overridden when given"""
        return self._budget(self.config, seed)

    def get_oracle_settings(self) -> OracleSettings:
        return self._oracle(self.config)

    def get_hull_settings(self, threads: Optional[int] = None, seed: Optional[int] = None) -> HullSettings:
        """Hull settings; an explicit thread count beats interval.threads, which beats the core count"""
        return self._hull(self.config, threads, seed)

    def get_irreducible_cap(self) -> int:
        return self.config['structure']['irreducible_cap']

    def get_logging(self) -> Dict[str, Any]:
        return self.config['logging']

    def get_reporting(self) -> Dict[str, Any]:
        return self.config['reporting']
