import yaml
import os
import copy
from typing import Dict, Any, Optional
from pathlib import Path

from encoders.layout import LAYOUT_VERSION
from utils.error_handler import ConfigurationError

LAYOUT_ENV_VAR = "REFSTATE_LAYOUT_VERSION"

DEFAULT_CONFIG = {
    'settings': {
        'log_level': 'WARNING',
        'layout_version': LAYOUT_VERSION,
    },
    'lab': {
        'epsilon': 1.0,
        'variant': 'standard',
        'confidence_z': 1.96,
        'workers': 1,
        'trials': 1000,
    },
    'regime': {
        'delta': 1e-3,
    },
}

VALID_LOG_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR']
VALID_VARIANTS = ['standard', 'level-scaled']


class ConfigParser:
    def __init__(self, config_path: Optional[str] = None):
        self.explicit = config_path is not None
        if config_path is None:
            config_path = self._find_default_config()
        self.config_path = Path(config_path) if config_path else None
        self._config = None

    def _find_default_config(self) -> Optional[str]:
        possible_paths = [
            "refstate.yaml",
            "~/.config/refstate/config.yaml",
            "/etc/refstate/config.yaml"
        ]

        for path in possible_paths:
            expanded_path = Path(path).expanduser()
            if expanded_path.exists():
                return str(expanded_path)

        return None

    def load_config(self) -> Dict[str, Any]:
        if self._config is not None:
            return self._config

        config = copy.deepcopy(DEFAULT_CONFIG)

        if self.config_path is not None:
            if not self.config_path.exists():
                raise ConfigurationError(f"Config file not found: {self.config_path}")

            try:
                with open(self.config_path, 'r') as f:
                    loaded = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ConfigurationError(f"Invalid YAML syntax in {self.config_path}: {e}")

            if loaded is None:
                loaded = {}
            if not isinstance(loaded, dict):
                raise ConfigurationError("Config must be a dictionary")

            for section, values in loaded.items():
                if section not in config:
                    raise ConfigurationError(f"Unknown config section: '{section}'")
                if not isinstance(values, dict):
                    raise ConfigurationError(f"'{section}' must be a dictionary")
                config[section].update(values)

        self._config = config
        self._validate_config()
        return self._config

    def _validate_config(self):
        settings = self._config['settings']
        if str(settings['log_level']).upper() not in VALID_LOG_LEVELS:
            raise ConfigurationError(f"Invalid log_level: {settings['log_level']}")

        lab = self._config['lab']
        if lab['variant'] not in VALID_VARIANTS:
            raise ConfigurationError(f"Invalid lab variant: {lab['variant']}")
        if not isinstance(lab['epsilon'], (int, float)) or lab['epsilon'] <= 0:
            raise ConfigurationError("lab.epsilon must be a positive number")
        if not isinstance(lab['workers'], int) or lab['workers'] < 1:
            raise ConfigurationError("lab.workers must be a positive integer")
        if not isinstance(lab['trials'], int) or lab['trials'] < 1:
            raise ConfigurationError("lab.trials must be a positive integer")

        delta = self._config['regime']['delta']
        if not isinstance(delta, (int, float)) or delta <= 0:
            raise ConfigurationError("regime.delta must be a positive number")

    def get_settings(self) -> Dict[str, Any]:
        return self.load_config()['settings']

    def get_lab_settings(self) -> Dict[str, Any]:
        return self.load_config()['lab']

    def get_regime_settings(self) -> Dict[str, Any]:
        return self.load_config()['regime']

    def get_layout_version(self) -> str:
        """Layout version pinned by the environment, else by the config file"""
        version = os.environ.get(LAYOUT_ENV_VAR) or self.get_settings()['layout_version']
        if version != LAYOUT_VERSION:
            raise ConfigurationError(
                f"Unsupported layout version '{version}' "
                f"(this build writes {LAYOUT_VERSION})"
            )
        return version
