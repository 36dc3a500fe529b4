import os
import json
import logging
from typing import Dict, Any, Optional

logger = logging.getLogger(__name__)

# Suite keys holding leaf counts or sizes that must stay positive.
POSITIVE_SUITE_KEYS = ('max_leaves', 'grid_leaves', 'workers')
NON_NEGATIVE_SUITE_KEYS = ('exhaustive_leaves', 'neg_depth', 'samples', 'seed')


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or value == '':
        return default
    try:
        return int(value)
    except ValueError:
        logger.error(f"Ignoring non-integer {name}={value!r}")
        return default


class ConfigManager:
    """Manages configuration for the proof-net tools."""

    def __init__(self):
        self.config = {
            'enumeration': {
                'max_leaves': _env_int('MLL_MAX_LEAVES', 12)
            },
            'cli': {
                'max_leaves': _env_int('MLL_MAX_LEAVES', 8)
            },
            'suite': {
                'vars': ['p', 'q'],
                'max_leaves': 6,
                'grid_leaves': 3,  # per-formula bound of the materialized grid
                'exhaustive_leaves': 4,  # total-leaf bound of the exhaustive tier
                'neg_depth': 2,
                'samples': 16,
                'seed': 0,
                'workers': 4,
                'diagrams': None,  # None selects every diagram
                'inject': []
            },
            'system': {
                'log_level': os.getenv('LOG_LEVEL', 'WARNING')
            }
        }

    def get_enumeration_bound(self) -> int:
        """Leaf bound for hom-set and J-set enumeration."""
        return self.config['enumeration']['max_leaves']

    def get_cli_config(self) -> Dict[str, Any]:
        return self.config['cli']

    def get_suite_config(self) -> Dict[str, Any]:
        """Suite settings with ``enumeration_bound`` folded in."""
        settings = {key: value for key, value in self.config['suite'].items() if value is not None}
        settings['enumeration_bound'] = self.get_enumeration_bound()
        return settings

    def get_log_level(self) -> str:
        return self.config['system']['log_level']

    def validate_bound(self, bound: int) -> bool:
        """Leaf bounds must be positive integers."""
        return isinstance(bound, int) and not isinstance(bound, bool) and bound > 0

    def update_suite_settings(self, settings: Dict[str, Any]) -> None:
        """Merge suite settings; unknown keys and non-positive sizes are rejected."""
        try:
            unknown = sorted(set(settings) - set(self.config['suite']))
            if unknown:
                raise ValueError(f"Unknown suite settings: {', '.join(unknown)}")
            for key in POSITIVE_SUITE_KEYS:
                if key in settings and not self.validate_bound(settings[key]):
                    raise ValueError(f"suite.{key} must be a positive integer, got {settings[key]!r}")
            for key in NON_NEGATIVE_SUITE_KEYS:
                value = settings.get(key, 0)
                if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                    raise ValueError(f"suite.{key} must be a non-negative integer, got {value!r}")
            self.config['suite'].update(settings)
            logger.info(f"Suite settings updated: {', '.join(sorted(settings)) or 'none'}")
        except Exception as e:
            logger.error(f"Failed to update suite settings: {str(e)}")
            raise

    def update_enumeration_bound(self, bound: int) -> None:
        if not self.validate_bound(bound):
            raise ValueError(f"enumeration bound must be a positive integer, got {bound!r}")
        self.config['enumeration']['max_leaves'] = bound
        logger.info(f"Enumeration bound set to {bound}")

    def update_cli_bound(self, bound: int) -> None:
        if not self.validate_bound(bound):
            raise ValueError(f"cli bound must be a positive integer, got {bound!r}")
        self.config['cli']['max_leaves'] = bound
        logger.info(f"CLI enumeration bound set to {bound}")

    def export_config(self, filepath: Optional[str] = None) -> str:
        """Export the effective configuration as JSON, optionally to a file."""
        try:
            config_json = json.dumps(self.config, indent=2, sort_keys=True)
            if filepath:
                with open(filepath, 'w') as f:
                    f.write(config_json + '\n')
                logger.info(f"Configuration written to {filepath}")
            return config_json
        except Exception as e:
            logger.error(f"Failed to export configuration: {str(e)}")
            raise

    def import_config(self, filepath: str) -> None:
        """Import a JSON file written by ``export_config`` or a partial one.

        Each section goes through its validating update; unknown sections and
        keys raise ValueError and leave the configuration unchanged.
        """
        try:
            with open(filepath, 'r') as f:
                new_config = json.load(f)
            if not isinstance(new_config, dict):
                raise ValueError(f"{filepath} must hold a JSON object")
            unknown = sorted(set(new_config) - set(self.config))
            if unknown:
                raise ValueError(f"Unknown configuration sections: {', '.join(unknown)}")
            snapshot = json.loads(json.dumps(self.config))
            try:
                self._apply(new_config)
            except Exception:
                self.config = snapshot
                raise
            logger.info(f"Configuration imported from {filepath}")
        except Exception as e:
            logger.error(f"Failed to import configuration: {str(e)}")
            raise

    def _apply(self, new_config: Dict[str, Any]) -> None:
        for section, values in new_config.items():
            if not isinstance(values, dict):
                raise ValueError(f"Section {section} must be an object")
            allowed = set(self.config[section])
            unknown = sorted(set(values) - allowed)
            if unknown:
                raise ValueError(f"Unknown {section} settings: {', '.join(unknown)}")
            if section == 'suite':
                self.update_suite_settings(values)
            elif section == 'enumeration' and 'max_leaves' in values:
                self.update_enumeration_bound(values['max_leaves'])
            elif section == 'cli' and 'max_leaves' in values:
                self.update_cli_bound(values['max_leaves'])
            elif section == 'system' and 'log_level' in values:
                self.config['system']['log_level'] = str(values['log_level'])
