import os
import yaml
from typing import Dict, Any, Optional, List
from pathlib import Path
import logging

from vcstream.errors import ConfigError

logger = logging.getLogger(__name__)

# env var -> (config path, converter)
ENV_MAPPINGS = {
    'VCSTREAM_DELTA': (['stream', 'delta'], float),
    'VCSTREAM_C': (['stream', 'c'], float),
    'VCSTREAM_ALPHA': (['stream', 'alpha'], float),
    'VCSTREAM_SEED': (['stream', 'seed'], int),
    'VCSTREAM_LOG_LEVEL': (['logging', 'level'], str.upper),
    'VCSTREAM_WORKERS': (['harness', 'workers'], int),
    'VCSTREAM_ENVIRONMENT': (['environment'], str),
    'VCSTREAM_DEBUG': (['debug'], lambda value: value.lower() in ('true', '1', 'yes')),
}


class ConfigManager:
    """
    Configuration manager for vcstream.
    Loads configuration from YAML files with environment override support.
    """

    def __init__(self, config_file: Optional[str] = None):
        """
        Initialize ConfigManager with optional custom config file.

        Args:
            config_file: Optional path to custom config file
        """
        self._config: Dict[str, Any] = {}
        self._config_file = config_file
        self._load_config()

    def _load_config(self):
        """Load configuration from YAML file with environment overrides"""
        if self._config_file:
            config_path = Path(self._config_file)
        else:
            config_path = Path(__file__).parent.parent.parent / "shared" / "config" / "app.yaml"

        logger.debug(f"Loading configuration from: {config_path}")
        if not config_path.exists():
            logger.error(f"❌ Configuration file not found: {config_path}")
            raise ConfigError(f"Configuration file not found: {config_path}")

        try:
            with open(config_path, 'r') as file:
                self._config = yaml.safe_load(file) or {}
        except yaml.YAMLError as e:
            logger.error(f"❌ Invalid YAML configuration: {e}")
            raise ConfigError("Invalid YAML configuration", str(e))

        logger.debug("✅ Configuration loaded successfully")
        self._apply_environment_overrides()

    def _apply_environment_overrides(self):
        """Apply environment variable overrides to configuration"""
        for env_var, (config_path, convert) in ENV_MAPPINGS.items():
            value = os.getenv(env_var)
            if value is None:
                continue
            config_ref = self._config
            for key in config_path[:-1]:
                config_ref = config_ref.setdefault(key, {})
            try:
                config_ref[config_path[-1]] = convert(value)
            except ValueError:
                raise ConfigError(f"Environment override {env_var} is malformed", repr(value))
            logger.info(f"🔧 Environment override applied: {env_var} = {config_ref[config_path[-1]]}")

    def get_stream_defaults(self) -> Dict[str, Any]:
        """Default delta, c, alpha and seed for a run"""
        return self._config.get('stream', {})

    def get_dpsa_config(self) -> Dict[str, Any]:
        """Slack, approx-mode epsilon and estimator capacity constant"""
        return self._config.get('dpsa', {})

    def get_harness_config(self) -> Dict[str, Any]:
        return self._config.get('harness', {})

    def get_workers(self) -> int:
        return int(self.get_harness_config().get('workers', 4))

    def get_oracle_limits(self) -> Dict[str, int]:
        return self.get_harness_config().get('oracle_limits', {})

    def get_exit_codes(self) -> Dict[str, int]:
        return self._config.get('exit_codes', {})

    def get_environment(self) -> str:
        """Get environment setting"""
        return self._config.get('environment', 'development')

    def is_debug(self) -> bool:
        """Check if debug mode is enabled"""
        return self._config.get('debug', False)

    def get_logging_config(self) -> Dict[str, Any]:
        """Get logging configuration"""
        return self._config.get('logging', {})

    def validation_errors(self) -> List[str]:
        """Every out-of-range setting, as messages"""
        errors: List[str] = []
        stream = self.get_stream_defaults()
        delta = stream.get('delta', 0.01)
        if not 0.0 < delta < 1.0:
            errors.append(f"stream.delta must lie in (0, 1), got {delta}")
        if stream.get('c', 1.0) < 1.0:
            errors.append(f"stream.c must be at least 1, got {stream.get('c')}")
        if stream.get('alpha', 1.0) <= 0.0:
            errors.append(f"stream.alpha must be positive, got {stream.get('alpha')}")
        slack = self.get_dpsa_config().get('slack', 1.0)
        if not 1.0 <= slack <= 1.01:
            errors.append(f"dpsa.slack must lie in [1, 1.01], got {slack}")
        if self.get_workers() < 1:
            errors.append(f"harness.workers must be positive, got {self.get_workers()}")
        return errors

    def validate_config(self) -> bool:
        """Validate critical configuration settings"""
        errors = self.validation_errors()
        for message in errors:
            logger.error(f"❌ {message}")
        if errors:
            return False
        logger.debug("✅ Configuration validation passed")
        return True


# Global config instance
_config_instance = None


def get_config() -> ConfigManager:
    """Get global configuration instance (singleton pattern)"""
    global _config_instance
    if _config_instance is None:
        _config_instance = ConfigManager()
    return _config_instance


def reload_config(config_file: Optional[str] = None) -> ConfigManager:
    """Reload configuration from file"""
    global _config_instance
    _config_instance = ConfigManager(config_file)
    return _config_instance
