"""contains config classes"""

import configparser
import os
from typing import Any, Callable, Dict, Optional

from util.const import (
    CONFIG_FILEPATH,
    DATABASE_FILEPATH,
    SVG_DIRECTORY,
    DEFAULT_COORDINATE_RANGE,
    DEFAULT_MAX_RETRIES,
    DEFAULT_PERTURBATION_DENOMINATOR,
    DEFAULT_BRUTE_FORCE_FAMILY_LIMIT,
    DEFAULT_EXHAUSTIVE_PATH_LINES,
)
from util.helpers import CustomLogger

DEFAULT_VALUES = {
    "GENERATOR": {
        "coordinaterange": str(DEFAULT_COORDINATE_RANGE),
        "maxretries": str(DEFAULT_MAX_RETRIES),
        "perturbationdenominator": str(DEFAULT_PERTURBATION_DENOMINATOR),
    },
    "OUTPUT": {"databasepath": DATABASE_FILEPATH, "svgdirectory": SVG_DIRECTORY},
    "ORACLE": {
        "bruteforcefamilylimit": str(DEFAULT_BRUTE_FORCE_FAMILY_LIMIT),
        "exhaustivepathlines": str(DEFAULT_EXHAUSTIVE_PATH_LINES),
    },
}


class ConfigProvider:
    """
    Provides configuration data from config file; missing sections and keys
    are filled in with defaults and written back
    """

    _CONFIG_FILEPATH = os.path.abspath(
        os.path.join(os.path.dirname(os.path.abspath(__file__)), CONFIG_FILEPATH)
    )

    # (section, key, attribute, parser)
    _KEYS = (
        ("GENERATOR", "coordinaterange", "coordinate_range", "_positive_int"),
        ("GENERATOR", "maxretries", "max_retries", "_positive_int"),
        ("GENERATOR", "perturbationdenominator", "perturbation_denominator", "_positive_int"),
        ("OUTPUT", "databasepath", "database_path", "_path"),
        ("OUTPUT", "svgdirectory", "svg_directory", "_path"),
        ("ORACLE", "bruteforcefamilylimit", "brute_force_family_limit", "_positive_int"),
        ("ORACLE", "exhaustivepathlines", "exhaustive_path_lines", "_positive_int"),
    )

    coordinate_range: int
    max_retries: int
    perturbation_denominator: int
    database_path: str
    svg_directory: str
    brute_force_family_limit: int
    exhaustive_path_lines: int

    def __init__(self, logger: CustomLogger):
        self._logger = logger
        self._ensure_file_exists()
        self._config = configparser.ConfigParser()
        self._config.read(self._CONFIG_FILEPATH)

        missing = {name: self._fill_section(name) for name in DEFAULT_VALUES}
        if any(missing.values()):
            self._write_config(self._config)
            logger.debug(f"Added missing config keys {[k for keys in missing.values() for k in keys]}")

        for section_name, key, attribute, parser in self._KEYS:
            parse: Callable[[str, str], Any] = getattr(self, parser)
            setattr(self, attribute, parse(key, self._config[section_name][key]))
        logger.success("Configuration parsed.", CustomLogger.LEVEL_DEBUG)

    def override(self, **values: Optional[Any]) -> None:
        """
        Replaces attributes for this run only, the file is left alone; None
        values are skipped
        """
        attributes = {attribute: parser for _, _, attribute, parser in self._KEYS}
        for attribute, value in values.items():
            if attribute not in attributes:
                raise KeyError(f"Unknown config attribute [{attribute}]")
            if value is None:
                continue
            parse: Callable[[str, str], Any] = getattr(self, attributes[attribute])
            setattr(self, attribute, parse(attribute, str(value)))
            self._logger.debug(f"Config [{attribute}] overridden with {value}")

    def as_dict(self) -> Dict[str, Any]:
        return {attribute: getattr(self, attribute) for _, _, attribute, _ in self._KEYS}

    @staticmethod
    def _positive_int(key: str, raw: str) -> int:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"Config key [{key}] must be an integer, got {raw}")
        if value < 1:
            raise ValueError(f"Config key [{key}] must be positive, got {value}")
        return value

    @classmethod
    def _path(cls, key: str, raw: str) -> str:
        # relative paths are taken relative to the config file
        if os.path.isabs(raw):
            return raw
        return os.path.join(os.path.dirname(cls._CONFIG_FILEPATH), raw)

    def _fill_section(self, section_name: str) -> list:
        """Adds the section or its missing keys with default values, returns the added keys"""
        if not self._config.has_section(section_name):
            self._config[section_name] = DEFAULT_VALUES[section_name]
            return list(DEFAULT_VALUES[section_name])
        section = self._config[section_name]
        added = []
        for expected_key, default_value in DEFAULT_VALUES[section_name].items():
            if expected_key not in section:
                section[expected_key] = default_value
                added.append(expected_key)
        return added

    @classmethod
    def _ensure_file_exists(cls) -> None:
        if os.path.exists(cls._CONFIG_FILEPATH):
            return
        config = configparser.ConfigParser()
        config.read_dict(DEFAULT_VALUES)
        cls._write_config(config)

    @classmethod
    def _write_config(cls, config: configparser.ConfigParser) -> None:
        with open(cls._CONFIG_FILEPATH, "w") as config_file:
            config.write(config_file)
