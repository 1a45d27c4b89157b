#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""
Tunable settings.

Every setting is looked up on the command line first, then in its
environment variable, then in the [ecquad] section of the ini file named
by ECQUAD_CONFIG, and finally falls back to its built-in default.
"""

import logging
import os
from collections import namedtuple
from configparser import ConfigParser
from typing import TYPE_CHECKING

from .errors import DomainError
from .exactnum import DEFAULT_RHO_STEPS
from .heights import DEFAULT_PRECISION, PRECISION_CEILING
from .modp import DEFAULT_PMAX

if TYPE_CHECKING:
    from typing import (
        Any,
        Callable,
        Dict,
        List,
        Mapping,
        Optional,
        Sequence,
    )

# pylint: disable=consider-using-f-string

CONFIG_SECTION = "ecquad"
CONFIG_ENV = "ECQUAD_CONFIG"
DEFAULT_CONFIG_PATH = os.path.join("~", ".config", "ecquad.ini")
DEFAULT_CACHE_DIR = os.path.join("~", ".cache", "ecquad")

Setting = namedtuple("Setting", ["env", "default", "convert"])


def strtobool(val):
    # type: (str) -> bool
    """
    Convert a string representation of truth to True or False.

    True values are 'y', 'yes', 't', 'true', 'on', and '1'; false values
    are 'n', 'no', 'f', 'false', 'off', and '0'.  Raises DomainError if
    'val' is anything else.
    """

    val = val.strip().lower()
    if val in ("y", "yes", "t", "true", "on", "1"):
        return True
    if val in ("n", "no", "f", "false", "off", "0"):
        return False
    raise DomainError("invalid truth value {!r}".format(val))


def _positive_int(value):
    # type: (Any) -> int
    try:
        number = int(value)
    except (TypeError, ValueError):
        raise DomainError(
            "expected an integer, got {!r}".format(value)
        ) from None
    if number < 1:
        raise DomainError("expected a positive integer, got {}".format(number))
    return number


def _boolean(value):
    # type: (Any) -> bool
    if isinstance(value, bool):
        return value
    return strtobool(str(value))


def _path(value):
    # type: (Any) -> str
    return os.path.expanduser(str(value))


def _log_level(value):
    # type: (Any) -> str
    level = str(value).lower()
    if not isinstance(logging.getLevelName(level.upper()), int):
        raise DomainError("unknown log level {!r}".format(value))
    return level


SETTINGS = {
    "cache_dir": Setting("ECQUAD_CACHE_DIR", DEFAULT_CACHE_DIR, _path),
    "use_cache": Setting("ECQUAD_USE_CACHE", "true", _boolean),
    "precision_bits": Setting(
        "ECQUAD_PRECISION_BITS", DEFAULT_PRECISION, _positive_int
    ),
    "precision_ceiling": Setting(
        "ECQUAD_PRECISION_CEILING", PRECISION_CEILING, _positive_int
    ),
    "jobs": Setting("ECQUAD_JOBS", os.cpu_count() or 1, _positive_int),
    "pmax": Setting("ECQUAD_PMAX", DEFAULT_PMAX, _positive_int),
    "rho_steps": Setting("ECQUAD_RHO_STEPS", DEFAULT_RHO_STEPS, _positive_int),
    "log_level": Setting("ECQUAD_LOG_LEVEL", "warning", _log_level),
}  # type: Dict[str, Setting]


class Settings(object):
    """Effective values of every setting with where each came from."""

    def __init__(self, values, origins, config_path):
        # type: (Dict[str, Any], Dict[str, str], Optional[str]) -> None
        """
        Create the settings.

        :param values: Setting name to converted value
        :param origins: Setting name to "cmdline", "env", "ini" or
                        "default"
        :param config_path: The ini file that was read, if any
        """

        self.values = dict(values)
        self.origins = dict(origins)
        self.config_path = config_path

    def __getattr__(self, name):
        # type: (str) -> Any
        try:
            return self.__dict__["values"][name]
        except KeyError:
            raise AttributeError(name) from None

    def to_lines(self, exclude=()):
        # type: (Sequence[str]) -> List[str]
        """
        Reproducibility header, one "# config.name=value" per setting.

        :param exclude: Settings left out of the header
        """

        lines = [
            "# config.{}={} ({})".format(name, self.values[name], origin)
            for name, origin in sorted(self.origins.items())
            if name not in exclude
        ]
        if self.config_path:
            lines.append("# config.file={}".format(self.config_path))
        return lines


def read_ini(path):
    # type: (str) -> Dict[str, str]
    """
    Return the [ecquad] section of an ini file.

    :param path: Path of the file; a missing file yields no values
    """

    parser = ConfigParser()
    if not parser.read(path):
        return {}
    if not parser.has_section(CONFIG_SECTION):
        logging.debug("%s has no [%s] section", path, CONFIG_SECTION)
        return {}
    return dict(parser.items(CONFIG_SECTION))


def load_settings(cmdline=None, config_path=None, environ=None):
    # type: (Optional[Mapping[str, Any]], Optional[str], Optional[Mapping[str, str]]) -> Settings  # noqa: E501
    """
    Resolve every setting.

    :param cmdline: Values given as options; None entries are unset
    :param config_path: Ini file, by default ECQUAD_CONFIG or
                        ~/.config/ecquad.ini
    :param environ: Environment, os.environ by default
    """

    cmdline = cmdline or {}
    environ = os.environ if environ is None else environ
    if config_path is None:
        config_path = environ.get(CONFIG_ENV, DEFAULT_CONFIG_PATH)
    config_path = os.path.expanduser(config_path)
    ini = read_ini(config_path)
    values = {}  # type: Dict[str, Any]
    origins = {}  # type: Dict[str, str]
    for name, setting in sorted(SETTINGS.items()):
        convert = setting.convert  # type: Callable[[Any], Any]
        if cmdline.get(name) is not None:
            raw, origin = cmdline[name], "cmdline"
        elif setting.env in environ:
            raw, origin = environ[setting.env], "env"
        elif name in ini:
            raw, origin = ini[name], "ini"
        else:
            raw, origin = setting.default, "default"
        try:
            values[name] = convert(raw)
        except DomainError as err:
            raise DomainError(
                "setting {} from {}: {}".format(name, origin, err.message)
            ) from None
        origins[name] = origin
    for name in ini:
        if name not in SETTINGS:
            logging.warning(
                "ignoring unknown setting %s in %s", name, config_path
            )
    return Settings(values, origins, config_path if ini else None)
