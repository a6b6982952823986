from pathlib import Path
from stablewalk.massive import __version__
from stablewalk.massive import settings
from stablewalk.massive.constants import CONF_FILENAME
from stablewalk.massive.constants import RESOLVED_CONF_FILENAME
from stablewalk.massive.constants import SCHEMA_VERSION
from stablewalk.massive.exceptions import ParameterError
from stablewalk.massive.kernels import WalkConfig
from typing import Any
from typing import Callable
from typing import Dict
from typing import Optional
from typing import Union

import logging
import os
import yaml


logger = logging.getLogger(__name__)


#: Values used when neither the command line nor the config file set a key
DEFAULTS: Dict[str, Callable[[], Any]] = {
    "seed": lambda: 0,
    "workers": settings.workers,
    "truncation": lambda: settings.get_var("truncation", int),
    "far_field_radius": lambda: settings.get_var("far_field_radius", int),
    "solver_cap": lambda: settings.get_var("solver_cap", int),
}


class RunConfig:
    """Parameters of a single command run.

    Values come, in order of precedence, from the command line, from the
    section named after the command in `massive.config.yaml`, from the top
    level of that file, from `MASSIVE_*` environment variables and from
    built-in defaults. The config file is looked up in the current
    directory unless a path is given.
    """

    #: The file the configuration was read from, if any
    path: Optional[Path] = None

    def __init__(
        self,
        command: str,
        options: Optional[Dict[str, Any]] = None,
        path: Union[Path, str, None] = None,
    ):
        self.command = command
        self.file_config = self._load(path)
        section = self.file_config.get(command) or {}
        if not isinstance(section, dict):
            raise ParameterError(f"Section `{command}` in {self.path} is not a mapping")
        self.values: Dict[str, Any] = {
            key: value
            for key, value in self.file_config.items()
            if not isinstance(value, dict)
        }
        self.values.update(section)
        for key, value in (options or {}).items():
            if value is not None:
                self.values[key] = value
        for key, default in DEFAULTS.items():
            if key not in self.values:
                self.values[key] = default()

    def _load(self, path: Union[Path, str, None]) -> Dict[str, Any]:
        if path is None:
            candidate = Path(os.getcwd()) / CONF_FILENAME
            if not candidate.is_file():
                return {}
            path = candidate
        path = Path(path)
        if not path.is_file():
            raise ParameterError(f"Config file {path} not found")
        self.path = path
        logger.debug(f"Loading config from {path}")
        config = yaml.load(path.open(), Loader=yaml.FullLoader) or {}
        if not isinstance(config, dict):
            raise ParameterError(f"{path} does not contain a mapping")
        return config

    def get(self, key: str, default: Any = None) -> Any:
        return self.values.get(key, default)

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    @property
    def walk(self) -> WalkConfig:
        return WalkConfig(
            int(self["d"]), float(self["alpha"]), int(self["truncation"])
        )

    def validate(self):
        """Check the values shared by all commands before running anything."""
        if "d" in self.values or "alpha" in self.values:
            WalkConfig(int(self["d"]), float(self["alpha"]))
        for key in ("workers", "truncation", "far_field_radius", "solver_cap"):
            if int(self[key]) < 1:
                raise ParameterError(f"`{key}` must be positive, got {self[key]}")
        if int(self["seed"]) < 0:
            raise ParameterError(f"`seed` must be nonnegative, got {self['seed']}")
        shells = self.get("shells")
        if shells is not None:
            first, last = shells
            if not 0 <= int(first) <= int(last):
                raise ParameterError(f"Invalid shell range {first}..{last}")
        for key in ("n_paths", "horizon", "radius_cap"):
            if key in self.values and int(self[key]) < 1:
                raise ParameterError(f"`{key}` must be positive, got {self[key]}")
        return self

    def resolved(self) -> Dict[str, Any]:
        """Every value the run depends on, suitable for reproducing it."""
        resolved = {
            "command": self.command,
            "schema_version": SCHEMA_VERSION,
            "version": __version__,
        }
        for key, value in sorted(self.values.items()):
            if isinstance(value, tuple):
                value = list(value)
            resolved[key] = value
        return resolved

    def dump(self, directory: Union[Path, str]) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        destination = directory / RESOLVED_CONF_FILENAME
        destination.write_text(yaml.dump(self.resolved(), default_flow_style=False))
        logger.info(f"Resolved config written to {destination}")
        return destination
