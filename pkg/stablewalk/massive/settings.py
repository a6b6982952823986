"""Environment driven settings.

Every name in this module can be overridden with an environment variable
called `MASSIVE_<NAME>`, e.g. `MASSIVE_WORKERS=4`.
"""
from pathlib import Path
from stablewalk.massive import constants
from typing import Any
from typing import Optional

import logging
import os


logger = logging.getLogger(__name__)


MASSIVE_WORKERS = 1
MASSIVE_TRUNCATION = constants.DEFAULT_TRUNCATION
MASSIVE_FAR_FIELD_RADIUS = constants.FAR_FIELD_RADIUS
MASSIVE_SOLVER_CAP = constants.SOLVER_CAP
MASSIVE_CACHE = "on"
MASSIVE_LOGLEVEL = "WARN"


def get_var(name: str, vartype: type) -> Any:
    varname = f"MASSIVE_{name.upper()}"
    value = os.environ.get(varname, globals()[varname])
    try:
        return vartype(value)
    except (TypeError, ValueError):
        logger.error(f"Invalid value `{value}` for {varname}: using the default")
        return vartype(globals()[varname])


def workers() -> int:
    return max(1, get_var("workers", int))


def cache_dir() -> Optional[Path]:
    """Directory for on-disk caches, or None when caching is off.
    `MASSIVE_CACHE` accepts `on`, `off` or a directory path.
    """
    from stablewalk.massive.local_appdir import MASSIVE_CACHE_DIR

    value = get_var("cache", str).strip()
    if value.lower() in ("off", "0", "false", "no"):
        return None
    if value.lower() in ("on", "1", "true", "yes", ""):
        return MASSIVE_CACHE_DIR
    return Path(value)
