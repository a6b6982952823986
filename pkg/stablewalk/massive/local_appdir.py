from pathlib import Path
from stablewalk.massive.constants import CACHE_DIRNAME

import appdirs


MASSIVE_CACHE_DIR = Path(appdirs.user_cache_dir(appname=CACHE_DIRNAME))


def ensure_dir(directory: Path):
    if not directory.exists():
        directory.mkdir(parents=True)
