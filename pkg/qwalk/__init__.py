import os
from functools import cache
from importlib import metadata

from loguru import logger

PACKAGE_NAME = "qwalk"
DISTRIBUTION_NAME = "qwalk-transfer"


@cache
def get_version() -> str:
    return os.getenv("QWALK_VERSION", metadata.version(DISTRIBUTION_NAME))


logger.disable(PACKAGE_NAME)

try:
    __version__ = get_version()
except metadata.PackageNotFoundError:
    # Running from a source checkout without an installed distribution.
    __version__ = "0.0.0"
