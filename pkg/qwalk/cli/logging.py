import sys
from pathlib import Path

import loguru

from qwalk import PACKAGE_NAME


def configure_logger(debug: bool, log_file: Path | None = None) -> None:
    level = "DEBUG" if debug else "WARNING"

    loguru.logger.enable(PACKAGE_NAME)
    loguru.logger.remove()
    loguru.logger.add(sys.stderr, level=level)

    if log_file is not None:
        loguru.logger.add(str(log_file), rotation="5 MB", level="DEBUG")
