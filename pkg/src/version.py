import sys

import tomli

from src.settings import ROOT_DIR

try:
    with open(ROOT_DIR / "pyproject.toml", "rb") as f:
        __version__ = tomli.load(f)["project"]["version"]
except Exception as e:
    print(e, file=sys.stderr)
    __version__ = "test"
