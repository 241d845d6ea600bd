import sys

import tomli

from src.settings import ROOT_DIR


def get_service_name():
    """Retrieves the tool name from project metadata."""
    try:
        with open(ROOT_DIR / "pyproject.toml", "rb") as f:
            name = tomli.load(f)["project"]["name"]
    except Exception as e:
        print(e, file=sys.stderr)
        name = "colorful-helly"
    return name
