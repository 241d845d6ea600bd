from pathlib import Path

from dynaconf import Dynaconf  # type: ignore

ROOT_DIR = Path(__file__).resolve().parent.parent

settings = Dynaconf(
    settings_files=[str(ROOT_DIR / "settings.toml")],
    environments=True,
    envvar_prefix="HELLY",
)
