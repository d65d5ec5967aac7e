import os
from pathlib import Path

from .version import __version__

APP_VERSION = os.environ.get("APP_VERSION", __version__)
JSON_SCHEMA_VERSION = "1"
DEFAULT_WEIGHT_BOUND = 24
DEFAULT_BAR_BOUND = 8
MAX_RECORDS = int(os.environ.get("CONFHOM_MAX_RECORDS", "250000"))
LOG_LEVEL = os.environ.get("CONFHOM_LOG_LEVEL", "WARNING").upper()


def _default_threads() -> int:
    raw = os.environ.get("CONFHOM_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


DEFAULT_THREADS = _default_threads()


def _app_root() -> Path:
    """Корень репозитория: два уровня над пакетом."""
    try:
        return Path(__file__).resolve().parents[2]
    except Exception:  # noqa: BLE001
        return Path.cwd()


def _user_data_dir() -> Path:
    home = Path.home()
    return home / ".local" / "share" / "confhom"


def _resolve_app_data_dir() -> Path:
    # 1) explicit override
    custom = os.environ.get("CONFHOM_APP_DATA")
    if custom:
        return Path(custom).expanduser()

    # 2) repository root (dev checkout)
    candidate = _app_root()
    if os.access(candidate, os.W_OK):
        return candidate

    # 3) fallback to user data dir
    fallback = _user_data_dir()
    fallback.mkdir(parents=True, exist_ok=True)
    return fallback


APP_DATA_DIR = _resolve_app_data_dir()
DATABASE_PATH = APP_DATA_DIR / "confhom.db"
DATABASE_URL = os.environ.get("CONFHOM_DATABASE_URL", f"sqlite:///{DATABASE_PATH}")
