from __future__ import annotations

import logging
import time
from pathlib import Path
from typing import Callable, Optional, TypeVar

from sqlalchemy import create_engine, event
from sqlalchemy.engine import Engine
from sqlalchemy.exc import OperationalError
from sqlalchemy.orm import sessionmaker

from ..config import DATABASE_URL
from .migration_runner import run_migrations

logger = logging.getLogger(__name__)

T = TypeVar("T")

SessionLocal = sessionmaker(
    autoflush=False,
    expire_on_commit=False,
    future=True,
)

_engine: Optional[Engine] = None
_url: str = DATABASE_URL


def _sqlite_path(url: str) -> Optional[Path]:
    prefix = "sqlite:///"
    if url.startswith(prefix) and url != "sqlite:///:memory:":
        return Path(url[len(prefix):])
    return None


def _set_sqlite_pragma(dbapi_connection, _) -> None:
    """
    WAL: параллельные чтения, пока пул процессов пишет результаты.
    """
    cursor = dbapi_connection.cursor()
    cursor.execute("PRAGMA journal_mode=WAL;")
    cursor.execute("PRAGMA synchronous=NORMAL;")
    cursor.execute("PRAGMA busy_timeout=3000;")
    cursor.close()


def configure_database(url: str) -> Engine:
    """Rebind the session factory to `url` (tests and CONFHOM_DATABASE_URL)."""
    global _engine, _url
    if _engine is not None:
        _engine.dispose()
    path = _sqlite_path(url)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
    _engine = create_engine(
        url,
        connect_args={
            "check_same_thread": False,
            "timeout": 5,
        },
        future=True,
        pool_pre_ping=True,
    )
    event.listen(_engine, "connect", _set_sqlite_pragma)
    _url = url
    SessionLocal.configure(bind=_engine)
    logger.debug(f"[configure_database] url={url}")
    return _engine


def get_engine() -> Engine:
    if _engine is None:
        return configure_database(_url)
    return _engine


def init_database() -> None:
    """
    Run Alembic migrations to latest head.
    """
    run_migrations(get_engine())


def retry_on_lock(func: Callable[[], T], retries: int = 3, delay: float = 0.2) -> T:
    """
    Повторяет действие с БД, если SQLite занята другим процессом.
    """
    last_exc: Exception | None = None
    for attempt in range(retries):
        try:
            return func()
        except OperationalError as exc:
            msg = str(exc).lower()
            if "database is locked" not in msg and "busy" not in msg:
                raise
            last_exc = exc
            logger.info(f"[retry_on_lock] attempt {attempt + 1}: {exc}")
            time.sleep(delay * (attempt + 1))
    assert last_exc is not None
    raise last_exc
