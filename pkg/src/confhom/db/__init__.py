"""Локальное хранилище результатов в SQLite (SQLAlchemy + Alembic)."""

from .database import SessionLocal, configure_database, init_database, retry_on_lock
from .repositories import HomologyRepository, JobRunRepository

__all__ = [
    "SessionLocal",
    "configure_database",
    "init_database",
    "retry_on_lock",
    "HomologyRepository",
    "JobRunRepository",
]
