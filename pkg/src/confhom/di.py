from __future__ import annotations

from contextlib import contextmanager
from typing import Generator, Optional

from sqlalchemy.orm import Session

from .db.database import SessionLocal, configure_database, init_database
from .db.repositories import HomologyRepository, JobRunRepository


class Container:
    def __init__(self, database_url: Optional[str] = None) -> None:
        self._ready = False
        self._database_url = database_url

    def ensure_ready(self) -> None:
        if self._ready:
            return
        if self._database_url is not None:
            configure_database(self._database_url)
        init_database()
        self._ready = True

    @contextmanager
    def session(self) -> Generator[Session, None, None]:
        self.ensure_ready()
        session = SessionLocal()
        try:
            yield session
            session.commit()
        except Exception:  # noqa: BLE001
            session.rollback()
            raise
        finally:
            session.close()

    def homology_repo(self, session: Session) -> HomologyRepository:
        return HomologyRepository(session)

    def job_repo(self, session: Session) -> JobRunRepository:
        return JobRunRepository(session)


_container: Container | None = None


def get_container() -> Container:
    global _container
    if _container is None:
        _container = Container()
    return _container


def reset_container(database_url: Optional[str] = None) -> Container:
    global _container
    _container = Container(database_url)
    return _container
