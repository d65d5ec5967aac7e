from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

from alembic import command
from alembic.config import Config
from alembic.runtime.migration import MigrationContext
from alembic.script import ScriptDirectory
from sqlalchemy.engine import Engine

logger = logging.getLogger(__name__)

SCRIPT_LOCATION = Path(__file__).parent / "alembic"


def _alembic_config(db_url: str) -> Config:
    config = Config()
    config.set_main_option("script_location", str(SCRIPT_LOCATION))
    config.set_main_option("sqlalchemy.url", db_url)
    config.set_main_option("timezone", "UTC")
    return config


def head_revision() -> Optional[str]:
    return ScriptDirectory.from_config(_alembic_config("sqlite://")).get_current_head()


def current_revision(engine: Engine) -> Optional[str]:
    with engine.connect() as connection:
        return MigrationContext.configure(connection).get_current_revision()


def run_migrations(engine: Engine) -> None:
    """Upgrade the store behind `engine` to head on the engine's own connection."""
    head = head_revision()
    current = current_revision(engine)
    if current == head:
        logger.debug(f"[run_migrations] already at {head}")
        return
    cfg = _alembic_config(engine.url.render_as_string(hide_password=False))
    with engine.begin() as connection:
        cfg.attributes["connection"] = connection
        command.upgrade(cfg, "head")
    logger.info(f"[run_migrations] {current} -> {head}")
