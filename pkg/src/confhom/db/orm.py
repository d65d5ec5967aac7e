from __future__ import annotations

from datetime import datetime
from typing import Optional

from sqlalchemy import DateTime, Integer, String, Text, UniqueConstraint, func
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column


class Base(DeclarativeBase):
    pass


class HomologyRowRecord(Base):
    __tablename__ = "homology_rows"
    __table_args__ = (
        UniqueConstraint("g", "coeff", "n", "i", "pipeline", name="uq_homology_row"),
    )

    id: Mapped[int] = mapped_column(primary_key=True, autoincrement=True)
    g: Mapped[int] = mapped_column(Integer, nullable=False)
    p: Mapped[Optional[int]] = mapped_column(Integer, nullable=True)
    coeff: Mapped[str] = mapped_column(String, nullable=False)
    n: Mapped[int] = mapped_column(Integer, nullable=False)
    i: Mapped[int] = mapped_column(Integer, nullable=False)
    dim: Mapped[int] = mapped_column(Integer, nullable=False)
    torsion: Mapped[str] = mapped_column(Text, nullable=False, default="[]")
    pipeline: Mapped[str] = mapped_column(String, nullable=False)
    computed_at: Mapped[datetime] = mapped_column(
        DateTime, server_default=func.now(), nullable=False
    )


class JobRun(Base):
    __tablename__ = "job_runs"

    id: Mapped[int] = mapped_column(primary_key=True, autoincrement=True)
    command: Mapped[str] = mapped_column(String, nullable=False)
    status: Mapped[str] = mapped_column(String, nullable=False)
    config_json: Mapped[str] = mapped_column(Text, nullable=False)
    envelope_json: Mapped[str] = mapped_column(Text, nullable=False)
    created_at: Mapped[datetime] = mapped_column(
        DateTime, server_default=func.now(), nullable=False
    )
