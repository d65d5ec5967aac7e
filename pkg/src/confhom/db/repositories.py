from __future__ import annotations

import json
from typing import Iterable, List, Optional

from sqlalchemy import func, select
from sqlalchemy.dialects.sqlite import insert
from sqlalchemy.orm import Session

from ..models import HomologyRow, JobRunRecord, ResultEnvelope
from .orm import HomologyRowRecord, JobRun


class HomologyRepository:
    def __init__(self, session: Session) -> None:
        self.session = session

    def upsert_many(self, rows: Iterable[HomologyRow]) -> int:
        values = [
            {
                "g": row.g,
                "p": row.p,
                "coeff": row.coeff,
                "n": row.n,
                "i": row.i,
                "dim": row.dim,
                "torsion": json.dumps(row.torsion),
                "pipeline": row.pipeline,
            }
            for row in rows
        ]
        if not values:
            return 0

        stmt = insert(HomologyRowRecord).values(values)
        stmt = stmt.on_conflict_do_update(
            index_elements=[
                HomologyRowRecord.g,
                HomologyRowRecord.coeff,
                HomologyRowRecord.n,
                HomologyRowRecord.i,
                HomologyRowRecord.pipeline,
            ],
            set_={
                "dim": stmt.excluded.dim,
                "torsion": stmt.excluded.torsion,
                "p": stmt.excluded.p,
                "computed_at": func.now(),
            },
        )
        self.session.execute(stmt)
        return len(values)

    def get_slice(self, g: int, coeff: str, n: int, pipeline: str) -> List[HomologyRow]:
        """Stored rows of one n, or [] when the slice is incomplete."""
        stmt = (
            select(HomologyRowRecord)
            .where(
                HomologyRowRecord.g == g,
                HomologyRowRecord.coeff == coeff,
                HomologyRowRecord.n == n,
                HomologyRowRecord.pipeline == pipeline,
            )
            .order_by(HomologyRowRecord.i)
        )
        rows = [HomologyRow.model_validate(row, from_attributes=True) for row in self.session.scalars(stmt)]
        if [row.i for row in rows] != list(range(n + 1)):
            return []
        return rows

    def count(self, g: Optional[int] = None, coeff: Optional[str] = None) -> int:
        conditions = []
        if g is not None:
            conditions.append(HomologyRowRecord.g == g)
        if coeff is not None:
            conditions.append(HomologyRowRecord.coeff == coeff)
        stmt = select(func.count()).select_from(HomologyRowRecord).where(*conditions)
        return int(self.session.scalar(stmt) or 0)


class JobRunRepository:
    def __init__(self, session: Session) -> None:
        self.session = session

    def add(self, envelope: ResultEnvelope) -> int:
        run = JobRun(
            command=envelope.config.command,
            status=envelope.status,
            config_json=envelope.config.model_dump_json(),
            envelope_json=envelope.model_dump_json(),
        )
        self.session.add(run)
        self.session.flush()
        return run.id

    def list(
        self,
        command: Optional[str] = None,
        limit: int = 20,
        offset: int = 0,
    ) -> List[JobRunRecord]:
        stmt = select(JobRun)
        if command:
            stmt = stmt.where(JobRun.command == command)
        stmt = stmt.order_by(JobRun.created_at.desc(), JobRun.id.desc()).offset(max(0, offset)).limit(limit)
        return [JobRunRecord.model_validate(row, from_attributes=True) for row in self.session.scalars(stmt)]

    def count(self, command: Optional[str] = None) -> int:
        stmt = select(func.count()).select_from(JobRun)
        if command:
            stmt = stmt.where(JobRun.command == command)
        return int(self.session.scalar(stmt) or 0)

    def get_by_id(self, record_id: int) -> Optional[JobRunRecord]:
        row = self.session.get(JobRun, record_id)
        return JobRunRecord.model_validate(row, from_attributes=True) if row else None
