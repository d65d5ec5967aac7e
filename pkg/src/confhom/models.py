from __future__ import annotations

import csv
import json
from datetime import datetime
from io import StringIO
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator
from sympy import isprime

from .config import DEFAULT_BAR_BOUND, DEFAULT_THREADS, DEFAULT_WEIGHT_BOUND, JSON_SCHEMA_VERSION

CSV_HEADER = ["g", "p", "coeff", "n", "i", "dim", "torsion"]

Pipeline = Literal["cellular", "structured", "both"]


class JobConfig(BaseModel):
    command: str
    g: Optional[int] = Field(default=None, ge=0)
    p: Optional[int] = None
    coeff: str = "fp"
    max_n: Optional[int] = Field(default=None, ge=0)
    u: Optional[int] = Field(default=None, ge=0)
    i: Optional[int] = Field(default=None, ge=0)
    weight_bound: int = Field(default=DEFAULT_WEIGHT_BOUND, gt=0)
    bar_bound: int = Field(default=DEFAULT_BAR_BOUND, gt=0)
    pipeline: Pipeline = "cellular"
    output_format: Literal["csv", "json"] = "json"
    threads: int = Field(default=DEFAULT_THREADS, ge=1, exclude=True)
    suite: Optional[str] = None
    candidates: Optional[str] = None
    use_cache: bool = True

    model_config = ConfigDict(extra="ignore", from_attributes=True)

    @field_validator("p")
    @classmethod
    def _prime(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and not isprime(value):
            raise ValueError(f"p={value} не является простым")
        return value


class HomologyRow(BaseModel):
    g: int
    p: Optional[int] = None
    coeff: str
    n: int
    i: int
    dim: int
    torsion: List[int] = Field(default_factory=list)
    pipeline: str = "cellular"

    model_config = ConfigDict(extra="ignore", from_attributes=True)

    @field_validator("torsion", mode="before")
    @classmethod
    def _torsion_from_text(cls, value: Any) -> Any:
        # в БД хранится JSON-текст
        if isinstance(value, str):
            return json.loads(value) if value else []
        return value

    def csv_cells(self) -> List[str]:
        return [
            str(self.g),
            "" if self.p is None else str(self.p),
            self.coeff,
            str(self.n),
            str(self.i),
            str(self.dim),
            ";".join(str(d) for d in self.torsion),
        ]


class BarRow(BaseModel):
    i: int
    m: int
    c: int

    model_config = ConfigDict(extra="ignore", from_attributes=True)


class ExtRow(BaseModel):
    weight: int
    bar_degree: int
    assembled: int
    oracle: Optional[int] = None

    model_config = ConfigDict(extra="ignore", from_attributes=True)


class CandidateReport(BaseModel):
    name: str
    line: int
    g: int
    ok: bool = True
    boundary_equal: bool = False
    omega_preserved: bool = True
    failures: List[str] = Field(default_factory=list)
    xi: List[str] = Field(default_factory=list)
    xi_p: List[str] = Field(default_factory=list)
    umor_trivial: Optional[bool] = None
    homology_trivial: Optional[bool] = None
    error: Optional[str] = None

    model_config = ConfigDict(extra="ignore", from_attributes=True)


class CheckResult(BaseModel):
    name: str
    ok: bool
    detail: str = ""

    model_config = ConfigDict(extra="ignore", from_attributes=True)


class ResultEnvelope(BaseModel):
    schema_version: str = JSON_SCHEMA_VERSION
    version: str
    config: JobConfig
    bounds: Dict[str, int] = Field(default_factory=dict)
    rows: List[Dict[str, Any]] = Field(default_factory=list)
    provenance: List[str] = Field(default_factory=list)
    discrepancies: List[Dict[str, Any]] = Field(default_factory=list)
    checks: List[CheckResult] = Field(default_factory=list)
    status: Literal["ok", "failed"] = "ok"

    model_config = ConfigDict(extra="ignore", from_attributes=True)

    @property
    def ok(self) -> bool:
        return self.status == "ok"


class JobRunRecord(BaseModel):
    record_id: int = Field(alias="id")
    command: str
    status: str
    created_at: datetime
    config_json: str
    envelope_json: str

    model_config = ConfigDict(extra="ignore", from_attributes=True, populate_by_name=True)

    def envelope(self) -> ResultEnvelope:
        return ResultEnvelope.model_validate_json(self.envelope_json)


def homology_csv(rows: List[HomologyRow]) -> str:
    buffer = StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.csv_cells())
    return buffer.getvalue()
