from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from ..cellcx import build_slice, homology_action_trivial
from ..freegroup import FreeGroupMap, WordParseError, parse_assignments
from ..mcg import PreconditionViolation, check_umor_triviality, validate, xi, xi_p
from ..models import CandidateReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParsedCandidate:
    name: str
    line: int
    phi: FreeGroupMap


def parse_candidates(text: str, g: int) -> List[ParsedCandidate]:
    """
    Формат файла: по одному кандидату на строку,
    `имя: g1 -> слово; g2 -> слово`, `#` начинает комментарий.
    """
    rank = 2 * g
    out: List[ParsedCandidate] = []
    seen = set()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if ":" not in line:
            raise WordParseError("expected `name: assignments`", number, 1)
        name, body = line.split(":", 1)
        name = name.strip()
        if not name:
            raise WordParseError("missing candidate name", number, 1)
        if name in seen:
            raise WordParseError(f"duplicate candidate {name!r}", number, 1)
        seen.add(name)
        phi = parse_assignments(body, rank, number, len(line) - len(body))
        out.append(ParsedCandidate(name, number, phi))
    logger.debug(f"[parse_candidates] g={g} parsed={len(out)}")
    return out


def load_candidates(path: Path, g: int) -> List[ParsedCandidate]:
    return parse_candidates(Path(path).read_text(encoding="utf-8"), g)


def evaluate(
    candidate: ParsedCandidate,
    g: int,
    p: int,
    weight_bound: int,
    max_n: Optional[int] = None,
) -> CandidateReport:
    report = CandidateReport(name=candidate.name, line=candidate.line, g=g)
    try:
        validation = validate(candidate.phi, g)
        report.boundary_equal = validation.boundary_equal
        report.omega_preserved = validation.omega_preserved
        report.failures = validation.failures()
        report.xi = xi(candidate.phi).as_strings()
        report.xi_p = xi_p(candidate.phi, p).as_strings()
        try:
            report.umor_trivial = check_umor_triviality(candidate.phi, p, weight_bound)
        except PreconditionViolation as exc:
            report.failures.append(str(exc))
        if max_n is not None and validation.omega_preserved:
            report.homology_trivial = all(
                homology_action_trivial(candidate.phi, build_slice(g, n), p) for n in range(max_n + 1)
            )
        report.ok = validation.ok
    except Exception as exc:  # noqa: BLE001
        logger.exception(f"[evaluate] candidate {candidate.name!r} failed")
        report.ok = False
        report.error = str(exc)
    return report


def evaluate_all(
    candidates: List[ParsedCandidate],
    g: int,
    p: int,
    weight_bound: int,
    max_n: Optional[int] = None,
) -> List[CandidateReport]:
    reports = [evaluate(c, g, p, weight_bound, max_n) for c in candidates]
    failed = [r.name for r in reports if not r.ok]
    if failed:
        logger.info(f"[evaluate_all] не прошли проверку: {failed}")
    return reports
