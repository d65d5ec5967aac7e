from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from ..cellcx import HomologyGroup, build_slice, estimate_record_count, homology
from ..config import MAX_RECORDS
from ..db.database import retry_on_lock
from ..di import Container
from ..exactla import CoefficientRing
from ..extengine import generation_report, theoremB_betti, yoneda_eps_action
from ..models import CheckResult, HomologyRow

logger = logging.getLogger(__name__)


class MemoryGuardError(RuntimeError):
    pass


def _rows_for(g: int, ring: CoefficientRing, n: int, groups: Dict[int, HomologyGroup], pipeline: str) -> List[HomologyRow]:
    return [
        HomologyRow(
            g=g,
            p=ring.p,
            coeff=ring.label,
            n=n,
            i=i,
            dim=group.rank,
            torsion=list(group.torsion),
            pipeline=pipeline,
        )
        for i, group in sorted(groups.items())
    ]


def _cellular_job(args: Tuple[int, CoefficientRing, int]) -> Tuple[int, Dict[int, HomologyGroup]]:
    g, ring, n = args
    slice_ = build_slice(g, n)
    return n, homology(slice_, ring)


def check_memory(g: int, max_n: int, limit: int = MAX_RECORDS) -> int:
    estimate = estimate_record_count(g, max_n)
    if estimate > limit:
        raise MemoryGuardError(
            f"g={g} n={max_n} needs about {estimate} cells, above the cap of {limit} "
            f"(raise CONFHOM_MAX_RECORDS to allow it)"
        )
    return estimate


def _load_cached(container: Optional[Container], g: int, ring: CoefficientRing, n: int, pipeline: str) -> List[HomologyRow]:
    if container is None:
        return []
    with container.session() as session:
        return container.homology_repo(session).get_slice(g, ring.label, n, pipeline)


def _store(container: Optional[Container], rows: List[HomologyRow]) -> None:
    if container is None or not rows:
        return

    def write() -> int:
        with container.session() as session:
            return container.homology_repo(session).upsert_many(rows)

    retry_on_lock(write)


def run_cellular(
    g: int,
    ring: CoefficientRing,
    max_n: int,
    threads: int = 1,
    container: Optional[Container] = None,
) -> List[HomologyRow]:
    """Homology of the cellular complex for n = 0..max_n, one slice per n."""
    check_memory(g, max_n)
    cached: Dict[int, List[HomologyRow]] = {}
    for n in range(max_n + 1):
        rows = _load_cached(container, g, ring, n, "cellular")
        if rows:
            cached[n] = rows
    jobs = [(g, ring, n) for n in range(max_n + 1) if n not in cached]
    logger.info(f"[run_cellular] g={g} ring={ring} cached={sorted(cached)} computing={[n for _, _, n in jobs]}")
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_cellular_job, jobs))
    else:
        results = [_cellular_job(job) for job in jobs]
    fresh: List[HomologyRow] = []
    for n, groups in sorted(results):
        rows = _rows_for(g, ring, n, groups, "cellular")
        cached[n] = rows
        fresh.extend(rows)
    _store(container, fresh)
    return [row for n in sorted(cached) for row in cached[n]]


def run_structured(
    g: int,
    ring: CoefficientRing,
    max_n: int,
    container: Optional[Container] = None,
) -> List[HomologyRow]:
    """Betti numbers from the Ext splitting; F_2 is routed through the cellular complex."""
    if ring.kind == "z":
        raise ValueError("the structured pipeline needs a field")
    if ring.kind == "fp" and ring.p == 2:
        logger.info("[run_structured] p=2 falls back to the cellular pipeline")
        return run_cellular(g, ring, max_n, container=container)
    cached = [_load_cached(container, g, ring, n, "structured") for n in range(max_n + 1)]
    if all(cached):
        return [row for rows in cached for row in rows]
    table = theoremB_betti(g, ring, max_n)
    rows: List[HomologyRow] = []
    for n in range(max_n + 1):
        rows.extend(_rows_for(g, ring, n, {i: table.group(n, i) for i in range(n + 1)}, "structured"))
    _store(container, rows)
    return rows


def compare(first: Sequence[HomologyRow], second: Sequence[HomologyRow]) -> List[Dict[str, int]]:
    left = {(r.n, r.i): r.dim for r in first}
    right = {(r.n, r.i): r.dim for r in second}
    out = []
    for key in sorted(set(left) | set(right)):
        a, b = left.get(key, 0), right.get(key, 0)
        if a != b:
            out.append({"n": key[0], "i": key[1], "cellular": a, "structured": b})
    return out


def dims(rows: Sequence[HomologyRow]) -> Dict[Tuple[int, int], int]:
    return {(r.n, r.i): r.dim for r in rows}


# ---------------------------------------------------------------------------
# reports


def _p_adic(value: int, p: int) -> int:
    out = 0
    while value % p == 0:
        value //= p
        out += 1
    return out


def torsion_report(
    g: int,
    max_n: int,
    primes: Sequence[int] = (3, 5),
    threads: int = 1,
    container: Optional[Container] = None,
) -> List[CheckResult]:
    integral = run_cellular(g, CoefficientRing.integers(), max_n, threads, container)
    by_key = {(r.n, r.i): r for r in integral}
    checks: List[CheckResult] = []

    top_torsion = [(n, by_key[(n, n)].torsion) for n in range(max_n + 1) if by_key[(n, n)].torsion]
    checks.append(CheckResult(name=f"g={g} top degree free", ok=not top_torsion, detail=str(top_torsion)))

    odd = [
        (n, by_key[(n, n - 1)].torsion)
        for n in range(1, max_n + 1)
        if any(d & (d - 1) for d in by_key[(n, n - 1)].torsion)
    ]
    checks.append(CheckResult(name=f"g={g} top-minus-one torsion is 2-primary", ok=not odd, detail=str(odd)))

    for p in primes:
        squared = [(r.n, r.i, d) for r in integral for d in r.torsion if _p_adic(d, p) > 1]
        checks.append(CheckResult(name=f"g={g} {p}-power torsion has exponent {p}", ok=not squared, detail=str(squared)))
        floor = max(2 * p - 2, g + p)
        early = [(r.n, r.i) for r in integral if r.i < floor and any(d % p == 0 for d in r.torsion)]
        checks.append(CheckResult(name=f"g={g} no {p}-torsion below degree {floor}", ok=not early, detail=str(early)))
        modular = dims(run_cellular(g, CoefficientRing.prime_field(p), max_n, threads, container))
        mismatched = [n for n in range(max_n + 1) if modular[(n, n)] != by_key[(n, n)].dim]
        checks.append(
            CheckResult(name=f"g={g} top degree has equal Q and F{p} dimension", ok=not mismatched, detail=str(mismatched))
        )
    return checks


def filled_genus_report(
    g: int, p: int, max_n: int, threads: int = 1, container: Optional[Container] = None
) -> CheckResult:
    """2 dim H_i(C_n(S_g)) <= dim H_{i+1}(C_{n+1}(S_{g+1})) over F_p."""
    ring = CoefficientRing.prime_field(p)
    lower = dims(run_cellular(g, ring, max_n - 1, threads, container))
    upper = dims(run_cellular(g + 1, ring, max_n, threads, container))
    bad = [
        (n, i)
        for (n, i), d in sorted(lower.items())
        if 2 * d > upper.get((n + 1, i + 1), 0)
    ]
    return CheckResult(name=f"filled genus g={g}->{g + 1} F{p}", ok=not bad, detail=str(bad))


def growth_report(
    g: int = 1, p: int = 3, max_n: int = 10, threads: int = 1, container: Optional[Container] = None
) -> CheckResult:
    """Top-degree dimensions: nondecreasing, with fitted linear bounds c n <= dim <= C n."""
    table = dims(run_cellular(g, CoefficientRing.prime_field(p), max_n, threads, container))
    top = [table[(n, n)] for n in range(max_n + 1)]
    monotone = all(a <= b for a, b in zip(top, top[1:]))
    ratios = [top[n] / n for n in range(1, max_n + 1)]
    low, high = (min(ratios), max(ratios)) if ratios else (0.0, 0.0)
    detail = f"dims={top} c={low:.3f} C={high:.3f}"
    return CheckResult(name=f"top-degree growth g={g} F{p}", ok=monotone, detail=detail)


def generation_check(g: int, p: int, max_n: int) -> List[CheckResult]:
    checks = []
    for u in range(g + 1):
        report = generation_report(u, p, max_n, max_n)
        checks.append(
            CheckResult(
                name=f"Ext(B_{u}) generated in bar-degrees 0, -1 (F{p})",
                ok=report.ok,
                detail=str(report.generators),
            )
        )
    rows = yoneda_eps_action(g, p, max_n)
    bad = [(r.n, r.i) for r in rows if not r.injective]
    checks.append(CheckResult(name=f"epsilon injective g={g} F{p} n<={max_n}", ok=not bad, detail=str(bad)))
    return checks


def stability_check(g: int, p: int, max_n: int) -> CheckResult:
    rows = yoneda_eps_action(g, p, max_n)
    bad = [(r.n, r.i) for r in rows if not r.injective or (2 * r.i <= r.n and not r.bijective)]
    return CheckResult(name=f"epsilon stability g={g} F{p} n<={max_n}", ok=not bad, detail=str(bad))
