from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Callable, Dict, List, Tuple

from ..cellcx import build_slice, estimate_record_count
from ..config import MAX_RECORDS
from ..di import Container
from ..exactla import CoefficientRing
from ..extengine import (
    build_Bu,
    cobar_ext_dims,
    compute_Nui,
    fake_basechange,
    genus_prime_report,
    periodic_ext_dims,
    sparse_tools,
)
from ..extengine.ext import ext_of_Bu
from ..freegroup import ExteriorClass
from ..mcg import check_cocycle, check_umor_triviality, random_catalog_product, separating, twist_power, xi
from ..models import CheckResult
from ..umor import signed_shuffle_coeff
from .pipelines import (
    compare,
    filled_genus_report,
    generation_check,
    growth_report,
    run_cellular,
    run_structured,
    stability_check,
    torsion_report,
)

logger = logging.getLogger(__name__)


class UnknownSuiteError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteBounds:
    name: str
    slice_genus: int
    slice_n: int
    shuffle_total: int
    cross_genus: int
    cross_n: int
    primes: Tuple[int, ...]
    nui_u: int
    oracle_u: int
    oracle_weight: int
    oracle_bar: int
    torsion_genus: int
    torsion_n: int
    stability_genus: int
    stability_n: int
    mcg_weight: int
    cocycle_pairs: int
    sparse_u: int
    generation_n: int
    growth_n: int


SUITES: Dict[str, SuiteBounds] = {
    "fast": SuiteBounds(
        name="fast",
        slice_genus=2,
        slice_n=5,
        shuffle_total=10,
        cross_genus=1,
        cross_n=4,
        primes=(3,),
        nui_u=8,
        oracle_u=3,
        oracle_weight=12,
        oracle_bar=4,
        torsion_genus=1,
        torsion_n=4,
        stability_genus=1,
        stability_n=4,
        mcg_weight=4,
        cocycle_pairs=20,
        sparse_u=4,
        generation_n=4,
        growth_n=5,
    ),
    "full": SuiteBounds(
        name="full",
        slice_genus=3,
        slice_n=10,
        shuffle_total=10,
        cross_genus=2,
        cross_n=8,
        primes=(3, 5),
        nui_u=8,
        oracle_u=6,
        oracle_weight=24,
        oracle_bar=8,
        torsion_genus=2,
        torsion_n=8,
        stability_genus=2,
        stability_n=8,
        mcg_weight=8,
        cocycle_pairs=200,
        sparse_u=6,
        generation_n=8,
        growth_n=10,
    ),
}


def brute_force_shuffle_sum(m: int, n: int) -> int:
    """Sum of shuffle signs over all (m, n)-shuffles."""
    total = 0
    for first in combinations(range(m + n), m):
        chosen = set(first)
        inversions = 0
        seen_second = 0
        for pos in range(m + n):
            if pos in chosen:
                inversions += seen_second
            else:
                seen_second += 1
        total += -1 if inversions % 2 else 1
    return total


def _check_differentials(bounds: SuiteBounds) -> CheckResult:
    skipped = []
    for g in range(bounds.slice_genus + 1):
        for n in range(bounds.slice_n + 1):
            if estimate_record_count(g, n) > MAX_RECORDS:
                skipped.append((g, n))
                continue
            build_slice(g, n, verify=True)
    return CheckResult(name="d^2 = 0 on every slice", ok=not skipped, detail=f"over memory cap: {skipped}" if skipped else "")


def _check_shuffles(bounds: SuiteBounds) -> CheckResult:
    bad = [
        (m, total - m)
        for total in range(bounds.shuffle_total + 1)
        for m in range(total + 1)
        if signed_shuffle_coeff(m, total - m) != brute_force_shuffle_sum(m, total - m)
    ]
    return CheckResult(name="signed shuffle coefficients", ok=not bad, detail=str(bad))


def _check_bouquet(bounds: SuiteBounds) -> CheckResult:
    bad = []
    for g in range(1, bounds.slice_genus + 1):
        for n in range(bounds.slice_n + 1):
            if estimate_record_count(g, n) > MAX_RECORDS:
                continue
            size = build_slice(g, n, verify=False).size(0)
            if size != comb(n + 2 * g - 1, 2 * g - 1):
                bad.append((g, n, size))
    return CheckResult(name="bar-degree 0 record counts", ok=not bad, detail=str(bad))


def _check_cross(bounds: SuiteBounds, ring: CoefficientRing, threads: int, container) -> CheckResult:
    found = []
    for g in range(bounds.cross_genus + 1):
        cellular = run_cellular(g, ring, bounds.cross_n, threads, container)
        structured = run_structured(g, ring, bounds.cross_n, container)
        found += [dict(diff, g=g) for diff in compare(cellular, structured)]
    return CheckResult(name=f"cellular = structured over {ring.label}", ok=not found, detail=str(found))


def _check_poincare(bounds: SuiteBounds) -> List[CheckResult]:
    out = []
    for p in bounds.primes:
        bad = [u for u in range(bounds.nui_u + 1) if not compute_Nui(u, p).poincare_identity()]
        out.append(CheckResult(name=f"Poincare identity for N_(u,i), p={p}", ok=not bad, detail=str(bad)))
    return out


def _check_oracle(bounds: SuiteBounds, threads: int) -> List[CheckResult]:
    out = []
    for p in bounds.primes:
        for u in range(bounds.oracle_u + 1):
            assembled, oracle = ext_of_Bu(u, p, bounds.oracle_weight, bounds.oracle_bar, threads)
            diff = assembled.differences(oracle)
            out.append(CheckResult(name=f"assembled Ext(B_{u}) = cobar, p={p}", ok=not diff, detail=str(diff[:10])))
        periodic = periodic_ext_dims(p, bounds.oracle_weight, bounds.oracle_bar)
        unit = cobar_ext_dims(build_Bu(0, p), bounds.oracle_weight, bounds.oracle_bar, threads)
        diff = periodic.differences(unit)
        out.append(CheckResult(name=f"periodic resolution = cobar for F_{p}", ok=not diff, detail=str(diff[:10])))
    return out


def _check_known_groups(threads: int, container) -> CheckResult:
    integers = CoefficientRing.integers()
    torus = {(r.n, r.i): r for r in run_cellular(1, integers, 2, threads, container)}[(2, 1)]
    disc = {(r.n, r.i): r for r in run_cellular(0, integers, 2, threads, container)}[(2, 1)]
    ok = (torus.dim, torus.torsion) == (2, [2]) and (disc.dim, disc.torsion) == (1, [])
    return CheckResult(
        name="H_1(C_2) over Z for g = 0, 1",
        ok=ok,
        detail=f"g=1: rank {torus.dim} torsion {torus.torsion}; g=0: rank {disc.dim} torsion {disc.torsion}",
    )


def _check_mcg(bounds: SuiteBounds, p: int = 3) -> List[CheckResult]:
    out = []
    for g in (1, 2):
        power = twist_power(g, p)
        expected = ExteriorClass.from_dict(2, {(2 * g - 1, 2 * g): p})
        out.append(CheckResult(name=f"xi(D_a^{p}) on g{2 * g}, g={g}", ok=xi(power.phi)[2 * g] == expected))
        out.append(
            CheckResult(
                name=f"D_a^{p} acts trivially mod {p}, g={g}",
                ok=check_umor_triviality(power.phi, p, bounds.mcg_weight),
            )
        )
    out.append(
        CheckResult(
            name=f"separating map acts trivially mod {p}",
            ok=check_umor_triviality(separating(2).phi, p, bounds.mcg_weight),
        )
    )
    rng = random.Random(20240611)
    bad = []
    for k in range(bounds.cocycle_pairs):
        g = rng.choice((1, 2))
        phi, psi = random_catalog_product(g, rng), random_catalog_product(g, rng)
        if not check_cocycle(phi.phi, psi.phi):
            bad.append((k, phi.label, psi.label))
    out.append(CheckResult(name=f"cocycle identity on {bounds.cocycle_pairs} pairs", ok=not bad, detail=str(bad)))
    return out


def _check_sparse(bounds: SuiteBounds) -> List[CheckResult]:
    out = []
    for p in bounds.primes:
        failures = {u: sparse_tools(u, p).failures() for u in range(bounds.sparse_u + 1)}
        failures = {u: f for u, f in failures.items() if f}
        out.append(CheckResult(name=f"B_u structure, p={p}", ok=not failures, detail=str(failures)))
    return out


def _check_extras(bounds: SuiteBounds) -> List[CheckResult]:
    out = []
    for p in bounds.primes:
        for g in range(bounds.cross_genus + 1):
            report = genus_prime_report(g, p)
            out.append(CheckResult(name=f"genus/prime vanishing g={g} p={p}", ok=report.ok))
            if g <= p - 2:
                fake = fake_basechange(g, p, bounds.oracle_weight, bounds.oracle_bar)
                out.append(
                    CheckResult(name=f"base change g={g} p={p}", ok=fake.ok, detail=str(fake.differences[:10]))
                )
    return out


def _guard(name: str, job: Callable[[], object]) -> List[CheckResult]:
    try:
        result = job()
    except Exception as exc:  # noqa: BLE001
        logger.exception(f"[run_suite] check {name!r} raised")
        return [CheckResult(name=name, ok=False, detail=f"{type(exc).__name__}: {exc}")]
    return result if isinstance(result, list) else [result]


def run_suite(name: str, threads: int = 1, container: Container | None = None) -> List[CheckResult]:
    if name not in SUITES:
        raise UnknownSuiteError(f"unknown suite {name!r}, expected one of {sorted(SUITES)}")
    b = SUITES[name]
    jobs: List[Tuple[str, Callable[[], object]]] = [
        ("differentials", lambda: _check_differentials(b)),
        ("shuffles", lambda: _check_shuffles(b)),
        ("bouquet", lambda: _check_bouquet(b)),
    ]
    for p in b.primes:
        jobs.append((f"cross F{p}", lambda p=p: _check_cross(b, CoefficientRing.prime_field(p), threads, container)))
    jobs += [
        ("cross Q", lambda: _check_cross(b, CoefficientRing.rationals(), threads, container)),
        ("poincare", lambda: _check_poincare(b)),
        ("oracle", lambda: _check_oracle(b, threads)),
        (
            "torsion",
            lambda: [
                c
                for g in range(b.torsion_genus + 1)
                for c in torsion_report(g, b.torsion_n, b.primes, threads, container)
            ],
        ),
        ("stability", lambda: [stability_check(g, 3, b.stability_n) for g in range(b.stability_genus + 1)]),
        ("known groups", lambda: _check_known_groups(threads, container)),
        ("mcg", lambda: _check_mcg(b)),
        ("sparse", lambda: _check_sparse(b)),
        ("generation", lambda: [c for g in (0, 1) for c in generation_check(g, 3, b.generation_n)]),
        ("filled genus", lambda: filled_genus_report(0, 3, min(b.cross_n, 4), threads, container)),
        ("extras", lambda: _check_extras(b)),
    ]
    checks: List[CheckResult] = []
    for label, job in jobs:
        results = _guard(label, job)
        logger.info(f"[run_suite] {name}/{label}: {sum(r.ok for r in results)}/{len(results)} ok")
        checks.extend(results)
    # рост в верхней степени только сообщается
    growth = _guard("growth", lambda: growth_report(1, 3, b.growth_n, threads, container))[0]
    checks.append(CheckResult(name=growth.name + " (reported)", ok=True, detail=growth.detail))
    return checks

