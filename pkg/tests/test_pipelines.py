import pytest

from confhom.exactla import CoefficientRing
from confhom.models import HomologyRow
from confhom.services.pipelines import (
    MemoryGuardError,
    check_memory,
    compare,
    dims,
    generation_check,
    run_cellular,
    run_structured,
    torsion_report,
)

F3 = CoefficientRing.prime_field(3)


def test_cellular_rows_are_cached(container):
    first = run_cellular(0, F3, 3, container=container)
    assert [(r.n, r.i) for r in first] == [(n, i) for n in range(4) for i in range(n + 1)]
    with container.session() as session:
        assert container.homology_repo(session).count(g=0, coeff="F3") == 10
    again = run_cellular(0, F3, 3, container=container)
    assert [r.model_dump() for r in again] == [r.model_dump() for r in first]


def test_process_pool_gives_same_table():
    assert dims(run_cellular(1, F3, 3, threads=2)) == dims(run_cellular(1, F3, 3))


def test_structured_agrees_with_cellular():
    for g in (0, 1):
        assert compare(run_cellular(g, F3, 3), run_structured(g, F3, 3)) == []
    rationals = CoefficientRing.rationals()
    assert compare(run_cellular(1, rationals, 2), run_structured(1, rationals, 2)) == []


def test_structured_stores_its_rows(container):
    rows = run_structured(1, F3, 2, container=container)
    assert {r.pipeline for r in rows} == {"structured"}
    with container.session() as session:
        assert len(container.homology_repo(session).get_slice(1, "F3", 2, "structured")) == 3


def test_structured_routes():
    rows = run_structured(0, CoefficientRing.prime_field(2), 2)
    assert {r.pipeline for r in rows} == {"cellular"}
    with pytest.raises(ValueError):
        run_structured(0, CoefficientRing.integers(), 2)


def test_compare_reports_mismatch():
    left = [HomologyRow(g=0, coeff="Q", n=1, i=0, dim=1)]
    right = [HomologyRow(g=0, coeff="Q", n=1, i=0, dim=2), HomologyRow(g=0, coeff="Q", n=1, i=1, dim=1)]
    assert compare(left, right) == [
        {"n": 1, "i": 0, "cellular": 1, "structured": 2},
        {"n": 1, "i": 1, "cellular": 0, "structured": 1},
    ]


def test_memory_guard():
    assert check_memory(0, 3, limit=100) > 0
    with pytest.raises(MemoryGuardError):
        check_memory(3, 40, limit=1000)
    with pytest.raises(MemoryGuardError):
        run_cellular(3, F3, 40)


def test_torsion_report_on_torus():
    checks = torsion_report(1, 3, primes=(3,))
    assert checks
    assert all(c.ok for c in checks), [c for c in checks if not c.ok]


def test_generation_check_on_disc():
    checks = generation_check(0, 3, 3)
    assert all(c.ok for c in checks), [c for c in checks if not c.ok]
