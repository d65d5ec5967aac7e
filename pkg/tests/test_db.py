from confhom.config import APP_VERSION
from confhom.db.database import get_engine
from confhom.db.migration_runner import current_revision, head_revision, run_migrations
from confhom.models import HomologyRow, JobConfig, ResultEnvelope


def _row(n, i, dim, torsion=()):
    return HomologyRow(g=1, coeff="Z", n=n, i=i, dim=dim, torsion=list(torsion))


def test_incomplete_slice_is_not_returned(container):
    with container.session() as session:
        repo = container.homology_repo(session)
        repo.upsert_many([_row(1, 0, 1)])
        assert repo.get_slice(1, "Z", 1, "cellular") == []
        repo.upsert_many([_row(1, 1, 2)])
        rows = repo.get_slice(1, "Z", 1, "cellular")
    assert [(r.i, r.dim) for r in rows] == [(0, 1), (1, 2)]


def test_upsert_replaces(container):
    with container.session() as session:
        repo = container.homology_repo(session)
        repo.upsert_many([_row(2, 0, 1), _row(2, 1, 9), _row(2, 2, 2)])
    with container.session() as session:
        repo = container.homology_repo(session)
        repo.upsert_many([_row(2, 1, 2, [2])])
        rows = repo.get_slice(1, "Z", 2, "cellular")
        assert rows[1].dim == 2
        assert rows[1].torsion == [2]
        assert repo.count(g=1) == 3
        assert repo.upsert_many([]) == 0


def test_job_runs(container):
    envelope = ResultEnvelope(version=APP_VERSION, config=JobConfig(command="verify", suite="fast"), status="failed")
    with container.session() as session:
        repo = container.job_repo(session)
        first = repo.add(envelope)
        repo.add(ResultEnvelope(version=APP_VERSION, config=JobConfig(command="nui", u=2, p=3)))
    with container.session() as session:
        repo = container.job_repo(session)
        assert repo.count() == 2
        assert repo.count("verify") == 1
        assert [r.command for r in repo.list(limit=1)] == ["nui"]
        assert [r.command for r in repo.list(offset=1)] == ["verify"]
        stored = repo.get_by_id(first)
        assert stored.status == "failed"
        assert stored.envelope().config.suite == "fast"
        assert repo.get_by_id(999) is None


def test_store_is_at_head(container):
    engine = get_engine()
    assert head_revision() == "0001_initial"
    assert current_revision(engine) == head_revision()
    run_migrations(engine)
    assert current_revision(engine) == "0001_initial"
