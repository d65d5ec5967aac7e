import pytest
from pydantic import ValidationError

from confhom.models import HomologyRow, JobConfig, ResultEnvelope, homology_csv


def test_job_config_validation():
    assert JobConfig(command="betti", p=5).p == 5
    with pytest.raises(ValidationError):
        JobConfig(command="betti", p=4)
    with pytest.raises(ValidationError):
        JobConfig(command="betti", threads=0)
    with pytest.raises(ValidationError):
        JobConfig(command="betti", g=-1)
    assert JobConfig.model_validate({"command": "nui", "unknown": 1}).command == "nui"


def test_homology_csv():
    rows = [
        HomologyRow(g=1, p=3, coeff="F3", n=2, i=1, dim=2),
        HomologyRow(g=1, coeff="Z", n=2, i=1, dim=2, torsion="[2]"),
    ]
    assert homology_csv(rows) == "g,p,coeff,n,i,dim,torsion\n1,3,F3,2,1,2,\n1,,Z,2,1,2,2\n"


def test_envelope_status():
    envelope = ResultEnvelope(version="v0", config=JobConfig(command="verify"))
    assert envelope.ok
    assert not envelope.model_copy(update={"status": "failed"}).ok
    assert envelope.schema_version == "1"


def test_threads_stay_out_of_dumps():
    config = JobConfig(command="betti", threads=4)
    assert config.threads == 4
    assert "threads" not in config.model_dump()
    assert "threads" not in ResultEnvelope(version="v0", config=config).model_dump_json()
