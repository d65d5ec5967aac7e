import json

import pytest

from confhom.cli import EXIT_OK, EXIT_USAGE, build_parser, main


def _run(capsys, *argv, container=None):
    code = main(list(argv), container=container)
    return code, capsys.readouterr().out


def test_betti_json(capsys, container):
    code, out = _run(capsys, "betti", "--g", "0", "--coeff", "q", "--max-n", "2", "--no-cache", container=container)
    assert code == EXIT_OK
    envelope = json.loads(out)
    assert envelope["status"] == "ok"
    assert envelope["bounds"] == {"max_n": 2}
    assert [(r["n"], r["i"], r["dim"]) for r in envelope["rows"]] == [
        (0, 0, 1),
        (1, 0, 1),
        (1, 1, 0),
        (2, 0, 1),
        (2, 1, 1),
        (2, 2, 0),
    ]


def test_betti_csv(capsys, container):
    code, out = _run(
        capsys, "betti", "--g", "1", "--coeff", "z", "--max-n", "2", "--format", "csv", "--no-cache", container=container
    )
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "g,p,coeff,n,i,dim,torsion"
    assert "1,,Z,2,1,2,2" in lines


def test_betti_both_pipelines(capsys, container):
    code, out = _run(capsys, "betti", "--g", "1", "--p", "3", "--max-n", "2", "--pipeline", "both", "--no-cache", container=container)
    assert code == EXIT_OK
    envelope = json.loads(out)
    assert envelope["discrepancies"] == []
    assert envelope["provenance"] == ["cellular", "structured"]


@pytest.mark.parametrize(
    "argv",
    [
        ["betti", "--g", "0", "--p", "4", "--max-n", "1"],
        ["betti", "--g", "0", "--max-n", "1"],
        ["verify", "nope"],
        ["betti", "--g", "0", "--coeff", "z", "--max-n", "2", "--pipeline", "structured"],
    ],
)
def test_usage_errors(argv, container, capsys):
    assert main(argv + ["--no-cache"], container=container) == EXIT_USAGE
    assert "confhom" in capsys.readouterr().err


def test_nui_and_barcode(capsys, container):
    code, out = _run(capsys, "nui", "--u", "2", "--p", "3", "--no-cache", container=container)
    assert code == EXIT_OK
    envelope = json.loads(out)
    assert envelope["rows"] == [{"i": 0, "m": -2, "c": 1}, {"i": 1, "m": 0, "c": 1}]
    assert envelope["bounds"] == {"h": 1}
    code, out = _run(
        capsys, "barcode", "--u", "2", "--p", "3", "--i", "1", "--format", "csv", "--no-cache", container=container
    )
    assert code == EXIT_OK
    assert out == "i,m,c\n1,0,1\n"


def test_ext_against_oracle(capsys, container):
    code, out = _run(
        capsys, "ext", "--u", "1", "--p", "3", "--weight-bound", "8", "--bar-bound", "2", "--threads", "1",
        "--no-cache", container=container,
    )
    assert code == EXIT_OK
    envelope = json.loads(out)
    assert envelope["discrepancies"] == []
    assert all(r["assembled"] == r["oracle"] for r in envelope["rows"])


def test_mcg_catalog_and_file(capsys, container, tmp_path):
    code, out = _run(capsys, "mcg", "--g", "1", "--p", "3", "--weight-bound", "4", "--no-cache", container=container)
    assert code == EXIT_OK
    names = [r["name"] for r in json.loads(out)["rows"]]
    assert names[0] == "identity"
    assert len(names) == 3
    broken = tmp_path / "cands.txt"
    broken.write_text("fine: g1 -> g1\nbroken g1 -> g2\n", encoding="utf-8")
    assert main(["mcg", "--g", "1", "--p", "3", "--candidates", str(broken), "--no-cache"], container=container) == EXIT_USAGE


def test_output_file_and_history(capsys, container, tmp_path):
    target = tmp_path / "out.json"
    assert main(["nui", "--u", "1", "--p", "3", "--output", str(target)], container=container) == EXIT_OK
    assert json.loads(target.read_text(encoding="utf-8"))["config"]["u"] == 1
    capsys.readouterr()
    code, out = _run(capsys, "history", container=container)
    assert code == EXIT_OK
    envelope = json.loads(out)
    assert envelope["bounds"]["total"] == 1
    assert envelope["rows"][0]["command"] == "nui"
    code, out = _run(capsys, "history", "--command", "betti", container=container)
    assert json.loads(out)["rows"] == []


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_output_does_not_depend_on_threads(capsys, container):
    argv = ["betti", "--g", "1", "--p", "3", "--max-n", "2", "--no-cache"]
    _, single = _run(capsys, *argv, "--threads", "1", container=container)
    _, several = _run(capsys, *argv, "--threads", "2", container=container)
    assert single == several
    assert "threads" not in json.loads(single)["config"]


def test_nui_reports_only_real_checks(capsys, container):
    code, out = _run(capsys, "nui", "--u", "3", "--p", "3", "--no-cache", container=container)
    assert code == EXIT_OK
    checks = json.loads(out)["checks"]
    assert [c["name"] for c in checks] == ["poincare identity"]
    assert checks[0]["ok"]
