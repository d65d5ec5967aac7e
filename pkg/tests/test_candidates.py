import pytest

from confhom.freegroup import WordParseError
from confhom.services.candidates import evaluate, evaluate_all, load_candidates, parse_candidates

TEXT = """
# twists of the last handle
twist: g2 -> g1 g2
twist3: g2 -> g1^3 g2   # cube

bogus: g1 -> g1^2
"""


def test_parse_candidates_keeps_line_numbers():
    parsed = parse_candidates(TEXT, 1)
    assert [(c.name, c.line) for c in parsed] == [("twist", 3), ("twist3", 4), ("bogus", 6)]


def test_parse_errors_report_line():
    with pytest.raises(WordParseError) as info:
        parse_candidates("ok: g1 -> g1\nbad: g1 -> g5\n", 1)
    assert info.value.line == 2
    with pytest.raises(WordParseError):
        parse_candidates("no colon here", 1)
    with pytest.raises(WordParseError):
        parse_candidates("a: g1 -> g1\na: g2 -> g2", 1)


def test_evaluate_reports(tmp_path):
    path = tmp_path / "candidates.txt"
    path.write_text(TEXT, encoding="utf-8")
    reports = {r.name: r for r in evaluate_all(load_candidates(path, 1), 1, 3, weight_bound=4, max_n=2)}

    twist = reports["twist"]
    assert twist.ok and not twist.boundary_equal
    assert twist.xi == ["0", "[g1]^[g2]"]
    assert twist.umor_trivial is None
    assert any("mod 3" in f for f in twist.failures)
    assert twist.homology_trivial is False

    cube = reports["twist3"]
    assert cube.ok
    assert cube.xi_p == ["0", "0"]
    assert cube.umor_trivial is True
    assert cube.homology_trivial is True

    assert not reports["bogus"].ok


def test_evaluate_catches_errors():
    parsed = parse_candidates("twist: g2 -> g1 g2", 1)[0]
    report = evaluate(parsed, 2, 3, 4)
    assert not report.ok
    assert report.error
