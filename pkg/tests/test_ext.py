import pytest

from confhom.exactla import CoefficientRing
from confhom.extengine import (
    Barcode,
    build_Bu,
    cobar_ext_dims,
    ext_of_barcode,
    fake_basechange,
    generation_report,
    periodic_ext_dims,
    rational_ext_Bu,
    split_Mg,
    structured_series,
    theoremB_betti,
    theoremC_assemble,
)
from confhom.extengine.ext import ext_of_Bu


def test_ext_of_barcode():
    piece = ext_of_barcode(Barcode(0, 2, 3, ((0, 3), (-2, 1))), 10, 3)
    assert piece.series.coeffs == {(0, 0): 1, (2, 0): 1, (4, -1): 1, (8, -2): 1, (10, -3): 1}
    assert [s.kind for s in piece.summands] == ["free", "augmentation"]


def test_truncated_summand_generators():
    piece = ext_of_barcode(Barcode(0, 2, 3, ((0, 2),)), 6, 1)
    assert piece.summands[0].kind == "truncated"
    assert piece.summands[0].generators == ((0, 0), (4, -1))


def test_rational_ext():
    assert rational_ext_Bu(2, 10, 2).coeffs == {(0, 0): 1, (6, -1): 1, (2, 0): 1, (4, -1): 1}


def test_split_Mg():
    assert [(s.u, s.shift, s.mult) for s in split_Mg(2)] == [(0, -2, 4), (1, -1, 4), (2, 0, 1)]


@pytest.mark.parametrize("u", [0, 1, 2])
def test_assembled_matches_cobar(u):
    assembled, oracle = ext_of_Bu(u, 3, 12, 3)
    assert assembled.differences(oracle) == []


def test_cobar_of_unit_module():
    series = cobar_ext_dims(build_Bu(0, 3), 8, 2)
    assert series == periodic_ext_dims(3, 8, 2)
    assert series[(0, 0)] == 1
    assert series[(2, -1)] == 1
    assert series[(6, -2)] == 1


def test_generation_in_low_bar_degrees():
    for u in range(4):
        assert generation_report(u, 3, 12, 4).ok


def test_betti_over_rationals():
    table = theoremB_betti(1, CoefficientRing.rationals(), 2)
    assert [table.dim(2, i) for i in range(3)] == [1, 2, 2]
    assert [table.dim(1, i) for i in range(2)] == [1, 2]


def test_structured_needs_odd_field():
    with pytest.raises(ValueError):
        structured_series(1, CoefficientRing.integers(), 2)
    with pytest.raises(ValueError):
        structured_series(1, CoefficientRing.prime_field(2), 2)


def test_base_change():
    assert fake_basechange(1, 3, 12, 4).ok
    with pytest.raises(ValueError):
        fake_basechange(2, 3, 12, 4)


def test_assembly_keeps_decomposition():
    assembly = theoremC_assemble(2, 3, 8, 2)
    assert assembly.decomposition.as_dict() == {0: [[-2, 1]], 1: [[0, 1]]}
    assert {s.variable for s in assembly.summands} == {0, 1}
