import pytest

from confhom.extengine import (
    TamenessViolation,
    TruncatedAlgebra,
    augmentation_module,
    build_Bu,
    check_tame,
    cyclic_module,
    free_narrow,
    is_narrow,
    quotient_mod_variable,
)


def test_Bu_is_tame(b2):
    report = check_tame(b2, 2)
    assert report.ok, report.failures()
    assert report.palindromic == {0: True}


@pytest.mark.parametrize("u", [1, 3])
def test_tame_for_small_u(u):
    assert check_tame(build_Bu(u, 3), u).ok


def test_short_bar_off_centre_is_not_tame():
    module = cyclic_module(TruncatedAlgebra.divided_powers(3), 3, 0, 0, 2)
    report = check_tame(module, 2)
    assert not report.ok
    assert any("palindromic" in f for f in report.failures())
    with pytest.raises(TamenessViolation):
        free_narrow(module, 2, 0)


def test_free_narrow_split(b2):
    split = free_narrow(b2, 2, 0)
    free, narrow = split
    assert free.total_dim == 3
    assert narrow.dims == {-2: 1}
    assert is_narrow(narrow, 2, 0)
    assert quotient_mod_variable(free, 0).dims == {0: 1}


def test_narrow_window():
    alg = TruncatedAlgebra.divided_powers(3)
    assert is_narrow(augmentation_module(alg, 3, -2), 2, 0)
    assert not is_narrow(augmentation_module(alg, 3, 0), 2, 0)
    assert is_narrow(augmentation_module(alg, 3, 0), 2, 1)
