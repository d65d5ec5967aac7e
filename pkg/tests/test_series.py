from confhom.extengine import BigradedSeries, Laurent
from confhom.extengine.series import (
    exterior_series,
    geometric,
    polynomial_generators_series,
    polynomial_series,
    product_series,
)


def test_laurent_arithmetic():
    x = Laurent({0: 1, -2: 1})
    assert x**2 == Laurent({0: 1, -2: 2, -4: 1})
    assert x**0 == Laurent.monomial(0)
    assert x + Laurent({0: -1}) == Laurent({-2: 1})
    assert geometric(3, -2) == Laurent({0: 1, -2: 1, -4: 1})
    assert str(Laurent()) == "0"


def test_window_truncation():
    series = BigradedSeries(4, 1, {(0, 0): 1, (6, 0): 1, (2, -2): 1})
    assert series.coeffs == {(0, 0): 1}
    series.add_term(2, -1, 2)
    series.add_term(2, -1, -2)
    assert (2, -1) not in series.coeffs


def test_polynomial_and_exterior():
    assert polynomial_series(2, -1, 6, 2).coeffs == {(0, 0): 1, (2, -1): 1, (4, -2): 1}
    assert exterior_series(3, -1, 6, 2).coeffs == {(0, 0): 1, (3, -1): 1}
    assert polynomial_generators_series(2, 2, 4, 0).coeffs == {(0, 0): 1, (2, 0): 2, (4, 0): 3}


def test_convolution():
    a = exterior_series(1, -1, 4, 4)
    product = product_series([a, a], 4, 4)
    assert product.coeffs == {(0, 0): 1, (1, -1): 2, (2, -2): 1}
    assert product.total() == 4
    assert a.shift(1, -1).coeffs == {(1, -1): 1, (2, -2): 1}


def test_differences():
    a = BigradedSeries(4, 2, {(0, 0): 1, (2, -1): 1})
    b = BigradedSeries(2, 2, {(0, 0): 1, (2, -1): 3, (4, 0): 5})
    assert a.differences(b) == [(2, -1, 1, 3)]
    assert a != b
    assert a.as_rows() == [{"weight": 0, "bar_degree": 0, "dim": 1}, {"weight": 2, "bar_degree": -1, "dim": 1}]
