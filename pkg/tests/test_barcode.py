from collections import Counter

import numpy as np

from confhom.exactla import rank_mod_p
from confhom.extengine import Barcode, adapted_generators, barcode, build_Bu, dualize


def test_Bu_barcode_over_first_variable(b2):
    bars = barcode(b2, 0)
    assert bars.counter() == Counter({(0, 3): 1, (-2, 1): 1})
    assert bars.free_part().bars == ((0, 3),)
    assert bars.narrow_part().bars == ((-2, 1),)
    assert bars.dims() == {0: 1, -2: 2, -4: 1}


def test_barcode_helpers():
    bars = Barcode(0, 2, 3, ((-2, 1), (0, 3)))
    assert bars.bars == ((0, 3), (-2, 1))
    assert bars.barycentre((0, 3)) == -2
    assert bars.support((0, 3)) == [0, -2, -4]
    assert bars.rank(1, 0) == 1
    assert bars.rank(1, -2) == 1
    assert bars.rank(2, 0) == 1
    assert bars.shifted(2).bars == ((2, 3), (0, 1))
    assert not bars.is_free()


def test_dual_barcode_is_shifted_barcode():
    for u in range(1, 6):
        module = build_Bu(u, 3)
        assert barcode(dualize(module), 0).bars == barcode(module, 0).shifted(2 * u).bars


def test_adapted_generators_span(b2):
    gens = adapted_generators(b2, 0)
    assert sorted((g.weight, g.size) for g in gens) == [(-2, 1), (0, 3)]
    narrow = next(g for g in gens if g.size == 1)
    assert not b2.apply(0, -2, narrow.vector).any()
    columns = {m: [] for m in b2.weights}
    for g in gens:
        for k in range(g.size):
            columns[g.weight - 2 * k].append(b2.power(0, k, g.weight) @ g.vector % 3)
    for m, cols in columns.items():
        assert rank_mod_p(np.stack(cols, axis=1), 3) == b2.dim(m)
