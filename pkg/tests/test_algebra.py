import numpy as np
import pytest

from confhom.extengine import (
    ModuleStructureError,
    TruncatedAlgebra,
    WeightedModule,
    augmentation_module,
    build_Bu,
    cyclic_module,
    direct_sum,
    dualize,
    ell,
    is_sparse,
    sparse_subsets,
    sparse_tools,
)


def test_divided_power_algebra_degrees():
    alg = TruncatedAlgebra.divided_powers(3)
    assert [alg.D(i) for i in range(3)] == [1, 3, 9]
    assert alg.weight(1) == -6
    assert alg.nilpotency(0) == 3
    assert alg.variables_within(6) == [0, 1]


def test_algebra_rejects_bad_degrees():
    with pytest.raises(ValueError):
        TruncatedAlgebra(0)
    with pytest.raises(ValueError):
        TruncatedAlgebra(1, (1,), 3)


def test_cyclic_and_sum():
    alg = TruncatedAlgebra.divided_powers(3)
    module = direct_sum([cyclic_module(alg, 3, 0, 0, 3), augmentation_module(alg, 3, -2)])
    module.validate()
    assert module.dims == {0: 1, -2: 2, -4: 1}
    assert module.shifted(2).dims == {2: 1, 0: 2, -2: 1}


def test_validate_catches_nilpotency():
    alg = TruncatedAlgebra.divided_powers(2)
    dims = {0: 1, -2: 1, -4: 1}
    mult = {(0, 0): np.ones((1, 1)), (0, -2): np.ones((1, 1))}
    with pytest.raises(ModuleStructureError):
        WeightedModule(alg, 2, dims, mult).validate()


def test_Bu_shape(b2):
    assert b2.dims == {0: 1, -2: 2, -4: 1}
    b2.validate()
    assert build_Bu(4, 3).total_dim == 16
    assert dualize(b2).dims == {0: 1, 2: 2, 4: 1}


def test_sparse_subsets():
    assert is_sparse((2,))
    assert not is_sparse((1,))
    assert is_sparse((2, 4))
    assert not is_sparse((2, 3))
    for u in range(7):
        for k in range(u // 2 + 1):
            assert len(sparse_subsets(u, k)) == ell(u, k)


@pytest.mark.parametrize("p", [3, 5])
def test_sparse_tools(p):
    for u in range(5):
        report = sparse_tools(u, p)
        assert report.ok, report.failures()
