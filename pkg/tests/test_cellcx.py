import random
from math import comb

import pytest

from confhom.cellcx import (
    Record,
    act,
    bar_product,
    build_slice,
    commutes_with_differential,
    deconcatenate,
    differential,
    differential_of_chain,
    empty_record,
    enumerate_records,
    estimate_record_count,
    homology,
    homology_action_trivial,
    product,
    record_product,
)
from confhom.exactla import CoefficientRing
from confhom.freegroup import identity_map
from confhom.mcg import separating, twist, twist_power

Q = CoefficientRing.rationals()
Z = CoefficientRing.integers()
F3 = CoefficientRing.prime_field(3)


def test_record_counts():
    for g in range(3):
        for n in range(6):
            assert estimate_record_count(g, n) == len(enumerate_records(g, n))


def test_bouquet_records():
    for g in (1, 2):
        for n in range(6):
            assert build_slice(g, n, verify=False).size(0) == comb(n + 2 * g - 1, 2 * g - 1)


def test_differential_squares_to_zero():
    for g in range(3):
        for n in range(5):
            build_slice(g, n, verify=True)


def test_differential_examples():
    assert differential(Record(2, (1, 1), ())) == {}
    assert differential(Record(2, (1, 1), (0, 0))) == {}
    t = Record(3, (1, 2, 1), (0, 0))
    assert differential_of_chain(differential(t)) == {}


def test_disc_rational_homology(disc_slices):
    for n, slice_ in disc_slices.items():
        groups = homology(slice_, Q)
        assert groups[0].rank == 1
        if n >= 1:
            assert groups[1].rank == (1 if n >= 2 else 0)
        assert all(groups[i].rank == 0 for i in range(2, n + 1))


def test_small_integral_groups(torus_slices, disc_slices):
    torus = homology(torus_slices[2], Z)
    assert (torus[1].rank, torus[1].torsion) == (2, (2,))
    disc = homology(disc_slices[2], Z)
    assert (disc[1].rank, disc[1].torsion) == (1, ())


def test_torus_rational_two_points(torus_slices):
    groups = homology(torus_slices[2], Q)
    assert [groups[i].rank for i in range(3)] == [1, 2, 2]


def test_euler_characteristic_matches_homology(torus_slices):
    for n, slice_ in torus_slices.items():
        groups = homology(slice_, F3)
        alternating = sum((-1) ** i * g.rank for i, g in groups.items())
        assert alternating == (-1) ** n * slice_.euler_characteristic()


def test_action_is_a_chain_map(torus_slices):
    for n in range(1, 4):
        assert commutes_with_differential(act(twist(1).phi, torus_slices[n]), torus_slices[n])
    slice_ = build_slice(2, 2)
    assert commutes_with_differential(act(separating(2).phi, slice_), slice_)


def test_homology_action(torus_slices):
    assert homology_action_trivial(identity_map(2), torus_slices[2], 3)
    assert not homology_action_trivial(twist(1).phi, torus_slices[1], 3)
    for n in range(3):
        assert homology_action_trivial(twist_power(1, 3).phi, torus_slices[n], 3)


def test_rank_mismatch_on_action(torus_slices):
    with pytest.raises(ValueError):
        act(identity_map(4), torus_slices[1])


def _random_record(rng, g, max_n=3):
    n = rng.randint(0, max_n)
    return rng.choice(enumerate_records(g, n))


def test_product_of_bar_generators():
    e1 = Record(1, (1,), ())
    assert product({e1: 1}, {e1: 1}) == {Record(2, (1, 1), ()): -2}
    unit = empty_record(1)
    t = Record(1, (2,), (1, 0))
    assert record_product(unit, t) == {t: 1}
    assert record_product(t, unit) == {t: 1}


def test_bar_product_signs():
    assert bar_product((1,), (2,)) == {(2, 1): 1, (1, 2): -1}
    assert bar_product((2,), (1,)) == {(2, 1): 1, (1, 2): -1}


def test_deconcatenation_signs():
    terms = deconcatenate(Record(3, (2, 1, 1), ()))
    assert [sign for _, _, sign in terms] == [1, 1, -1, 1]
    assert [(left.P, right.P) for left, right, _ in terms] == [
        ((), (2, 1, 1)),
        ((2,), (1, 1)),
        ((2, 1), (1,)),
        ((2, 1, 1), ()),
    ]
    t = Record(0, (), (1, 1))
    assert deconcatenate(t) == [(Record(0, (), (0, 0)), t, 1)]


@pytest.mark.parametrize("g", [0, 1])
def test_product_is_graded_commutative(g):
    rng = random.Random(20 + g)
    for _ in range(150):
        s, t = _random_record(rng, g), _random_record(rng, g)
        sign = (-1) ** (s.d * t.d)
        swapped = {r: sign * c for r, c in record_product(t, s).items()}
        assert record_product(s, t) == swapped, (s, t)


def _sum(a, b):
    out = dict(a)
    for r, c in b.items():
        value = out.get(r, 0) + c
        if value:
            out[r] = value
        else:
            out.pop(r, None)
    return out


@pytest.mark.parametrize("g", [0, 1])
def test_leibniz_rule(g):
    rng = random.Random(40 + g)
    for _ in range(150):
        s, t = _random_record(rng, g), _random_record(rng, g)
        a, b = {s: 1}, {t: 1}
        lhs = differential_of_chain(product(a, b))
        sign = (-1) ** s.d
        rhs = _sum(
            product(differential_of_chain(a), b),
            {r: sign * c for r, c in product(a, differential_of_chain(b)).items()},
        )
        assert lhs == rhs, (s, t)
