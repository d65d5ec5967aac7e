import random

import pytest

from confhom.freegroup import (
    ExteriorClass,
    FreeGroupMap,
    RankMismatch,
    WordParseError,
    abelianize,
    commutator,
    compose,
    content2,
    content_component,
    generator,
    identity_map,
    is_conjugate,
    linear_image,
    parse_assignments,
    parse_word,
    reduce,
    zeta,
)


def test_reduction_and_inverse():
    w = reduce([(1, 1), (2, 1), (2, -1), (1, 2)], 2)
    assert w.runs == ((1, 3),)
    assert (w * w.inverse()).is_identity()
    assert (generator(1, 2) ** -2).runs == ((1, -2),)


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        generator(1, 2) * generator(1, 4)


def test_zeta_parses_back():
    assert str(zeta(1)) == "g1 g2 G1 G2"
    assert parse_word("g1 g2 G1 G2", 2) == zeta(1)
    assert parse_word("1", 4).is_identity()
    assert parse_word("g1^3 G1^2", 2) == generator(1, 2)


def test_parse_error_carries_column():
    with pytest.raises(WordParseError) as info:
        parse_word("g1 g3", 2, line=7)
    assert info.value.line == 7
    assert info.value.column == 4


def test_parse_assignments_fixes_unlisted():
    phi = parse_assignments("g2 -> g1 g2", 2)
    assert phi.images[0] == generator(1, 2)
    assert str(phi.images[1]) == "g1 g2"
    with pytest.raises(WordParseError):
        parse_assignments("g1 -> g2; g1 -> g1", 2)


def test_conjugacy():
    a = parse_word("g1 g2", 2)
    b = parse_word("g2 g1", 2)
    assert is_conjugate(a, b)
    assert not is_conjugate(a, parse_word("g1 G2", 2))
    c = generator(1, 2)
    assert is_conjugate(c * zeta(1) * c.inverse(), zeta(1))


def test_compose_and_apply():
    phi = FreeGroupMap.from_assignments(2, {2: parse_word("g1 g2", 2)})
    twice = compose(phi, phi)
    assert str(twice.images[1]) == "g1^2 g2"
    assert compose(phi, identity_map(2)).images == phi.images


def test_content_of_commutator_and_power():
    a, b = generator(1, 2), generator(2, 2)
    assert content2(commutator(a, b)) == ExteriorClass.from_dict(2, {(1, 2): 2})
    assert content2(parse_word("g1^3 g2", 2)) == ExteriorClass.from_dict(2, {(1, 2): 3})
    assert content2(parse_word("g2 g1", 2)) == ExteriorClass.from_dict(2, {(1, 2): -1})
    assert abelianize(commutator(a, b)).is_zero()


def test_linear_image_of_wedge():
    phi = FreeGroupMap.from_assignments(2, {2: parse_word("g1 g2", 2)})
    e1, e2 = ExteriorClass.basis(1), ExteriorClass.basis(2)
    assert linear_image(phi, e1.wedge(e2)) == e1.wedge(e2)
    assert linear_image(phi, e2) == e1 + e2


def _random_word(rng, rank, max_length=30):
    letters = [(rng.randint(1, rank), rng.choice((1, -1))) for _ in range(rng.randint(0, max_length))]
    return reduce(letters, rank)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_content_components_match_scans(g):
    rng = random.Random(g)
    rank = 2 * g
    for _ in range(300):
        w = _random_word(rng, rank)
        assert content_component(w, 0) == ExteriorClass.unit()
        assert content_component(w, 1) == abelianize(w)
        assert content_component(w, 2) == content2(w), str(w)


def test_content_component_degree_bounds():
    assert content_component(zeta(1), 2) == ExteriorClass.from_dict(2, {(1, 2): 2})
    with pytest.raises(ValueError):
        content_component(zeta(1), 3)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_content2_cocycle_and_inverse(g):
    rng = random.Random(100 + g)
    rank = 2 * g
    for _ in range(300):
        a, b = _random_word(rng, rank, 15), _random_word(rng, rank, 15)
        expected = content2(a) + content2(b) + abelianize(a).wedge(abelianize(b))
        assert content2(a * b) == expected, (str(a), str(b))
        assert content2(a.inverse()) == -content2(a), str(a)
