import random

import pytest

from confhom.freegroup import ExteriorClass, FreeGroupMap, RankMismatch, parse_word
from confhom.mcg import (
    PreconditionViolation,
    catalog,
    check_cocycle,
    check_equivariance,
    check_umor_triviality,
    identity_candidate,
    random_catalog_product,
    random_endomorphism,
    separating,
    twist,
    twist_power,
    validate,
    xi,
    xi_additivity,
    xi_p,
)


def test_identity_candidate():
    candidate = identity_candidate(2)
    report = validate(candidate.phi, 2)
    assert report.ok and report.boundary_equal
    assert xi(candidate.phi).is_zero()
    assert check_umor_triviality(candidate.phi, 3, 6)


def test_twist_fixes_boundary_up_to_conjugacy():
    report = validate(twist(1).phi, 1)
    assert report.ok
    assert report.symplectic
    assert not report.boundary_equal
    assert report.omega_preserved


def test_non_mapping_class_fails_validation():
    phi = FreeGroupMap.from_assignments(2, {1: parse_word("g1^2", 2)})
    report = validate(phi, 1)
    assert not report.ok
    assert "symplectic form not preserved" in report.failures()


def test_validate_rank():
    with pytest.raises(RankMismatch):
        validate(twist(1).phi, 2)


def test_xi_of_twist_powers():
    for g in (1, 2):
        for k in (1, 3):
            value = xi(twist_power(g, k).phi)
            assert value[2 * g] == ExteriorClass.from_dict(2, {(2 * g - 1, 2 * g): k})
            assert all(value[i].is_zero() for i in range(1, 2 * g))
    assert xi_p(twist_power(1, 3).phi, 3).is_zero()
    assert not xi_p(twist(1).phi, 3).is_zero()


def test_umor_triviality():
    assert check_umor_triviality(twist_power(1, 3).phi, 3, 6)
    assert check_umor_triviality(twist_power(2, 3).phi, 3, 4)
    assert check_umor_triviality(separating(2).phi, 3, 4)
    with pytest.raises(PreconditionViolation):
        check_umor_triviality(twist(1).phi, 3, 4)


def test_catalog_validation():
    for candidate in catalog(1, 3):
        assert validate(candidate.phi, 1).ok, candidate.label
    reports = {c.label: validate(c.phi, 2) for c in catalog(2, 3)}
    assert reports["identity"].ok
    assert reports["separating"].ok and not reports["separating"].boundary_equal
    # the handle twist formula moves the boundary word out of its conjugacy class once g >= 2
    assert not reports["twist"].boundary_conjugate
    assert reports["twist"].omega_preserved


def test_cocycle_on_random_products():
    rng = random.Random(7)
    for _ in range(30):
        g = rng.choice((1, 2))
        phi, psi = random_catalog_product(g, rng), random_catalog_product(g, rng)
        assert check_cocycle(phi.phi, psi.phi)


def test_cocycle_holds_for_endomorphisms():
    rng = random.Random(11)
    for _ in range(10):
        assert check_cocycle(random_endomorphism(2, rng, 6), random_endomorphism(2, rng, 6))


def test_equivariance_and_additivity():
    phi = twist(2).phi
    phi_inv = twist_power(2, -1).phi
    psi = separating(2).phi
    assert check_equivariance(phi, phi_inv, psi)
    assert xi_additivity(psi, separating(2, inverse=True).phi)
    with pytest.raises(PreconditionViolation):
        check_equivariance(phi, phi, psi)
