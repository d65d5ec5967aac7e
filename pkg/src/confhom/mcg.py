from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .freegroup import (
    ExteriorClass,
    FreeGroupMap,
    RankMismatch,
    abelianize,
    commutator,
    compose,
    content2,
    generator,
    identity_map,
    is_conjugate,
    linear_image,
    reduce,
    zeta,
)
from .umor import apply_induced, big_omega, induced_map, monomial, monomials

logger = logging.getLogger(__name__)


class PreconditionViolation(ValueError):
    pass


@dataclass(frozen=True)
class MappingClassCandidate:
    phi: FreeGroupMap
    label: str = ""

    @property
    def genus(self) -> int:
        return self.phi.source_rank // 2


@dataclass(frozen=True)
class ValidationReport:
    boundary_conjugate: bool
    boundary_equal: bool
    symplectic: bool
    omega_preserved: bool

    @property
    def ok(self) -> bool:
        return self.boundary_conjugate and self.symplectic

    def failures(self) -> List[str]:
        out = []
        if not self.boundary_conjugate:
            out.append("boundary word not preserved up to conjugacy")
        if not self.symplectic:
            out.append("symplectic form not preserved")
        if not self.omega_preserved:
            out.append("Omega_2 not fixed by the induced ring map")
        return out


@dataclass(frozen=True)
class XiValue:
    """Homomorphism H -> Lambda^2 H given on the basis [g1], ..., [g_2g]."""

    values: Tuple[ExteriorClass, ...]

    @property
    def rank(self) -> int:
        return len(self.values)

    def __call__(self, a: ExteriorClass) -> ExteriorClass:
        out = ExteriorClass.zero(2)
        for (i,), coeff in a.terms:
            out = out + self.values[i - 1].scale(coeff)
        return out

    def __getitem__(self, i: int) -> ExteriorClass:
        return self.values[i - 1]

    def __add__(self, other: "XiValue") -> "XiValue":
        return XiValue(tuple(a + b for a, b in zip(self.values, other.values)))

    def reduce_mod(self, p: int) -> "XiValue":
        return XiValue(tuple(v.reduce_mod(p) for v in self.values))

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def as_strings(self) -> List[str]:
        return [str(v) for v in self.values]


def _symplectic_form(g: int) -> ExteriorClass:
    return ExteriorClass.from_dict(2, {(2 * i - 1, 2 * i): 1 for i in range(1, g + 1)})


def _check_endomorphism(phi: FreeGroupMap, g: int) -> None:
    if phi.source_rank != 2 * g or phi.target_rank != 2 * g:
        raise RankMismatch(f"expected an endomorphism of rank {2 * g}, got {phi.source_rank}->{phi.target_rank}")


def validate(phi: FreeGroupMap, g: int) -> ValidationReport:
    _check_endomorphism(phi, g)
    boundary = zeta(g)
    image = phi(boundary)
    form = ExteriorClass.zero(2)
    for i in range(1, g + 1):
        form = form + abelianize(phi.images[2 * i - 2]).wedge(abelianize(phi.images[2 * i - 1]))
    omega2 = big_omega(g, 2)
    report = ValidationReport(
        boundary_conjugate=is_conjugate(image, boundary),
        boundary_equal=image == boundary,
        symplectic=form == _symplectic_form(g),
        omega_preserved=apply_induced(induced_map(phi), omega2) == omega2,
    )
    logger.debug(f"[validate] g={g} {report}")
    return report


def xi(phi: FreeGroupMap) -> XiValue:
    return XiValue(tuple(content2(img) for img in phi.images))


def xi_p(phi: FreeGroupMap, p: int) -> XiValue:
    return xi(phi).reduce_mod(p)


def check_cocycle(phi: FreeGroupMap, psi: FreeGroupMap) -> bool:
    """xi(phi psi)(a) = phi_* xi(psi)(a) + xi(phi)(psi_* a) on every basis vector."""
    if phi.source_rank != psi.target_rank:
        raise RankMismatch("maps cannot be composed")
    composite = xi(compose(phi, psi))
    xi_phi, xi_psi = xi(phi), xi(psi)
    for i, img in enumerate(psi.images, start=1):
        rhs = linear_image(phi, xi_psi[i]) + xi_phi(abelianize(img))
        if composite[i] != rhs:
            logger.info(f"[check_cocycle] fails on g{i}")
            return False
    return True


def abelianization_is_identity(phi: FreeGroupMap, p: Optional[int] = None) -> bool:
    for i, img in enumerate(phi.images, start=1):
        ab = abelianize(img)
        expected = ExteriorClass.basis(i)
        if p is not None:
            ab, expected = ab.reduce_mod(p), expected.reduce_mod(p)
        if ab != expected:
            return False
    return True


def check_umor_triviality(phi: FreeGroupMap, p: int, weight_bound: int) -> bool:
    if not abelianization_is_identity(phi, p):
        raise PreconditionViolation(f"abelianization is not the identity mod {p}")
    if not xi_p(phi, p).is_zero():
        raise PreconditionViolation(f"xi^{p} does not vanish")
    descriptor = induced_map(phi)
    rank = phi.source_rank
    for weight in range(weight_bound + 1):
        for v in monomials(rank, weight):
            source = monomial(v)
            if not (apply_induced(descriptor, source) - source).reduce_mod(p).is_zero():
                logger.info(f"[check_umor_triviality] moves e{list(v)} mod {p}")
                return False
    return True


def check_equivariance(phi: FreeGroupMap, phi_inv: FreeGroupMap, psi: FreeGroupMap) -> bool:
    rank = phi.source_rank
    if not (compose(phi, phi_inv).is_identity() and compose(phi_inv, phi).is_identity()):
        raise PreconditionViolation("supplied inverse does not invert the map")
    if not abelianization_is_identity(psi):
        raise PreconditionViolation("psi must act trivially on homology")
    conjugate = xi(compose(phi, compose(psi, phi_inv)))
    xi_psi = xi(psi)
    for i in range(1, rank + 1):
        pulled = abelianize(phi_inv.images[i - 1])
        if conjugate[i] != linear_image(phi, xi_psi(pulled)):
            return False
    return True


def xi_additivity(phi: FreeGroupMap, psi: FreeGroupMap) -> bool:
    if not (abelianization_is_identity(phi) and abelianization_is_identity(psi)):
        raise PreconditionViolation("additivity needs identity abelianization")
    return xi(compose(phi, psi)) == xi(phi) + xi(psi)


# ---------------------------------------------------------------------------
# catalog


def identity_candidate(g: int) -> MappingClassCandidate:
    return MappingClassCandidate(identity_map(2 * g), "identity")


def twist_power(g: int, k: int) -> MappingClassCandidate:
    """k-th power of g_2g -> g_{2g-1} g_2g, other generators fixed."""
    if g < 1:
        raise ValueError("twist needs g >= 1")
    rank = 2 * g
    image = generator(2 * g - 1, rank, k) * generator(2 * g, rank)
    phi = FreeGroupMap.from_assignments(rank, {2 * g: image})
    label = "twist" if k == 1 else f"twist^{k}"
    return MappingClassCandidate(phi, label)


def twist(g: int) -> MappingClassCandidate:
    return twist_power(g, 1)


def separating(g: int, inverse: bool = False) -> MappingClassCandidate:
    """Conjugation of g3..g_2g by [g1, g2]; g1, g2 fixed."""
    if g < 2:
        raise ValueError("separating candidate needs g >= 2")
    rank = 2 * g
    z = commutator(generator(1, rank), generator(2, rank))
    if inverse:
        z = z.inverse()
    assignments = {j: z * generator(j, rank) * z.inverse() for j in range(3, rank + 1)}
    label = "separating^-1" if inverse else "separating"
    return MappingClassCandidate(FreeGroupMap.from_assignments(rank, assignments), label)


def catalog(g: int, p: Optional[int] = None) -> List[MappingClassCandidate]:
    out = [identity_candidate(g)]
    if g >= 1:
        out.append(twist(g))
        if p is not None:
            out.append(twist_power(g, p))
    if g >= 2:
        out.append(separating(g))
    return out


def random_catalog_product(g: int, rng: random.Random, length: int = 3) -> MappingClassCandidate:
    """Product of random catalog elements and inverses."""
    pieces = [twist_power(g, 1), twist_power(g, -1)]
    if g >= 2:
        pieces += [separating(g), separating(g, inverse=True)]
    phi = identity_map(2 * g)
    labels = []
    for _ in range(length):
        piece = rng.choice(pieces)
        phi = compose(phi, piece.phi)
        labels.append(piece.label)
    return MappingClassCandidate(phi, "*".join(labels) or "identity")


def random_endomorphism(g: int, rng: random.Random, max_length: int = 12) -> FreeGroupMap:
    rank = 2 * g
    images = []
    for _ in range(rank):
        size = rng.randint(0, max_length)
        letters = [(rng.randint(1, rank), rng.choice((1, -1))) for _ in range(size)]
        images.append(reduce(letters, rank))
    return FreeGroupMap(rank, rank, tuple(images))
