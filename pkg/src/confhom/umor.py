from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Tuple

from .freegroup import FreeGroupMap, RankMismatch, abelianize, content2
from .utils import weak_compositions

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


def signed_shuffle_coeff(m: int, n: int) -> int:
    if m < 0 or n < 0:
        raise ValueError("shuffle sizes must be nonnegative")
    if m % 2 and n % 2:
        return 0
    return comb((m + n) // 2, m // 2)


@lru_cache(maxsize=200_000)
def monomial_product(v: Monomial, w: Monomial) -> int:
    """Coefficient of e_{v+w} in e_v * e_w."""
    coeff = 1
    for a, b in zip(v, w):
        c = signed_shuffle_coeff(a, b)
        if not c:
            return 0
        coeff *= c
    # sign of sum_{i<j} w_i v_j from moving the odd x's of e_w past e_v
    exponent = 0
    seen_w = 0
    for a, b in zip(v, w):
        exponent += seen_w * a
        seen_w += b
    return -coeff if exponent % 2 else coeff


@dataclass(frozen=True, eq=False)
class UMorElement:
    rank: int
    terms: Mapping[Monomial, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for v, c in self.terms.items():
            if len(v) != self.rank:
                raise RankMismatch(f"monomial {v} in a ring of rank {self.rank}")
            if c:
                clean[tuple(v)] = c
        object.__setattr__(self, "terms", MappingProxyType(clean))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UMorElement):
            return NotImplemented
        return self.rank == other.rank and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash((self.rank, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, v: Monomial) -> int:
        return self.terms.get(tuple(v), 0)

    def items(self) -> List[Tuple[Monomial, int]]:
        return sorted(self.terms.items())

    def __add__(self, other: "UMorElement") -> "UMorElement":
        _same_rank(self, other)
        acc = dict(self.terms)
        for v, c in other.terms.items():
            acc[v] = acc.get(v, 0) + c
        return UMorElement(self.rank, acc)

    def __neg__(self) -> "UMorElement":
        return self.scale(-1)

    def __sub__(self, other: "UMorElement") -> "UMorElement":
        return self + (-other)

    def scale(self, k: int) -> "UMorElement":
        return UMorElement(self.rank, {v: k * c for v, c in self.terms.items()})

    def __mul__(self, other: "UMorElement") -> "UMorElement":
        return multiply(self, other)

    def reduce_mod(self, p: int) -> "UMorElement":
        return UMorElement(self.rank, {v: c % p for v, c in self.terms.items()})

    def homogeneous_part(self, weight: int) -> "UMorElement":
        """Terms of weight -weight (weight given as a magnitude)."""
        return UMorElement(self.rank, {v: c for v, c in self.terms.items() if sum(v) == weight})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*e{list(v)}" for v, c in self.items())


def _same_rank(a: UMorElement, b: UMorElement) -> None:
    if a.rank != b.rank:
        raise RankMismatch(f"rank {a.rank} != {b.rank}")


def zero(rank: int) -> UMorElement:
    return UMorElement(rank, {})


def one(rank: int) -> UMorElement:
    return UMorElement(rank, {(0,) * rank: 1})


def monomial(v: Iterable[int], coeff: int = 1) -> UMorElement:
    v = tuple(v)
    return UMorElement(len(v), {v: coeff})


def _unit_vector(rank: int, i: int, value: int) -> Monomial:
    v = [0] * rank
    v[i - 1] = value
    return tuple(v)


def x(i: int, rank: int) -> UMorElement:
    return monomial(_unit_vector(rank, i, 1))


def y(i: int, rank: int, m: int = 1) -> UMorElement:
    """Divided power y_i^{[m]}."""
    return monomial(_unit_vector(rank, i, 2 * m))


def monomials(rank: int, weight: int) -> Tuple[Monomial, ...]:
    return weak_compositions(weight, rank)


def multiply(a: UMorElement, b: UMorElement) -> UMorElement:
    _same_rank(a, b)
    acc: Dict[Monomial, int] = {}
    for v, c in a.terms.items():
        for w, d in b.terms.items():
            coeff = monomial_product(v, w)
            if coeff:
                key = tuple(s + t for s, t in zip(v, w))
                acc[key] = acc.get(key, 0) + coeff * c * d
    return UMorElement(a.rank, acc)


def omega(g: int) -> UMorElement:
    rank = 2 * g
    out = zero(rank)
    for i in range(g):
        v = [0] * rank
        v[2 * i] = v[2 * i + 1] = 1
        out = out + monomial(v)
    return out


@lru_cache(maxsize=None)
def big_omega(g: int, P: int) -> UMorElement:
    if P < 0:
        raise ValueError("P must be nonnegative")
    rank = 2 * g
    if P % 2:
        return zero(rank)
    k = P // 2
    acc: Dict[Monomial, int] = {}
    for subset in combinations(range(g), k):
        v = [0] * rank
        for i in subset:
            v[2 * i] = v[2 * i + 1] = 1
        acc[tuple(v)] = 2**k
    return UMorElement(rank, acc)


def divided_power_linear(coeffs: Mapping[int, int], j: int, rank: int) -> UMorElement:
    """(sum_t n_t y_t)^{[j]} = sum over weak compositions of prod n_t^{j_t} y_t^{[j_t]}."""
    support = sorted(t for t, n in coeffs.items() if n)
    if j == 0:
        return one(rank)
    acc: Dict[Monomial, int] = {}
    for parts in weak_compositions(j, len(support)):
        v = [0] * rank
        coeff = 1
        for t, part in zip(support, parts):
            v[t - 1] = 2 * part
            coeff *= coeffs[t] ** part
        acc[tuple(v)] = coeff
    return UMorElement(rank, acc)


def divided_power_quadratic(b: UMorElement, r: int) -> UMorElement:
    """Integral divided power of an element of the quadratic exterior part."""
    if r == 0:
        return one(b.rank)
    terms = b.items()
    out = zero(b.rank)
    for chosen in combinations(terms, r):
        product = one(b.rank)
        coeff = 1
        for v, c in chosen:
            product = product * monomial(v)
            coeff *= c
        out = out + product.scale(coeff)
    return out


class InducedMap:
    """Ring map UMor(phi) given on generators by the abelianization and content."""

    def __init__(self, phi: FreeGroupMap) -> None:
        self.phi = phi
        self.source_rank = phi.source_rank
        self.target_rank = phi.target_rank
        rank = self.target_rank
        self._x: List[UMorElement] = []
        self._y_linear: List[Dict[int, int]] = []
        self._y_quadratic: List[UMorElement] = []
        for img in phi.images:
            ab = {idx[0]: c for idx, c in abelianize(img).terms}
            self._x.append(UMorElement(rank, {_unit_vector(rank, t, 1): n for t, n in ab.items()}))
            self._y_linear.append(ab)
            quad: Dict[Monomial, int] = {}
            for (a, b), c in content2(img).terms:
                v = [0] * rank
                v[a - 1] = v[b - 1] = 1
                quad[tuple(v)] = c
            self._y_quadratic.append(UMorElement(rank, quad))
        self._factor_cache: Dict[Tuple[int, int], UMorElement] = {}
        self._monomial_cache: Dict[Monomial, UMorElement] = {}

    def x_image(self, i: int) -> UMorElement:
        return self._x[i - 1]

    def y_image(self, i: int, m: int = 1) -> UMorElement:
        """(A + B)^{[m]} = sum_j A^{[j]} B^{[m-j]}."""
        rank = self.target_rank
        out = zero(rank)
        for j in range(m + 1):
            quad = divided_power_quadratic(self._y_quadratic[i - 1], m - j)
            if quad.is_zero():
                continue
            out = out + divided_power_linear(self._y_linear[i - 1], j, rank) * quad
        return out

    def factor_image(self, i: int, value: int) -> UMorElement:
        key = (i, value)
        cached = self._factor_cache.get(key)
        if cached is None:
            m, odd = divmod(value, 2)
            cached = self.y_image(i, m)
            if odd:
                cached = self.x_image(i) * cached
            self._factor_cache[key] = cached
        return cached

    def monomial_image(self, v: Monomial) -> UMorElement:
        cached = self._monomial_cache.get(v)
        if cached is None:
            cached = one(self.target_rank)
            for i, value in enumerate(v, start=1):
                if value:
                    cached = cached * self.factor_image(i, value)
            self._monomial_cache[v] = cached
        return cached


def induced_map(phi: FreeGroupMap) -> InducedMap:
    return InducedMap(phi)


def apply_induced(descriptor: InducedMap, a: UMorElement) -> UMorElement:
    if a.rank != descriptor.source_rank:
        raise RankMismatch(f"element of rank {a.rank}, map source rank {descriptor.source_rank}")
    acc: Dict[Monomial, int] = {}
    for v, c in a.terms.items():
        for w, d in descriptor.monomial_image(v).terms.items():
            acc[w] = acc.get(w, 0) + c * d
    return UMorElement(descriptor.target_rank, acc)
