from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Dict, Iterable, Iterator, List, Tuple

Bidegree = Tuple[int, int]


@dataclass
class BigradedSeries:
    """Dimensions at bidegrees (weight, bar-degree), truncated to weight <= W and bar-degree >= -B."""

    weight_bound: int
    bar_bound: int
    coeffs: Dict[Bidegree, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.coeffs = {k: v for k, v in self.coeffs.items() if v and self.within(*k)}

    def within(self, weight: int, star: int) -> bool:
        return weight <= self.weight_bound and star >= -self.bar_bound

    def __getitem__(self, key: Bidegree) -> int:
        return self.coeffs.get(key, 0)

    def add_term(self, weight: int, star: int, value: int = 1) -> None:
        if not self.within(weight, star):
            return
        total = self.coeffs.get((weight, star), 0) + value
        if total:
            self.coeffs[(weight, star)] = total
        else:
            self.coeffs.pop((weight, star), None)

    def items(self) -> Iterator[Tuple[Bidegree, int]]:
        return iter(sorted(self.coeffs.items()))

    def _bounds(self, other: "BigradedSeries") -> Tuple[int, int]:
        return min(self.weight_bound, other.weight_bound), min(self.bar_bound, other.bar_bound)

    def __add__(self, other: "BigradedSeries") -> "BigradedSeries":
        W, B = self._bounds(other)
        out = BigradedSeries(W, B, dict(self.coeffs))
        for (w, s), v in other.coeffs.items():
            out.add_term(w, s, v)
        return out

    def convolve(self, other: "BigradedSeries") -> "BigradedSeries":
        """Series of a tensor product; factors are assumed to live in weights >= 0."""
        W, B = self._bounds(other)
        out = BigradedSeries(W, B)
        for (w1, s1), v1 in self.coeffs.items():
            for (w2, s2), v2 in other.coeffs.items():
                out.add_term(w1 + w2, s1 + s2, v1 * v2)
        return out

    def shift(self, weight: int, star: int = 0) -> "BigradedSeries":
        return BigradedSeries(
            self.weight_bound,
            self.bar_bound,
            {(w + weight, s + star): v for (w, s), v in self.coeffs.items()},
        )

    def scale(self, k: int) -> "BigradedSeries":
        return BigradedSeries(self.weight_bound, self.bar_bound, {key: v * k for key, v in self.coeffs.items()})

    def restrict(self, weight_bound: int, bar_bound: int) -> "BigradedSeries":
        return BigradedSeries(min(weight_bound, self.weight_bound), min(bar_bound, self.bar_bound), dict(self.coeffs))

    def total(self) -> int:
        return sum(self.coeffs.values())

    def differences(self, other: "BigradedSeries") -> List[Tuple[int, int, int, int]]:
        """(weight, bar-degree, mine, theirs) wherever the series disagree inside the common window."""
        W, B = self._bounds(other)
        keys = sorted(set(self.coeffs) | set(other.coeffs))
        return [
            (w, s, self[(w, s)], other[(w, s)])
            for w, s in keys
            if w <= W and s >= -B and self[(w, s)] != other[(w, s)]
        ]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BigradedSeries):
            return NotImplemented
        return not self.differences(other)

    def as_rows(self) -> List[Dict[str, int]]:
        return [{"weight": w, "bar_degree": s, "dim": v} for (w, s), v in self.items()]


def unit_series(weight_bound: int, bar_bound: int) -> BigradedSeries:
    return BigradedSeries(weight_bound, bar_bound, {(0, 0): 1})


def polynomial_series(weight: int, star: int, weight_bound: int, bar_bound: int) -> BigradedSeries:
    """F[x] with x in bidegree (weight, star), weight > 0."""
    if weight <= 0:
        raise ValueError("polynomial generator needs positive weight")
    out = BigradedSeries(weight_bound, bar_bound)
    k = 0
    while k * weight <= weight_bound:
        out.add_term(k * weight, k * star)
        k += 1
    return out


def exterior_series(weight: int, star: int, weight_bound: int, bar_bound: int) -> BigradedSeries:
    return BigradedSeries(weight_bound, bar_bound, {(0, 0): 1, (weight, star): 1})


def product_series(factors: Iterable[BigradedSeries], weight_bound: int, bar_bound: int) -> BigradedSeries:
    out = unit_series(weight_bound, bar_bound)
    for factor in factors:
        out = out.convolve(factor)
    return out


def polynomial_generators_series(
    count: int, weight: int, weight_bound: int, bar_bound: int
) -> BigradedSeries:
    """Polynomials in `count` variables of bidegree (weight, 0)."""
    out = BigradedSeries(weight_bound, bar_bound)
    m = 0
    while m * weight <= weight_bound:
        out.add_term(m * weight, 0, comb(m + count - 1, count - 1) if count else int(m == 0))
        m += 1
    return out


@dataclass
class Laurent:
    """Finite Laurent polynomial in s, exponent -> integer coefficient."""

    coeffs: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.coeffs = {k: v for k, v in self.coeffs.items() if v}

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "Laurent":
        return cls({exponent: coeff})

    @classmethod
    def from_dims(cls, dims: Dict[int, int]) -> "Laurent":
        return cls(dict(dims))

    def __add__(self, other: "Laurent") -> "Laurent":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return Laurent(out)

    def __mul__(self, other: "Laurent") -> "Laurent":
        out: Dict[int, int] = {}
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                out[a + b] = out.get(a + b, 0) + x * y
        return Laurent(out)

    def __pow__(self, n: int) -> "Laurent":
        out = Laurent.monomial(0)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Laurent):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{v}*s^{k}" for k, v in sorted(self.coeffs.items(), reverse=True))


def geometric(count: int, step: int) -> Laurent:
    """1 + s^step + ... + s^{(count-1) step}."""
    return Laurent({k * step: 1 for k in range(count)})

