from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple

import numpy as np

logger = logging.getLogger(__name__)


class ModuleStructureError(ValueError):
    pass


class TamenessViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class TruncatedAlgebra:
    """F[y_0, y_1, ...]/(y_i^{d_{i+1}}) with y_i of weight -2 D_i.

    `prefix` lists d_1, d_2, ... explicitly; later d_j equal `tail`.
    """

    d0: int
    prefix: Tuple[int, ...] = ()
    tail: int = 2

    def __post_init__(self) -> None:
        if self.d0 < 1:
            raise ValueError("d0 must be positive")
        if any(d < 2 for d in self.prefix) or self.tail < 2:
            raise ValueError("d_i must be at least 2 for i >= 1")

    @classmethod
    def divided_powers(cls, p: int) -> "TruncatedAlgebra":
        return cls(1, (), p)

    def d(self, j: int) -> int:
        if j == 0:
            return self.d0
        if j <= len(self.prefix):
            return self.prefix[j - 1]
        return self.tail

    def D(self, i: int) -> int:
        out = 1
        for j in range(i + 1):
            out *= self.d(j)
        return out

    def weight(self, i: int) -> int:
        return -2 * self.D(i)

    def step(self, i: int) -> int:
        """Weight drop of y_i, a positive number."""
        return 2 * self.D(i)

    def nilpotency(self, i: int) -> int:
        return self.d(i + 1)

    def variables_within(self, span: int, start: int = 0) -> List[int]:
        out = []
        i = start
        while self.step(i) <= span:
            out.append(i)
            i += 1
        return out


Key = Tuple[int, int]


@dataclass
class WeightedModule:
    """Finite weighted module: dims per weight and one F_p matrix per (variable, weight).

    mult[(i, m)] maps the weight-m basis to the weight m - step(i) basis.
    """

    algebra: TruncatedAlgebra
    p: int
    dims: Dict[int, int] = field(default_factory=dict)
    mult: Dict[Key, np.ndarray] = field(default_factory=dict)
    start: int = 0

    def __post_init__(self) -> None:
        self.dims = {m: d for m, d in self.dims.items() if d > 0}
        self.mult = {
            key: np.asarray(mat, dtype=np.int64) % self.p
            for key, mat in self.mult.items()
            if key[0] >= self.start
        }

    def dim(self, m: int) -> int:
        return self.dims.get(m, 0)

    @property
    def weights(self) -> List[int]:
        return sorted(self.dims, reverse=True)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return not self.dims

    @property
    def span(self) -> int:
        if not self.dims:
            return 0
        return max(self.dims) - min(self.dims)

    def active_variables(self) -> List[int]:
        return self.algebra.variables_within(self.span, self.start)

    def matrix(self, i: int, m: int) -> np.ndarray:
        target = m - self.algebra.step(i)
        mat = self.mult.get((i, m))
        if mat is None:
            return np.zeros((self.dim(target), self.dim(m)), dtype=np.int64)
        return mat

    def power(self, i: int, k: int, m: int) -> np.ndarray:
        """Matrix of y_i^k out of weight m."""
        step = self.algebra.step(i)
        out = np.eye(self.dim(m), dtype=np.int64)
        current = m
        for _ in range(k):
            out = (self.matrix(i, current) @ out) % self.p
            current -= step
        return out

    def monomial(self, exponents: Dict[int, int], m: int) -> np.ndarray:
        """Matrix of prod y_i^{a_i} out of weight m, applied in increasing i."""
        out = np.eye(self.dim(m), dtype=np.int64)
        current = m
        for i in sorted(exponents):
            a = exponents[i]
            if a:
                out = (self.power(i, a, current) @ out) % self.p
                current -= a * self.algebra.step(i)
        return out

    def apply(self, i: int, m: int, vectors: np.ndarray) -> np.ndarray:
        return (self.matrix(i, m) @ np.asarray(vectors, dtype=np.int64)) % self.p

    def shifted(self, s: int) -> "WeightedModule":
        """M[s]: every weight raised by s."""
        return WeightedModule(
            self.algebra,
            self.p,
            {m + s: d for m, d in self.dims.items()},
            {(i, m + s): mat for (i, m), mat in self.mult.items()},
            self.start,
        )

    def validate(self) -> None:
        for (i, m), mat in self.mult.items():
            expected = (self.dim(m - self.algebra.step(i)), self.dim(m))
            if mat.shape != expected:
                raise ModuleStructureError(
                    f"y_{i} at weight {m} has shape {mat.shape}, expected {expected}"
                )
        variables = self.active_variables()
        for i in variables:
            d = self.algebra.nilpotency(i)
            for m in self.weights:
                if self.power(i, d, m).any():
                    raise ModuleStructureError(f"y_{i}^{d} != 0 at weight {m}")
        for a_idx, i in enumerate(variables):
            for j in variables[a_idx + 1 :]:
                for m in self.weights:
                    left = (self.matrix(j, m - self.algebra.step(i)) @ self.matrix(i, m)) % self.p
                    right = (self.matrix(i, m - self.algebra.step(j)) @ self.matrix(j, m)) % self.p
                    if not np.array_equal(left, right):
                        raise ModuleStructureError(f"y_{i} and y_{j} do not commute at weight {m}")


def augmentation_module(algebra: TruncatedAlgebra, p: int, weight: int = 0) -> WeightedModule:
    return WeightedModule(algebra, p, {weight: 1}, {})


def cyclic_module(
    algebra: TruncatedAlgebra, p: int, i: int, top: int, size: int
) -> WeightedModule:
    """F[y_i]/(y_i^size) generated in weight `top`; other variables act as zero."""
    step = algebra.step(i)
    dims = {top - k * step: 1 for k in range(size)}
    mult = {(i, top - k * step): np.ones((1, 1), dtype=np.int64) for k in range(size - 1)}
    return WeightedModule(algebra, p, dims, mult, start=i)


def direct_sum(modules: Iterable[WeightedModule]) -> WeightedModule:
    modules = list(modules)
    if not modules:
        raise ValueError("direct sum of nothing")
    base = modules[0]
    dims: Dict[int, int] = {}
    for mod in modules:
        for m, d in mod.dims.items():
            dims[m] = dims.get(m, 0) + d
    keys = sorted({key for mod in modules for key in mod.mult})
    mult: Dict[Key, np.ndarray] = {}
    for i, m in keys:
        target = m - base.algebra.step(i)
        mat = np.zeros((dims.get(target, 0), dims.get(m, 0)), dtype=np.int64)
        row = col = 0
        for mod in modules:
            block = mod.matrix(i, m)
            mat[row : row + block.shape[0], col : col + block.shape[1]] = block
            row += mod.dim(target)
            col += mod.dim(m)
        mult[(i, m)] = mat
    return WeightedModule(base.algebra, base.p, dims, mult, min(mod.start for mod in modules))
