from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from ..exactla import extend_basis_mod_p, nullspace_mod_p, rank_mod_p
from .algebra import ModuleStructureError, WeightedModule

logger = logging.getLogger(__name__)

Bar = Tuple[int, int]


@dataclass(frozen=True)
class Barcode:
    """Bars (top weight m, size c) of a module over F[y_i]/(y_i^d)."""

    variable: int
    step: int
    nilpotency: int
    bars: Tuple[Bar, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "bars", tuple(sorted(self.bars, key=lambda b: (-b[0], -b[1]))))

    def __len__(self) -> int:
        return len(self.bars)

    def is_empty(self) -> bool:
        return not self.bars

    def support(self, bar: Bar) -> List[int]:
        m, c = bar
        return [m - k * self.step for k in range(c)]

    def barycentre(self, bar: Bar) -> int:
        m, c = bar
        return m - (c - 1) * self.step // 2

    def dims(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for bar in self.bars:
            for m in self.support(bar):
                out[m] = out.get(m, 0) + 1
        return out

    def rank(self, j: int, m: int) -> int:
        """Rank of y^j out of weight m implied by the bars."""
        total = 0
        for top, c in self.bars:
            offset, rest = divmod(top - m, self.step)
            if rest == 0 and 0 <= offset and offset + j <= c - 1:
                total += 1
        return total

    def shifted(self, s: int) -> "Barcode":
        return Barcode(self.variable, self.step, self.nilpotency, tuple((m + s, c) for m, c in self.bars))

    def counter(self) -> Counter:
        return Counter(self.bars)

    def free_part(self) -> "Barcode":
        return Barcode(
            self.variable, self.step, self.nilpotency, tuple(b for b in self.bars if b[1] == self.nilpotency)
        )

    def narrow_part(self) -> "Barcode":
        return Barcode(
            self.variable, self.step, self.nilpotency, tuple(b for b in self.bars if b[1] < self.nilpotency)
        )

    def is_free(self) -> bool:
        return all(c == self.nilpotency for _, c in self.bars)

    def as_list(self) -> List[List[int]]:
        return [[m, c] for m, c in self.bars]


def _rank_table(module: WeightedModule, i: int) -> Dict[Tuple[int, int], int]:
    d = module.algebra.nilpotency(i)
    table: Dict[Tuple[int, int], int] = {}
    for m in module.weights:
        table[(0, m)] = module.dim(m)
        for j in range(1, d + 1):
            power = module.power(i, j, m)
            table[(j, m)] = rank_mod_p(power, module.p) if power.size else 0
    return table


def barcode(module: WeightedModule, i: int) -> Barcode:
    alg = module.algebra
    step, d = alg.step(i), alg.nilpotency(i)
    table = _rank_table(module, i)

    def r(j: int, m: int) -> int:
        if j > d:
            return 0
        return table.get((j, m), 0)

    bars: List[Bar] = []
    for m in module.weights:
        for c in range(1, d + 1):
            at_least_c = r(c - 1, m) - r(c, m + step)
            at_least_next = r(c, m) - r(c + 1, m + step)
            mult = at_least_c - at_least_next
            if mult < 0:
                raise ModuleStructureError(f"negative bar multiplicity at ({m}, {c})")
            bars.extend([(m, c)] * mult)
    result = Barcode(i, step, d, tuple(bars))
    if result.dims() != {m: module.dim(m) for m in module.weights}:
        raise ModuleStructureError(f"bars {result.bars} do not reproduce the dimensions")
    for (j, m), value in table.items():
        if result.rank(j, m) != value:
            raise ModuleStructureError(f"bars do not reproduce rank of y_{i}^{j} at weight {m}")
    return result


@dataclass(frozen=True)
class CyclicGenerator:
    weight: int
    size: int
    vector: np.ndarray


def adapted_generators(module: WeightedModule, i: int, bars: Barcode | None = None) -> List[CyclicGenerator]:
    """Generators x with module = direct sum of F[y_i] x, one per bar."""
    p = module.p
    alg = module.algebra
    step, d = alg.step(i), alg.nilpotency(i)
    if bars is None:
        bars = barcode(module, i)
    wanted = bars.counter()
    socles: Dict[int, np.ndarray] = {}
    out: List[CyclicGenerator] = []
    for c in range(d, 0, -1):
        for m in module.weights:
            need = wanted.get((m, c), 0)
            if not need:
                continue
            kernel = nullspace_mod_p(module.power(i, c, m), p)
            socle_weight = m - (c - 1) * step
            images = (module.power(i, c - 1, m) @ kernel) % p
            span = socles.get(socle_weight, np.zeros((module.dim(socle_weight), 0), dtype=np.int64))
            _, chosen = extend_basis_mod_p(span, images, p)
            if len(chosen) < need:
                raise ModuleStructureError(f"cannot find {need} generators for bar ({m}, {c})")
            chosen = chosen[:need]
            for col in chosen:
                out.append(CyclicGenerator(m, c, kernel[:, col] % p))
            socles[socle_weight] = np.concatenate([span, images[:, chosen]], axis=1)
    return out
