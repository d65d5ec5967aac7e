from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from ..cellcx import ChainSlice, Record, build_slice
from ..exactla import SparseMatrix, nullspace_mod_p, rank_mod_p

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EpsilonRow:
    n: int
    i: int
    rank: int
    dim_source: int
    dim_target: int

    @property
    def injective(self) -> bool:
        return self.rank == self.dim_source

    @property
    def bijective(self) -> bool:
        return self.injective and self.rank == self.dim_target


def epsilon_cochain_map(source: ChainSlice, target: ChainSlice, b: int) -> SparseMatrix:
    """Left concatenation with the dual of (1, (1), 0): C^{b-1}(n) -> C^b(n+1)."""
    if target.n != source.n + 1 or target.g != source.g:
        raise ValueError("target slice must be the next slice of the same genus")
    sign = -1 if (b - 1) % 2 else 1
    entries = []
    for col, t in enumerate(source.basis.get(b - 1, [])):
        image = Record(b, (1,) + t.P, t.v)
        entries.append((target.index(image), col, sign))
    return SparseMatrix.from_entries(target.size(b), source.size(b - 1), entries)


def _coboundary(slice_: ChainSlice, b: int, p: int) -> np.ndarray:
    """delta: C^{b-1} -> C^b as a dense F_p matrix."""
    if b < 1 or b > slice_.n:
        return np.zeros((slice_.size(b), slice_.size(b - 1)), dtype=np.int64)
    return slice_.boundary(b).transpose().to_dense(p)


def _rank(a: np.ndarray, p: int) -> int:
    return rank_mod_p(a, p) if a.size else 0


def cohomology_dim(slice_: ChainSlice, b: int, p: int) -> int:
    size = slice_.size(b)
    return size - _rank(_coboundary(slice_, b + 1, p), p) - _rank(_coboundary(slice_, b, p), p)


def epsilon_rank(source: ChainSlice, target: ChainSlice, b: int, p: int) -> int:
    """Rank of epsilon on H^{b-1}(source) -> H^b(target) over F_p."""
    if not source.size(b - 1) or not target.size(b):
        return 0
    delta = _coboundary(source, b, p)
    if delta.shape[0]:
        cocycles = nullspace_mod_p(delta, p)
    else:
        cocycles = np.eye(source.size(b - 1), dtype=np.int64)
    boundaries = _coboundary(target, b, p)
    images = (epsilon_cochain_map(source, target, b).to_dense(p) @ cocycles) % p
    stacked = np.concatenate([images, boundaries], axis=1)
    return _rank(stacked, p) - _rank(boundaries, p)


def yoneda_eps_action(
    g: int, p: int, max_n: int, slices: Optional[Dict[int, ChainSlice]] = None
) -> List[EpsilonRow]:
    """epsilon-action H_i(C_n) -> H_i(C_{n+1}) for n < max_n, every i."""
    if slices is None:
        slices = {}
    for n in range(max_n + 1):
        if n not in slices:
            slices[n] = build_slice(g, n)
    rows: List[EpsilonRow] = []
    for n in range(max_n):
        source, target = slices[n], slices[n + 1]
        for b in range(1, n + 2):
            rows.append(
                EpsilonRow(
                    n=n,
                    i=n - b + 1,
                    rank=epsilon_rank(source, target, b, p),
                    dim_source=cohomology_dim(source, b - 1, p),
                    dim_target=cohomology_dim(target, b, p),
                )
            )
    logger.debug(f"[yoneda_eps_action] g={g} p={p} rows={len(rows)}")
    return rows
