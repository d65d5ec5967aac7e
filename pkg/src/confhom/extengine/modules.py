from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..exactla import rank_mod_p
from ..utils import subsets_by_size
from .algebra import TruncatedAlgebra, WeightedModule
from .barcode import barcode

logger = logging.getLogger(__name__)


def _inclusion_matrix(u: int, k: int, step: int, coeff: int, p: int) -> np.ndarray:
    """z_S -> coeff * sum of z_S' over S' containing S with |S'| = |S| + step."""
    sources = subsets_by_size(u, k)
    targets = subsets_by_size(u, k + step)
    mat = np.zeros((len(targets), len(sources)), dtype=np.int64)
    value = coeff % p
    if not value:
        return mat
    for col, s in enumerate(sources):
        present = set(s)
        for r, t in enumerate(targets):
            if present.issubset(t):
                mat[r, col] = value
    return mat


def build_Bu(u: int, p: int, doubled: bool = False) -> WeightedModule:
    """The module B_u over Gamma_{F_p}(y) in the subset basis z_S, weight -2|S|."""
    if u < 0:
        raise ValueError("u must be nonnegative")
    algebra = TruncatedAlgebra.divided_powers(p)
    dims = {-2 * k: comb(u, k) for k in range(u + 1)}
    mult: Dict[Tuple[int, int], np.ndarray] = {}
    i = 0
    while p**i <= u:
        step = p**i
        coeff = 2**step if doubled else 1
        for k in range(u - step + 1):
            mult[(i, -2 * k)] = _inclusion_matrix(u, k, step, coeff, p)
        i += 1
    module = WeightedModule(algebra, p, dims, mult)
    logger.debug(f"[build_Bu] u={u} p={p} doubled={doubled} dim={module.total_dim}")
    return module


def dualize(module: WeightedModule) -> WeightedModule:
    dims = {-m: d for m, d in module.dims.items()}
    mult = {}
    for (i, m), mat in module.mult.items():
        target = m - module.algebra.step(i)
        mult[(i, -target)] = mat.T.copy()
    return WeightedModule(module.algebra, module.p, dims, mult, module.start)


# ---------------------------------------------------------------------------
# sparse subsets


def is_sparse(subset: Tuple[int, ...]) -> bool:
    count = 0
    members = set(subset)
    top = max(members, default=0)
    for i in range(1, top + 1):
        if i in members:
            count += 1
        if 2 * count > i:
            return False
    return True


def ell(u: int, k: int) -> int:
    if k < 0:
        return 0
    return max(comb(u, k) - (comb(u, k - 1) if k >= 1 else 0), 0)


def sparse_subsets(u: int, k: int) -> List[Tuple[int, ...]]:
    return [s for s in subsets_by_size(u, k) if is_sparse(s)]


def _divided_power_columns(u: int, m: int, generators: List[Tuple[int, ...]], p: int) -> np.ndarray:
    """Columns y^{[m - |S|]} z_S in the weight -2m basis."""
    targets = subsets_by_size(u, m)
    mat = np.zeros((len(targets), len(generators)), dtype=np.int64)
    for col, s in enumerate(generators):
        present = set(s)
        for r, t in enumerate(targets):
            if present.issubset(t):
                mat[r, col] = 1
    return mat % p


@dataclass
class SparseReport:
    u: int
    p: int
    counts: Dict[int, int] = field(default_factory=dict)
    expected: Dict[int, int] = field(default_factory=dict)
    theta_injective: Dict[int, bool] = field(default_factory=dict)
    theta_surjective: bool = True
    lefschetz: Dict[int, bool] = field(default_factory=dict)
    duality: bool = True

    @property
    def ok(self) -> bool:
        return (
            self.counts == self.expected
            and all(self.theta_injective.values())
            and self.theta_surjective
            and all(self.lefschetz.values())
            and self.duality
        )

    def failures(self) -> List[str]:
        out = []
        for k, c in self.counts.items():
            if c != self.expected.get(k):
                out.append(f"sparse {k}-subsets: {c} != {self.expected.get(k)}")
        out += [f"Theta_{{u,{k}}} not injective" for k, ok in self.theta_injective.items() if not ok]
        if not self.theta_surjective:
            out.append("Theta_u not surjective")
        out += [f"Lefschetz containment fails for k={k}" for k, ok in self.lefschetz.items() if not ok]
        if not self.duality:
            out.append("dual barcode is not the shifted barcode")
        return out


def sparse_tools(u: int, p: int, max_k: Optional[int] = None) -> SparseReport:
    report = SparseReport(u, p)
    half = u // 2
    by_size = {k: sparse_subsets(u, k) for k in range(u + 1)}
    for k in range(u + 1):
        report.counts[k] = len(by_size[k])
        report.expected[k] = ell(u, k) if k <= half else 0
    top_k = half if max_k is None else min(max_k, half)
    for k in range(top_k + 1):
        ok = True
        for m in range(u - k + 1):
            gens = [s for j in range(min(k, m) + 1) for s in by_size[j]]
            cols = _divided_power_columns(u, m, gens, p)
            if gens and rank_mod_p(cols, p) != len(gens):
                ok = False
                break
        report.theta_injective[k] = ok
    all_sparse = [s for j in range(half + 1) for s in by_size[j]]
    for m in range(u + 1):
        gens = [s for s in all_sparse if len(s) <= m]
        cols = _divided_power_columns(u, m, gens, p)
        if rank_mod_p(cols, p) != comb(u, m):
            report.theta_surjective = False
            break
    for k in range(u + 1):
        low = [s for j in range((u - k) // 2 + 1) for s in subsets_by_size(u, j)]
        ok = True
        for m in range(u + 1):
            if 2 * m < u + k:
                continue
            gens = [s for s in low if len(s) <= m]
            cols = _divided_power_columns(u, m, gens, p)
            if rank_mod_p(cols, p) != comb(u, m):
                ok = False
                break
        report.lefschetz[k] = ok
    module = build_Bu(u, p)
    bars = barcode(module, 0)
    dual_bars = barcode(dualize(module), 0)
    report.duality = dual_bars.bars == bars.shifted(2 * u).bars
    logger.debug(f"[sparse_tools] u={u} p={p} ok={report.ok}")
    return report
