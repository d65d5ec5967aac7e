from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List

from .algebra import TamenessViolation
from .barcode import Barcode, barcode
from .modules import build_Bu
from .series import Laurent, geometric
from .tame import free_narrow, is_narrow, narrow_window, quotient_mod_variable

logger = logging.getLogger(__name__)


def top_index(u: int, p: int) -> int:
    """Largest h with p^h <= u + 1."""
    h = 0
    while p ** (h + 1) <= u + 1:
        h += 1
    return h


@dataclass
class NuiDecomposition:
    u: int
    p: int
    doubled: bool = False
    pieces: Dict[int, Barcode] = field(default_factory=dict)
    shifts: Dict[int, int] = field(default_factory=dict)
    block_diagonal: Dict[int, bool] = field(default_factory=dict)

    @property
    def h(self) -> int:
        return top_index(self.u, self.p)

    def nonempty(self) -> Dict[int, Barcode]:
        return {i: bars for i, bars in self.pieces.items() if not bars.is_empty()}

    def poincare_identity(self) -> bool:
        """(1 + s^-2)^u against the sum of P_{N_{u,i}} times 1 + s^-2 + ... + s^{-2(p^i - 1)}."""
        lhs = Laurent({0: 1, -2: 1}) ** self.u
        rhs = Laurent()
        for i, bars in self.pieces.items():
            rhs = rhs + Laurent.from_dims(bars.dims()) * geometric(self.p**i, -2)
        return lhs == rhs

    def as_dict(self) -> Dict[int, List[List[int]]]:
        return {i: bars.as_list() for i, bars in self.nonempty().items()}


def compute_Nui(u: int, p: int, doubled: bool = False, check: bool = False) -> NuiDecomposition:
    """Alternate free/narrow splitting and quotienting starting from B_u."""
    if u < 0:
        raise ValueError("u must be nonnegative")
    result = NuiDecomposition(u, p, doubled)
    module = build_Bu(u, p, doubled)
    alg = module.algebra
    shift = u
    i = 0
    while not module.is_zero():
        split = free_narrow(module, shift, i, check=check)
        narrow = split.narrow
        if not is_narrow(narrow, shift, i):
            low, high = narrow_window(narrow, shift, i)
            raise TamenessViolation(f"N_{{{u},{i}}} leaves the window ]{low}, {high}[")
        result.pieces[i] = barcode(narrow, i)
        result.shifts[i] = shift
        result.block_diagonal[i] = split.block_diagonal
        logger.debug(f"[compute_Nui] u={u} p={p} i={i} shift={shift} bars={result.pieces[i].bars}")
        if split.free.is_zero():
            break
        module = quotient_mod_variable(split.free, i)
        shift = shift - alg.D(i + 1) + alg.D(i)
        i += 1
    late = [j for j, bars in result.nonempty().items() if j > result.h]
    if late:
        raise TamenessViolation(f"N_{{{u},i}} nonzero beyond i = {result.h}: {late}")
    return result
