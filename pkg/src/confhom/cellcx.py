from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np

from .exactla import (
    CoefficientRing,
    SparseMatrix,
    nullspace_mod_p,
    rank,
    rank_mod_p,
    smith_normal_form,
)
from .freegroup import FreeGroupMap, RankMismatch
from .umor import apply_induced, big_omega, induced_map, monomial, monomial_product, signed_shuffle_coeff
from .utils import compositions, weak_compositions

logger = logging.getLogger(__name__)


class ChainComplexError(RuntimeError):
    pass


class Record(NamedTuple):
    """Cell index (b, P, v); tuple order is the basis order."""

    b: int
    P: Tuple[int, ...]
    v: Tuple[int, ...]

    @property
    def n(self) -> int:
        return sum(self.P) + sum(self.v)

    @property
    def d(self) -> int:
        return self.n + self.b

    @property
    def genus(self) -> int:
        return len(self.v) // 2

    def __str__(self) -> str:
        return f"({self.b},{list(self.P)},{list(self.v)})"


Chain = Dict[Record, int]


def empty_record(g: int) -> Record:
    return Record(0, (), (0,) * (2 * g))


def _accumulate(acc: Chain, t: Record, c: int) -> None:
    value = acc.get(t, 0) + c
    if value:
        acc[t] = value
    else:
        acc.pop(t, None)


def enumerate_records(g: int, n: int) -> List[Record]:
    if n < 0:
        raise ValueError("n must be nonnegative")
    out: List[Record] = []
    for m in range(n + 1):
        vs = weak_compositions(n - m, 2 * g)
        for P in compositions(m):
            for v in vs:
                out.append(Record(len(P), P, v))
    out.sort()
    return out


def estimate_record_count(g: int, n: int) -> int:
    total = 0
    for m in range(n + 1):
        comps = 1 if m == 0 else 2 ** (m - 1)
        free = n - m
        total += comps * (comb(free + 2 * g - 1, 2 * g - 1) if g else int(free == 0))
    return total


def differential(t: Record) -> Chain:
    g = t.genus
    b, P, v = t
    out: Chain = {}
    for i in range(1, b):
        c = signed_shuffle_coeff(P[i - 1], P[i])
        if c:
            merged = P[: i - 1] + (P[i - 1] + P[i],) + P[i + 1 :]
            _accumulate(out, Record(b - 1, merged, v), (-1) ** i * c)
    if b:
        sign = (-1) ** b
        product = big_omega(g, P[-1]) * monomial(v)
        for w, c in product.terms.items():
            _accumulate(out, Record(b - 1, P[:-1], w), sign * c)
    return out


def differential_of_chain(chain: Chain) -> Chain:
    out: Chain = {}
    for t, c in chain.items():
        for s, d in differential(t).items():
            _accumulate(out, s, c * d)
    return out


def _interleavings(P: Tuple[int, ...], Q: Tuple[int, ...]) -> Iterable[Tuple[Tuple[int, ...], int]]:
    """Shuffles of P and Q with the twisted sign of each crossing."""
    total = len(P) + len(Q)
    for slots in combinations(range(total), len(Q)):
        taken = set(slots)
        merged: List[int] = []
        sign = 1
        i = j = 0
        for pos in range(total):
            if pos in taken:
                q = Q[j]
                # Q_j jumps over the remaining P_i
                for rest in P[i:]:
                    if (1 + rest * q) % 2:
                        sign = -sign
                merged.append(q)
                j += 1
            else:
                merged.append(P[i])
                i += 1
        yield tuple(merged), sign


def bar_product(P: Tuple[int, ...], Q: Tuple[int, ...]) -> Dict[Tuple[int, ...], int]:
    out: Dict[Tuple[int, ...], int] = {}
    global_sign = -1 if (len(Q) * sum(P)) % 2 else 1
    for merged, sign in _interleavings(P, Q):
        value = out.get(merged, 0) + global_sign * sign
        if value:
            out[merged] = value
        else:
            out.pop(merged, None)
    return out


def record_product(s: Record, t: Record) -> Chain:
    if len(s.v) != len(t.v):
        raise RankMismatch(f"records of genus {s.genus} and {t.genus}")
    coeff_v = monomial_product(s.v, t.v)
    if not coeff_v:
        return {}
    if (sum(s.v) * (t.b + sum(t.P))) % 2:
        coeff_v = -coeff_v
    v = tuple(a + c for a, c in zip(s.v, t.v))
    out: Chain = {}
    for merged, c in bar_product(s.P, t.P).items():
        _accumulate(out, Record(s.b + t.b, merged, v), c * coeff_v)
    return out


def product(a: Chain, b: Chain) -> Chain:
    out: Chain = {}
    for s, c in a.items():
        for t, d in b.items():
            for r, e in record_product(s, t).items():
                _accumulate(out, r, c * d * e)
    return out


def deconcatenate(t: Record) -> List[Tuple[Record, Record, int]]:
    zero_v = (0,) * len(t.v)
    out = []
    for i in range(t.b + 1):
        left = Record(i, t.P[:i], zero_v)
        right = Record(t.b - i, t.P[i:], t.v)
        sign = -1 if ((t.b - i) * sum(t.P[:i])) % 2 else 1
        out.append((left, right, sign))
    return out


@dataclass
class ChainSlice:
    g: int
    n: int
    basis: Dict[int, List[Record]] = field(default_factory=dict)
    differentials: Dict[int, SparseMatrix] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self._index = {b: {t: k for k, t in enumerate(ts)} for b, ts in self.basis.items()}

    @property
    def bar_degrees(self) -> range:
        return range(self.n + 1)

    def size(self, b: int) -> int:
        return len(self.basis.get(b, ()))

    @property
    def total_size(self) -> int:
        return sum(len(ts) for ts in self.basis.values())

    def index(self, t: Record) -> int:
        return self._index[t.b][t]

    def boundary(self, b: int) -> SparseMatrix:
        """Matrix of the differential from bar-degree b to b - 1."""
        if b in self.differentials:
            return self.differentials[b]
        return SparseMatrix.zero(self.size(b - 1), self.size(b))

    def euler_characteristic(self) -> int:
        return sum((-1) ** b * self.size(b) for b in self.bar_degrees)

    def verify(self) -> None:
        for b in range(2, self.n + 1):
            square = self.boundary(b - 1) @ self.boundary(b)
            if not square.is_zero():
                raise ChainComplexError(
                    f"d^2 != 0 for g={self.g} n={self.n} at bar-degree {b}"
                )


def build_slice(g: int, n: int, verify: bool = True) -> ChainSlice:
    basis: Dict[int, List[Record]] = {b: [] for b in range(n + 1)}
    for t in enumerate_records(g, n):
        basis[t.b].append(t)
    slice_ = ChainSlice(g, n, basis)
    for b in range(1, n + 1):
        if not basis[b]:
            continue
        entries = []
        for col, t in enumerate(basis[b]):
            for s, c in differential(t).items():
                entries.append((slice_.index(s), col, c))
        slice_.differentials[b] = SparseMatrix.from_entries(len(basis[b - 1]), len(basis[b]), entries)
    logger.debug(f"[build_slice] g={g} n={n} records={slice_.total_size}")
    if verify:
        slice_.verify()
    return slice_


@dataclass(frozen=True)
class HomologyGroup:
    rank: int
    torsion: Tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) or "0"


@dataclass
class HomologyTable:
    ring: CoefficientRing
    entries: Dict[Tuple[int, int], HomologyGroup] = field(default_factory=dict)

    def dim(self, n: int, i: int) -> int:
        group = self.entries.get((n, i))
        return group.rank if group else 0

    def group(self, n: int, i: int) -> HomologyGroup:
        return self.entries.get((n, i), HomologyGroup(0))

    def update(self, n: int, rows: Dict[int, HomologyGroup]) -> None:
        for i, group in rows.items():
            self.entries[(n, i)] = group

    def max_n(self) -> int:
        return max((n for n, _ in self.entries), default=-1)


def homology(slice_: ChainSlice, ring: CoefficientRing) -> Dict[int, HomologyGroup]:
    """H_i(C_n) for i = 0..n, read off the slice at bar-degree b = n - i."""
    n = slice_.n
    ranks: Dict[int, int] = {}
    torsion: Dict[int, Tuple[int, ...]] = {}
    for b in range(1, n + 1):
        d = slice_.boundary(b)
        if ring.kind == "z":
            snf = smith_normal_form(d)
            ranks[b] = snf.rank
            torsion[b] = snf.torsion
        elif ring.kind == "fp":
            ranks[b] = rank(d.reduce_mod(ring.p), ring)
        else:
            ranks[b] = rank(d, ring)
    out: Dict[int, HomologyGroup] = {}
    for b in range(n + 1):
        free = slice_.size(b) - ranks.get(b, 0) - ranks.get(b + 1, 0)
        out[n - b] = HomologyGroup(free, torsion.get(b, ()))
    return out


def act(phi: FreeGroupMap, slice_: ChainSlice) -> Dict[int, SparseMatrix]:
    if phi.source_rank != 2 * slice_.g or phi.target_rank != 2 * slice_.g:
        raise RankMismatch(f"map of rank {phi.source_rank} on a genus {slice_.g} slice")
    descriptor = induced_map(phi)
    out: Dict[int, SparseMatrix] = {}
    for b, ts in slice_.basis.items():
        entries = []
        for col, t in enumerate(ts):
            image = apply_induced(descriptor, monomial(t.v))
            for w, c in image.terms.items():
                entries.append((slice_.index(Record(b, t.P, w)), col, c))
        out[b] = SparseMatrix.from_entries(len(ts), len(ts), entries)
    return out


def commutes_with_differential(action: Dict[int, SparseMatrix], slice_: ChainSlice) -> bool:
    for b in range(1, slice_.n + 1):
        d = slice_.boundary(b)
        if not (action[b - 1] @ d - d @ action[b]).is_zero():
            return False
    return True


def homology_action_trivial(
    phi: FreeGroupMap, slice_: ChainSlice, p: int, action: Optional[Dict[int, SparseMatrix]] = None
) -> bool:
    """Whether rho(phi) induces the identity on H_*(C_n; F_p)."""
    if action is None:
        action = act(phi, slice_)
    for b in slice_.bar_degrees:
        size = slice_.size(b)
        if not size:
            continue
        cycles = nullspace_mod_p(slice_.boundary(b).to_dense(p), p) if b else np.eye(size, dtype=np.int64)
        if cycles.shape[1] == 0:
            continue
        shift = (action[b] - SparseMatrix.identity(size)).to_dense(p)
        moved = (shift @ cycles) % p
        if b + 1 <= slice_.n and slice_.size(b + 1):
            boundaries = slice_.boundary(b + 1).to_dense(p)
        else:
            boundaries = np.zeros((size, 0), dtype=np.int64)
        base = rank_mod_p(boundaries, p) if boundaries.size else 0
        if rank_mod_p(np.concatenate([boundaries, moved], axis=1), p) != base:
            return False
    return True

