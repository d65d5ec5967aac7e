from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

logger = logging.getLogger(__name__)

# Dense numpy elimination above this many cells switches to dict rows.
DENSE_CELL_LIMIT = 4_000_000
MAX_PRIME = 2**31


class RingError(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class CoefficientRing:
    kind: str
    p: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in ("fp", "q", "z"):
            raise RingError(f"unknown coefficient ring {self.kind!r}")
        if self.kind == "fp":
            if self.p is None or not isprime(self.p):
                raise RingError(f"p={self.p} is not prime")
            if self.p >= MAX_PRIME:
                raise RingError(f"p={self.p} exceeds 2^31")
        elif self.p is not None:
            raise RingError(f"ring {self.kind!r} takes no characteristic")

    @classmethod
    def prime_field(cls, p: int) -> "CoefficientRing":
        return cls("fp", p)

    @classmethod
    def rationals(cls) -> "CoefficientRing":
        return cls("q")

    @classmethod
    def integers(cls) -> "CoefficientRing":
        return cls("z")

    @classmethod
    def parse(cls, text: str) -> "CoefficientRing":
        """Accepts `q`, `z`, `f3`, `F_5` or a bare prime like `7`."""
        value = text.strip().lower().replace("_", "")
        if value in ("q", "qq", "rationals"):
            return cls.rationals()
        if value in ("z", "zz", "integers"):
            return cls.integers()
        if value.startswith("f"):
            value = value[1:]
        try:
            return cls.prime_field(int(value))
        except ValueError as exc:
            raise RingError(f"cannot parse coefficient ring {text!r}") from exc

    @property
    def is_field(self) -> bool:
        return self.kind != "z"

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "fp" else 0

    @property
    def label(self) -> str:
        if self.kind == "fp":
            return f"F{self.p}"
        return self.kind.upper()

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class SparseMatrix:
    rows: int
    cols: int
    entries: Tuple[Tuple[int, int, int], ...] = ()

    @classmethod
    def from_dict(
        cls, rows: int, cols: int, data: Mapping[Tuple[int, int], int]
    ) -> "SparseMatrix":
        entries = []
        for (r, c), value in data.items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise DimensionMismatch(f"entry ({r}, {c}) outside {rows}x{cols}")
            if value:
                entries.append((r, c, value))
        entries.sort()
        return cls(rows, cols, tuple(entries))

    @classmethod
    def from_entries(
        cls, rows: int, cols: int, entries: Iterable[Tuple[int, int, int]]
    ) -> "SparseMatrix":
        acc: Dict[Tuple[int, int], int] = defaultdict(int)
        for r, c, value in entries:
            acc[(r, c)] += value
        return cls.from_dict(rows, cols, acc)

    @classmethod
    def from_dense(cls, array: Sequence[Sequence[int]]) -> "SparseMatrix":
        arr = np.asarray(array, dtype=object)
        if arr.ndim != 2:
            raise DimensionMismatch("dense input must be two-dimensional")
        rows, cols = arr.shape
        data = {
            (r, c): int(arr[r, c])
            for r in range(rows)
            for c in range(cols)
            if arr[r, c]
        }
        return cls.from_dict(rows, cols, data)

    @classmethod
    def identity(cls, size: int) -> "SparseMatrix":
        return cls(size, size, tuple((i, i, 1) for i in range(size)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, ())

    @property
    def nnz(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def is_zero(self) -> bool:
        return not self.entries

    def as_dict(self) -> Dict[Tuple[int, int], int]:
        return {(r, c): v for r, c, v in self.entries}

    def row_dicts(self) -> Dict[int, Dict[int, int]]:
        rows: Dict[int, Dict[int, int]] = {}
        for r, c, v in self.entries:
            rows.setdefault(r, {})[c] = v
        return rows

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix.from_dict(
            self.cols, self.rows, {(c, r): v for r, c, v in self.entries}
        )

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        right = other.row_dicts()
        acc: Dict[Tuple[int, int], int] = defaultdict(int)
        for r, k, v in self.entries:
            for c, w in right.get(k, {}).items():
                acc[(r, c)] += v * w
        return SparseMatrix.from_dict(self.rows, other.cols, acc)

    __matmul__ = matmul

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape {self.shape} != {other.shape}")
        acc: Dict[Tuple[int, int], int] = defaultdict(int)
        for r, c, v in self.entries + other.entries:
            acc[(r, c)] += v
        return SparseMatrix.from_dict(self.rows, self.cols, acc)

    def __neg__(self) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols, tuple((r, c, -v) for r, c, v in self.entries))

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def reduce_mod(self, p: int) -> "SparseMatrix":
        return SparseMatrix.from_dict(
            self.rows, self.cols, {(r, c): v % p for r, c, v in self.entries}
        )

    def to_dense(self, p: Optional[int] = None) -> np.ndarray:
        """int64 array reduced mod p, or an object array of exact integers."""
        if p is None:
            out = np.zeros((self.rows, self.cols), dtype=object)
            for r, c, v in self.entries:
                out[r, c] = v
            return out
        out = np.zeros((self.rows, self.cols), dtype=np.int64)
        for r, c, v in self.entries:
            out[r, c] = v % p
        return out

    def apply(self, vector: Sequence[int]) -> List[int]:
        if len(vector) != self.cols:
            raise DimensionMismatch(f"vector of length {len(vector)} for {self.cols} columns")
        out = [0] * self.rows
        for r, c, v in self.entries:
            out[r] += v * vector[c]
        return out


@dataclass(frozen=True)
class SmithForm:
    invariant_factors: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)


# ---------------------------------------------------------------------------
# F_p kernels on numpy arrays


def rref_mod_p(array: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form mod p and the pivot columns."""
    a = np.array(array, dtype=np.int64) % p
    if a.ndim != 2:
        raise DimensionMismatch("expected a matrix")
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        column = a[:, c].copy()
        column[r] = 0
        hit = np.nonzero(column)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(column[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank_mod_p(array: np.ndarray, p: int) -> int:
    a = np.asarray(array)
    if a.size == 0:
        return 0
    # eliminate along the shorter side
    if a.shape[0] > a.shape[1]:
        a = a.T
    return len(rref_mod_p(a, p)[1])


def nullspace_mod_p(array: np.ndarray, p: int) -> np.ndarray:
    """Basis of {x : A x = 0} as columns of a (cols x k) array."""
    a = np.asarray(array, dtype=np.int64)
    rows, cols = a.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    reduced, pivots = rref_mod_p(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-reduced[i, f]) % p
    return basis


def colspace_mod_p(array: np.ndarray, p: int) -> np.ndarray:
    """Independent columns spanning the column space, as a (rows x r) array."""
    a = np.asarray(array, dtype=np.int64) % p
    if a.size == 0:
        return np.zeros((a.shape[0], 0), dtype=np.int64)
    _, pivots = rref_mod_p(a, p)
    return a[:, pivots]


def extend_basis_mod_p(
    span: np.ndarray, candidates: np.ndarray, p: int
) -> Tuple[np.ndarray, List[int]]:
    """Pick candidate columns independent modulo span(span).

    Returns the chosen columns and their indices in `candidates`.
    """
    height = candidates.shape[0]
    span = np.asarray(span, dtype=np.int64)
    if span.size == 0:
        span = np.zeros((height, 0), dtype=np.int64)
    stacked = np.concatenate([span % p, np.asarray(candidates, dtype=np.int64) % p], axis=1)
    if stacked.size == 0:
        return np.zeros((height, 0), dtype=np.int64), []
    _, pivots = rref_mod_p(stacked, p)
    offset = span.shape[1]
    chosen = [c - offset for c in pivots if c >= offset]
    return np.asarray(candidates, dtype=np.int64)[:, chosen] % p, chosen


def solve_mod_p(array: np.ndarray, rhs: np.ndarray, p: int) -> Optional[np.ndarray]:
    """One solution of A X = B mod p (B a vector or matrix), or None."""
    a = np.asarray(array, dtype=np.int64)
    b = np.asarray(rhs, dtype=np.int64)
    vector = b.ndim == 1
    if vector:
        b = b.reshape(-1, 1)
    rows, cols = a.shape
    if b.shape[0] != rows:
        raise DimensionMismatch(f"rhs has {b.shape[0]} rows, matrix has {rows}")
    if rows == 0:
        x = np.zeros((cols, b.shape[1]), dtype=np.int64)
        return x[:, 0] if vector else x
    reduced, pivots = rref_mod_p(np.concatenate([a % p, b % p], axis=1), p)
    if any(c >= cols for c in pivots):
        return None
    x = np.zeros((cols, b.shape[1]), dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = reduced[i, cols:]
    return x[:, 0] if vector else x


def inverse_mod_p(array: np.ndarray, p: int) -> np.ndarray:
    a = np.asarray(array, dtype=np.int64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionMismatch("inverse of a non-square matrix")
    x = solve_mod_p(a, np.eye(n, dtype=np.int64), p)
    if x is None:
        raise ValueError("matrix is singular mod p")
    return x


# ---------------------------------------------------------------------------
# sparse elimination on dict rows


def _sparse_rank_mod_p(rows: Dict[int, Dict[int, int]], p: int) -> int:
    pivot_rows: Dict[int, Dict[int, int]] = {}
    rank = 0
    for r in sorted(rows, key=lambda k: (len(rows[k]), k)):
        row = {c: v % p for c, v in rows[r].items() if v % p}
        while row:
            lead = min(row)
            pivot = pivot_rows.get(lead)
            if pivot is None:
                inv = pow(row[lead], -1, p)
                pivot_rows[lead] = {c: (v * inv) % p for c, v in row.items()}
                rank += 1
                break
            factor = row[lead]
            for c, v in pivot.items():
                nv = (row.get(c, 0) - factor * v) % p
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
    return rank


def _eliminate_unit_pivots(rows: Dict[int, Dict[int, int]]) -> int:
    """Clear every +-1 pivot in place; returns how many were removed."""
    cols: Dict[int, set] = defaultdict(set)
    for r, row in rows.items():
        for c in row:
            cols[c].add(r)
    removed = 0
    queue = deque(sorted(rows))
    while queue:
        r = queue.popleft()
        row = rows.get(r)
        if not row:
            continue
        units = [c for c, v in row.items() if v in (1, -1)]
        if not units:
            continue
        pc = min(units, key=lambda c: (len(cols[c]), c))
        pv = row[pc]
        for r2 in sorted(cols[pc] - {r}):
            row2 = rows[r2]
            factor = row2[pc] * pv
            for c, v in row.items():
                nv = row2.get(c, 0) - factor * v
                if nv:
                    if c not in row2:
                        cols[c].add(r2)
                    row2[c] = nv
                elif c in row2:
                    del row2[c]
                    cols[c].discard(r2)
            if not row2:
                del rows[r2]
            else:
                queue.append(r2)
        for c in row:
            cols[c].discard(r)
        del rows[r]
        removed += 1
    return removed


def _divisibility_chain(values: Iterable[int]) -> List[int]:
    chain = sorted(abs(v) for v in values if v)
    for i in range(len(chain)):
        for j in range(i + 1, len(chain)):
            a, b = chain[i], chain[j]
            g = gcd(a, b)
            chain[i], chain[j] = g, a // g * b
    return sorted(chain)


# ---------------------------------------------------------------------------
# public operations


def rank(m: SparseMatrix, ring: CoefficientRing) -> int:
    if not ring.is_field:
        raise RingError("rank over Z is not defined here; use smith_normal_form")
    if m.is_zero():
        return 0
    if ring.kind == "fp":
        if m.rows * m.cols <= DENSE_CELL_LIMIT:
            return rank_mod_p(m.to_dense(ring.p), ring.p)
        return _sparse_rank_mod_p(m.row_dicts(), ring.p)
    return _to_domain_matrix(m, QQ).rank()


def smith_normal_form(m: SparseMatrix) -> SmithForm:
    if m.is_zero():
        return SmithForm(())
    rows = m.row_dicts()
    units = _eliminate_unit_pivots(rows)
    core: Tuple[int, ...] = ()
    if rows:
        live_cols = sorted({c for row in rows.values() for c in row})
        col_index = {c: i for i, c in enumerate(live_cols)}
        row_index = {r: i for i, r in enumerate(sorted(rows))}
        dense = {
            row_index[r]: {col_index[c]: ZZ(v) for c, v in row.items()}
            for r, row in rows.items()
        }
        logger.debug(
            f"[smith_normal_form] {m.rows}x{m.cols}: {units} unit pivots, "
            f"core {len(row_index)}x{len(col_index)}"
        )
        matrix = DomainMatrix(dense, (len(row_index), len(col_index)), ZZ)
        core = tuple(int(d) for d in invariant_factors(matrix.to_dense()))
    return SmithForm((1,) * units + tuple(_divisibility_chain(core)))


def solve_linear(
    m: SparseMatrix, b: Sequence, ring: CoefficientRing
) -> Optional[List]:
    """Any x with m x = b, or None when b is outside the column space."""
    if not ring.is_field:
        raise RingError("solve_linear needs a field")
    if len(b) != m.rows:
        raise DimensionMismatch(f"rhs of length {len(b)} for {m.rows} rows")
    if ring.kind == "fp":
        x = solve_mod_p(m.to_dense(ring.p), np.asarray([int(v) % ring.p for v in b]), ring.p)
        return None if x is None else [int(v) for v in x]
    augmented = dict(m.as_dict())
    for r, value in enumerate(b):
        if value:
            augmented[(r, m.cols)] = value
    if m.rows == 0:
        return [Fraction(0)] * m.cols
    reduced, pivots = _to_domain_matrix(
        SparseMatrix.from_dict(m.rows, m.cols + 1, augmented), QQ
    ).rref()
    if m.cols in pivots:
        return None
    table = reduced.to_dense().to_list()
    x = [Fraction(0)] * m.cols
    for i, c in enumerate(pivots):
        value = table[i][m.cols]
        x[c] = Fraction(int(value.numerator), int(value.denominator))
    return x


def _to_domain_matrix(m: SparseMatrix, domain) -> DomainMatrix:
    data: Dict[int, Dict[int, object]] = {}
    for r, c, v in m.entries:
        data.setdefault(r, {})[c] = domain.convert(v)
    return DomainMatrix(data, (m.rows, m.cols), domain)
