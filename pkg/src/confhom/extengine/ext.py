from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Dict, List, NamedTuple, Optional, Tuple

from ..cellcx import HomologyGroup, HomologyTable
from ..exactla import CoefficientRing, SparseMatrix, rank
from ..utils import base_digits, compositions_into
from .algebra import WeightedModule
from .barcode import Barcode
from .modules import build_Bu, ell
from .recursion import NuiDecomposition, compute_Nui
from .series import (
    BigradedSeries,
    exterior_series,
    polynomial_generators_series,
    polynomial_series,
    product_series,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExtSummand:
    """One cyclic bar's Ext as a module over Ext(F_p, F_p) restricted to its variable.

    kind is "free" (bar of full size: a single class, killed by alpha_i and beta_i),
    "augmentation" (size 1: free over F_p[alpha_i, beta_i]) or
    "truncated" (generators in bar-degrees 0 and -1, killed by alpha_i, free over beta_i).
    """

    variable: int
    bar: Tuple[int, int]
    kind: str
    generators: Tuple[Tuple[int, int], ...]


class ExtPiece(NamedTuple):
    series: BigradedSeries
    summands: List[ExtSummand]


def ext_of_barcode(bars: Barcode, weight_bound: int, bar_bound: int) -> ExtPiece:
    w, d = bars.step, bars.nilpotency
    series = BigradedSeries(weight_bound, bar_bound)
    summands: List[ExtSummand] = []
    for m, c in bars.bars:
        if c == d:
            series.add_term(-m, 0)
            summands.append(ExtSummand(bars.variable, (m, c), "free", ((-m, 0),)))
            continue
        j = 0
        while -m + j * d * w <= weight_bound and -2 * j >= -bar_bound:
            series.add_term(-m + j * d * w, -2 * j)
            series.add_term(-m + j * d * w + c * w, -2 * j - 1)
            j += 1
        if c == 1:
            summands.append(ExtSummand(bars.variable, (m, c), "augmentation", ((-m, 0),)))
        else:
            summands.append(ExtSummand(bars.variable, (m, c), "truncated", ((-m, 0), (-m + c * w, -1))))
    return ExtPiece(series, summands)


def periodic_series(j: int, p: int, weight_bound: int, bar_bound: int) -> BigradedSeries:
    """Ext of F_p over F_p[y_j]/(y_j^p): F_p[alpha_j, beta_j] with alpha_j exterior."""
    unit = Barcode(j, 2 * p**j, p, ((0, 1),))
    return ext_of_barcode(unit, weight_bound, bar_bound).series


def _variables_up_to(p: int, weight_bound: int, start: int = 0) -> List[int]:
    out = []
    j = start
    while 2 * p**j <= weight_bound:
        out.append(j)
        j += 1
    return out


def periodic_ext_dims(p: int, weight_bound: int, bar_bound: int, start: int = 0) -> BigradedSeries:
    """Ext of F_p over the variables from `start` on, as a product of periodic resolutions."""
    return product_series(
        (periodic_series(j, p, weight_bound, bar_bound) for j in _variables_up_to(p, weight_bound, start)),
        weight_bound,
        bar_bound,
    )


@dataclass
class ExtAssembly:
    u: int
    p: int
    series: BigradedSeries
    summands: List[ExtSummand] = field(default_factory=list)
    decomposition: Optional[NuiDecomposition] = None


def theoremC_assemble(
    u: int,
    p: int,
    weight_bound: int,
    bar_bound: int,
    decomposition: Optional[NuiDecomposition] = None,
) -> ExtAssembly:
    """Ext of B_u: sum over i of Ext(N_{u,i}) tensored with Ext(F_p) over the variables above i."""
    if decomposition is None:
        decomposition = compute_Nui(u, p)
    total = BigradedSeries(weight_bound, bar_bound)
    summands: List[ExtSummand] = []
    for i, bars in sorted(decomposition.pieces.items()):
        if bars.is_empty():
            continue
        piece = ext_of_barcode(bars, weight_bound, bar_bound)
        rest = periodic_ext_dims(p, weight_bound, bar_bound, start=i + 1)
        total = total + piece.series.convolve(rest)
        summands.extend(piece.summands)
    logger.debug(f"[theoremC_assemble] u={u} p={p} classes={total.total()}")
    return ExtAssembly(u, p, total, summands, decomposition)


# ---------------------------------------------------------------------------
# cobar oracle


def _divided_power_matrix(module: WeightedModule, k: int, m: int):
    """y^[k] out of weight m, written as prod (a_i!)^-1 y_i^{a_i} over base-p digits."""
    p = module.p
    digits = base_digits(k, p)
    scalar = 1
    exps = {}
    for i, a in enumerate(digits):
        if a:
            exps[i] = a
            scalar = scalar * pow(factorial(a), -1, p) % p
    return (module.monomial(exps, m) * scalar) % p


def _bar_basis(module: WeightedModule, b: int, t: int) -> List[Tuple[Tuple[int, ...], int, int]]:
    out = []
    for m in sorted(module.dims):
        gap = m - t
        if gap < 2 * b or gap % 2:
            continue
        if b == 0 and gap:
            continue
        parts = ((),) if b == 0 else tuple(compositions_into(gap // 2, b))
        for ks in parts:
            for x in range(module.dim(m)):
                out.append((ks, m, x))
    return out


def _bar_differential(module: WeightedModule, b: int, t: int, cache: Dict) -> SparseMatrix:
    p = module.p
    source = _bar_basis(module, b, t)
    target = _bar_basis(module, b - 1, t)
    index = {cell: r for r, cell in enumerate(target)}
    entries: Dict[Tuple[int, int], int] = {}

    def put(row: int, col: int, value: int) -> None:
        entries[(row, col)] = (entries.get((row, col), 0) + value) % p

    for col, (ks, m, x) in enumerate(source):
        for j in range(1, b):
            c = comb(ks[j - 1] + ks[j], ks[j - 1]) % p
            if c:
                merged = ks[: j - 1] + (ks[j - 1] + ks[j],) + ks[j + 1 :]
                put(index[(merged, m, x)], col, (-1) ** j * c)
        k = ks[-1]
        key = (k, m)
        if key not in cache:
            cache[key] = _divided_power_matrix(module, k, m)
        image = cache[key][:, x]
        sign = (-1) ** b
        for y, value in enumerate(image):
            if value:
                put(index[(ks[:-1], m - 2 * k, y)], col, sign * int(value))
    return SparseMatrix.from_entries(
        len(target), len(source), [(r, c, v) for (r, c), v in entries.items() if v]
    )


def _tor_at_weight(module: WeightedModule, t: int, bar_bound: int) -> Dict[int, int]:
    ring = CoefficientRing.prime_field(module.p)
    cache: Dict = {}
    sizes = {b: len(_bar_basis(module, b, t)) for b in range(bar_bound + 2)}
    ranks = {0: 0}
    for b in range(1, bar_bound + 2):
        if sizes[b] and sizes[b - 1]:
            ranks[b] = rank(_bar_differential(module, b, t, cache), ring)
        else:
            ranks[b] = 0
    return {b: sizes[b] - ranks[b] - ranks[b + 1] for b in range(bar_bound + 1)}


def _tor_job(args: Tuple[WeightedModule, int, int]) -> Tuple[int, Dict[int, int]]:
    module, t, bar_bound = args
    return t, _tor_at_weight(module, t, bar_bound)


def cobar_ext_dims(
    module: WeightedModule, weight_bound: int, bar_bound: int, threads: int = 1
) -> BigradedSeries:
    """Ext over the divided power algebra by brute force on the bar construction."""
    out = BigradedSeries(weight_bound, bar_bound)
    if module.is_zero():
        return out
    top = max(module.dims)
    jobs = [(module, t, bar_bound) for t in range(-weight_bound, top + 1)]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_tor_job, jobs))
    else:
        results = [_tor_job(job) for job in jobs]
    for t, dims in sorted(results):
        for b, dim in dims.items():
            if dim:
                out.add_term(-t, -b, dim)
    logger.debug(f"[cobar_ext_dims] W={weight_bound} B={bar_bound} classes={out.total()}")
    return out


# ---------------------------------------------------------------------------
# homology of configuration spaces from the splitting


@dataclass(frozen=True)
class MgSummand:
    u: int
    shift: int
    mult: int


def split_Mg(g: int) -> List[MgSummand]:
    if g < 0:
        raise ValueError("g must be nonnegative")
    return [MgSummand(r, r - g, comb(g, r) * 2 ** (g - r)) for r in range(g + 1)]


def rational_ext_Bu(u: int, weight_bound: int, bar_bound: int) -> BigradedSeries:
    """Ext of B_u over Q[y], using its splitting into truncated cyclic modules."""
    out = BigradedSeries(weight_bound, bar_bound)
    for k in range(u // 2 + 1):
        count = ell(u, k)
        out.add_term(2 * k, 0, count)
        out.add_term(2 * u + 2 - 2 * k, -1, count)
    return out


def ext_of_Mg(g: int, ring: CoefficientRing, weight_bound: int, bar_bound: int) -> BigradedSeries:
    total = BigradedSeries(weight_bound, bar_bound)
    for piece in split_Mg(g):
        if ring.kind == "q":
            ext = rational_ext_Bu(piece.u, weight_bound, bar_bound)
        else:
            ext = theoremC_assemble(piece.u, ring.p, weight_bound, bar_bound).series
        total = total + ext.shift(-piece.shift).scale(piece.mult)
    return total


def stabilisation_series(weight_bound: int, bar_bound: int) -> BigradedSeries:
    """F[epsilon] with epsilon in bidegree (1, -1)."""
    return polynomial_series(1, -1, weight_bound, bar_bound)


def surface_series(g: int, weight_bound: int, bar_bound: int) -> BigradedSeries:
    """Polynomials on H_1 of the surface: 2g variables in bidegree (2, 0)."""
    return polynomial_generators_series(2 * g, 2, weight_bound, bar_bound)


def structured_series(g: int, ring: CoefficientRing, max_n: int) -> BigradedSeries:
    if ring.kind == "z":
        raise ValueError("structured pipeline works over a field")
    if ring.kind == "fp" and ring.p == 2:
        raise ValueError("structured pipeline needs an odd prime; use the cellular pipeline for p = 2")
    W = B = max_n
    return (
        ext_of_Mg(g, ring, W, B)
        .convolve(stabilisation_series(W, B))
        .convolve(surface_series(g, W, B))
    )


def theoremB_betti(g: int, ring: CoefficientRing, max_n: int) -> HomologyTable:
    """Bigraded Betti numbers of C_n(surface) for n <= max_n, with (n, i) = (weight, weight + bar-degree)."""
    series = structured_series(g, ring, max_n)
    table = HomologyTable(ring)
    for n in range(max_n + 1):
        table.update(n, {i: HomologyGroup(series[(n, i - n)]) for i in range(n + 1)})
    return table


# ---------------------------------------------------------------------------
# reports


@dataclass
class FakeBasechangeReport:
    g: int
    p: int
    differences: List[Tuple[int, int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.differences


def fake_basechange(g: int, p: int, weight_bound: int, bar_bound: int) -> FakeBasechangeReport:
    """For g <= p - 2: Ext(M_g) over F_p equals its rational counterpart times F_p[beta_0, alpha_1, beta_1, ...]."""
    if g > p - 2:
        raise ValueError(f"needs g <= p - 2, got g={g} p={p}")
    W, B = weight_bound, bar_bound
    modular = ext_of_Mg(g, CoefficientRing.prime_field(p), W, B)
    factors = [polynomial_series(2 * p, -2, W, B)]
    for j in _variables_up_to(p, W, start=1):
        factors.append(exterior_series(2 * p**j, -1, W, B))
        factors.append(polynomial_series(2 * p ** (j + 1), -2, W, B))
    predicted = ext_of_Mg(g, CoefficientRing.rationals(), W, B).convolve(product_series(factors, W, B))
    return FakeBasechangeReport(g, p, modular.differences(predicted))


@dataclass
class GenusPrimeReport:
    g: int
    p: int
    level: int
    vanishing: Dict[int, bool] = field(default_factory=dict)
    short_bars: Dict[int, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.vanishing.values()) and all(self.short_bars.values())


def genus_prime_report(g: int, p: int) -> GenusPrimeReport:
    """With g < p^l, the pieces N_{u,i} of every u <= g vanish for i > l and have size-1 bars at i = l."""
    level = 0
    while g >= p**level:
        level += 1
    report = GenusPrimeReport(g, p, level)
    for u in range(g + 1):
        pieces = compute_Nui(u, p).nonempty()
        report.vanishing[u] = all(i <= level for i in pieces)
        top = pieces.get(level)
        report.short_bars[u] = top is None or all(c == 1 for _, c in top.bars)
    return report


@dataclass
class GenerationReport:
    u: int
    p: int
    generators: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(star in (0, -1) for _, star in self.generators)


def generation_report(u: int, p: int, weight_bound: int, bar_bound: int) -> GenerationReport:
    """Every module generator of Ext(B_u) sits in bar-degree 0 or -1."""
    assembly = theoremC_assemble(u, p, weight_bound, bar_bound)
    gens = sorted(g for s in assembly.summands for g in s.generators)
    return GenerationReport(u, p, gens)


def ext_of_Bu(
    u: int, p: int, weight_bound: int, bar_bound: int, threads: int = 1
) -> Tuple[BigradedSeries, BigradedSeries]:
    """(assembled series, cobar series) for B_u."""
    assembled = theoremC_assemble(u, p, weight_bound, bar_bound).series
    oracle = cobar_ext_dims(build_Bu(u, p), weight_bound, bar_bound, threads)
    return assembled, oracle

