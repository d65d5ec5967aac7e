from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from ..exactla import (
    colspace_mod_p,
    extend_basis_mod_p,
    inverse_mod_p,
    nullspace_mod_p,
    rank_mod_p,
    solve_mod_p,
)
from .algebra import ModuleStructureError, TamenessViolation, WeightedModule
from .barcode import adapted_generators, barcode
from .modules import dualize

logger = logging.getLogger(__name__)


@dataclass
class TameReport:
    u: int
    palindromic: Dict[int, bool] = field(default_factory=dict)
    narrow_window: Dict[int, bool] = field(default_factory=dict)
    freeness: Dict[int, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.palindromic.values()) and all(self.narrow_window.values()) and all(self.freeness.values())

    def failures(self) -> List[str]:
        out = [f"y_{i} barcode is not palindromic around {-self.u}" for i, ok in self.palindromic.items() if not ok]
        out += [f"y_{i} has a short bar outside the barycentre window" for i, ok in self.narrow_window.items() if not ok]
        out += [f"no free cover in relative weights >= {k}" for k, ok in self.freeness.items() if not ok]
        return out


def _empty(rows: int) -> np.ndarray:
    return np.zeros((rows, 0), dtype=np.int64)


def _augmentation_image(module: WeightedModule, m: int, variables: List[int]) -> np.ndarray:
    """Columns spanning A_+M in weight m."""
    blocks = [_empty(module.dim(m))]
    for j in variables:
        source = m + module.algebra.step(j)
        if module.dim(source):
            blocks.append(module.matrix(j, source))
    return np.concatenate(blocks, axis=1)


def _free_words(
    module: WeightedModule, variables: List[int], floor: int, top: int
) -> Iterator[Tuple[Dict[int, int], int]]:
    """Monomials y^a with every y_j^{a_j} nonzero in A, landing in weight >= floor from `top`."""
    alg = module.algebra

    def walk(pos: int, weight: int, exps: Dict[int, int]) -> Iterator[Tuple[Dict[int, int], int]]:
        if pos == len(variables):
            yield dict(exps), weight
            return
        j = variables[pos]
        step = alg.step(j)
        for a in range(alg.nilpotency(j)):
            target = weight - a * step
            if target < floor:
                break
            if a:
                exps[j] = a
            yield from walk(pos + 1, target, exps)
            exps.pop(j, None)

    yield from walk(0, top, {})


def _free_cover_ok(module: WeightedModule, u: int, k: int) -> bool:
    p = module.p
    alg = module.algebra
    top_relative = max(module.dims) + u
    variables = alg.variables_within(top_relative + k, module.start)
    columns: Dict[int, List[np.ndarray]] = {}
    for m in module.weights:
        if m + u < k:
            continue
        image = _augmentation_image(module, m, variables)
        gens, _ = extend_basis_mod_p(image, np.eye(module.dim(m), dtype=np.int64), p)
        for col in range(gens.shape[1]):
            g = gens[:, col]
            for exps, target in _free_words(module, variables, -k - u, m):
                columns.setdefault(target, []).append((module.monomial(exps, m) @ g) % p)
    for t, cols in columns.items():
        dim = module.dim(t)
        if len(cols) > dim:
            return False
        if dim and rank_mod_p(np.stack(cols, axis=1), p) != len(cols):
            return False
    for t in module.weights:
        if t + u >= k and len(columns.get(t, ())) != module.dim(t):
            return False
    return True


def check_tame(module: WeightedModule, u: int) -> TameReport:
    """Necessary barcode conditions per variable plus the free-cover condition."""
    report = TameReport(u)
    if module.is_zero():
        return report
    module.validate()
    alg = module.algebra
    for i in module.active_variables():
        bars = barcode(module, i)
        half = alg.D(i)
        centres = Counter((bars.barycentre(b), b[1]) for b in bars.bars)
        mirrored = Counter({(-2 * u - c, size): n for (c, size), n in centres.items()})
        report.palindromic[i] = centres == mirrored
        report.narrow_window[i] = all(
            -u - half < bars.barycentre(b) < -u + half for b in bars.narrow_part().bars
        )
    top_relative = max(module.dims) + u
    for k in range(max(top_relative, 0) + 1):
        report.freeness[k] = _free_cover_ok(module, u, k)
    logger.debug(f"[check_tame] u={u} ok={report.ok}")
    return report


def narrow_window(module: WeightedModule, u: int, i: int) -> Tuple[int, int]:
    """Open weight interval that a narrow piece at variable i must lie in."""
    alg = module.algebra
    width = alg.D(i + 1) - alg.D(i)
    return -u - width, -u + width


def is_narrow(module: WeightedModule, u: int, i: int) -> bool:
    low, high = narrow_window(module, u, i)
    return all(low < m < high for m in module.dims)


# ---------------------------------------------------------------------------
# free / narrow splitting


@dataclass(frozen=True)
class NarrowGenerator:
    weight: int
    size: int
    vector: np.ndarray


def _perturb(module: WeightedModule, i: int, weight: int, size: int, nu: np.ndarray) -> np.ndarray:
    """nu minus a y_i-multiple so that every variable above i kills the result."""
    p = module.p
    alg = module.algebra
    d = alg.nilpotency(i)
    higher = [h for h in module.active_variables() if h > i]
    w = np.zeros_like(nu)
    for pos, h in enumerate(higher):
        z = module.apply(h, weight, (nu - w) % p)
        if not z.any():
            continue
        lifting = {i: d - size}
        for k in higher[:pos]:
            lifting[k] = alg.nilpotency(k) - 1
        drop = sum(a * alg.step(j) for j, a in lifting.items())
        source = weight + drop
        full = dict(lifting)
        full[h] = 1
        solution = solve_mod_p(module.monomial(full, source), z, p) if module.dim(source) else None
        if solution is None:
            raise TamenessViolation(
                f"y_{h} of the narrow generator at weight {weight} is not divisible as required"
            )
        w = (w + module.monomial(lifting, source) @ solution) % p
    corrected = (nu - w) % p
    for h in higher:
        if module.apply(h, weight, corrected).any():
            raise TamenessViolation(f"y_{h} does not kill the corrected generator at weight {weight}")
    return corrected


def narrow_generators(module: WeightedModule, i: int) -> List[NarrowGenerator]:
    d = module.algebra.nilpotency(i)
    out = []
    for gen in adapted_generators(module, i):
        if gen.size < d:
            out.append(NarrowGenerator(gen.weight, gen.size, _perturb(module, i, gen.weight, gen.size, gen.vector)))
    return out


def _narrow_span(module: WeightedModule, i: int, gens: List[NarrowGenerator]) -> Dict[int, np.ndarray]:
    p = module.p
    step = module.algebra.step(i)
    cols: Dict[int, List[np.ndarray]] = {}
    for gen in gens:
        vec = gen.vector
        m = gen.weight
        for _ in range(gen.size):
            cols.setdefault(m, []).append(vec)
            vec = module.apply(i, m, vec)
            m -= step
    return {m: np.stack(vs, axis=1) % p for m, vs in cols.items()}


@dataclass(frozen=True)
class FreeNarrowSplit:
    free: WeightedModule
    narrow: WeightedModule
    basis_free: Dict[int, np.ndarray]
    basis_narrow: Dict[int, np.ndarray]
    block_diagonal: bool

    def __iter__(self):
        return iter((self.free, self.narrow))


def _complements(
    module: WeightedModule, i: int, span: Dict[int, np.ndarray], dual_span: Dict[int, np.ndarray]
) -> Dict[int, np.ndarray]:
    p = module.p
    out: Dict[int, np.ndarray] = {}
    for t in module.weights:
        dim = module.dim(t)
        narrow = span.get(t, _empty(dim))
        rows = dual_span.get(-t)
        annihilator = nullspace_mod_p(rows.T, p) if rows is not None else np.eye(dim, dtype=np.int64)
        if annihilator.shape[1] + narrow.shape[1] == dim and rank_mod_p(
            np.concatenate([annihilator, narrow], axis=1), p
        ) == dim:
            out[t] = annihilator % p
            continue
        logger.debug(f"[free_narrow] annihilator complement fails at weight {t}, completing the basis")
        out[t], _ = extend_basis_mod_p(narrow, np.eye(dim, dtype=np.int64), p)
    return out


def free_narrow(
    module: WeightedModule, u: int, i: Optional[int] = None, check: bool = True
) -> FreeNarrowSplit:
    """Split a u-tame module as F + N with F free over y_i and N narrow."""
    if i is None:
        i = module.start
    if check:
        report = check_tame(module, u)
        if not report.ok:
            raise TamenessViolation("; ".join(report.failures()))
    p = module.p
    alg = module.algebra
    gens = narrow_generators(module, i)
    span = _narrow_span(module, i, gens)
    for t, cols in span.items():
        if rank_mod_p(cols, p) != cols.shape[1]:
            raise ModuleStructureError(f"corrected narrow generators are dependent at weight {t}")
    dual = dualize(module)
    dual_span = _narrow_span(dual, i, narrow_generators(dual, i))
    complement = _complements(module, i, span, dual_span)

    bases = {}
    inverses = {}
    for t in module.weights:
        dim = module.dim(t)
        bases[t] = np.concatenate([complement[t], span.get(t, _empty(dim))], axis=1)
        inverses[t] = inverse_mod_p(bases[t], p)

    free_mult: Dict[Tuple[int, int], np.ndarray] = {}
    narrow_mult: Dict[Tuple[int, int], np.ndarray] = {}
    block_diagonal = True
    variables = sorted({k for k, _ in module.mult})
    for k in variables:
        step = alg.step(k)
        for t in module.weights:
            target = t - step
            if not module.dim(target):
                continue
            conj = (inverses[target] @ ((module.matrix(k, t) @ bases[t]) % p)) % p
            c_src, c_tgt = complement[t].shape[1], complement[target].shape[1]
            if conj[:c_tgt, c_src:].any():
                raise ModuleStructureError(f"narrow span is not stable under y_{k} at weight {t}")
            if conj[c_tgt:, :c_src].any():
                block_diagonal = False
            free_mult[(k, t)] = conj[:c_tgt, :c_src]
            narrow_mult[(k, t)] = conj[c_tgt:, c_src:]
    free = WeightedModule(alg, p, {t: c.shape[1] for t, c in complement.items()}, free_mult, i)
    narrow = WeightedModule(alg, p, {t: s.shape[1] for t, s in span.items()}, narrow_mult, i)
    logger.debug(
        f"[free_narrow] u={u} i={i} free={free.total_dim} narrow={narrow.total_dim} "
        f"block_diagonal={block_diagonal}"
    )
    return FreeNarrowSplit(free, narrow, complement, span, block_diagonal)


def quotient_mod_variable(module: WeightedModule, i: int) -> WeightedModule:
    """M / y_i M with the induced action of the variables above i."""
    bars = barcode(module, i)
    if not bars.is_free():
        raise ModuleStructureError(f"module is not free over y_{i}: bars {bars.bars}")
    p = module.p
    alg = module.algebra
    step = alg.step(i)
    quotient_basis: Dict[int, np.ndarray] = {}
    inverses: Dict[int, np.ndarray] = {}
    for t in module.weights:
        dim = module.dim(t)
        source = t + step
        image = colspace_mod_p(module.matrix(i, source), p) if module.dim(source) else _empty(dim)
        q, _ = extend_basis_mod_p(image, np.eye(dim, dtype=np.int64), p)
        quotient_basis[t] = q
        inverses[t] = inverse_mod_p(np.concatenate([q, image], axis=1), p)
    mult: Dict[Tuple[int, int], np.ndarray] = {}
    for k in sorted({k for k, _ in module.mult if k > i}):
        for t in module.weights:
            target = t - alg.step(k)
            if not module.dim(target):
                continue
            coords = (inverses[target] @ ((module.matrix(k, t) @ quotient_basis[t]) % p)) % p
            mult[(k, t)] = coords[: quotient_basis[target].shape[1], :]
    dims = {t: q.shape[1] for t, q in quotient_basis.items()}
    return WeightedModule(alg, p, dims, mult, i + 1)
