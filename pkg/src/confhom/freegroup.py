from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Run = Tuple[int, int]
Index = Tuple[int, ...]


class RankMismatch(ValueError):
    pass


class WordParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Word:
    """Freely reduced word, stored as runs (generator, nonzero exponent)."""

    rank: int
    runs: Tuple[Run, ...] = ()

    @property
    def letters(self) -> Tuple[Run, ...]:
        out: List[Run] = []
        for gen, exp in self.runs:
            sign = 1 if exp > 0 else -1
            out.extend([(gen, sign)] * abs(exp))
        return tuple(out)

    @property
    def length(self) -> int:
        return sum(abs(exp) for _, exp in self.runs)

    def is_identity(self) -> bool:
        return not self.runs

    def __mul__(self, other: "Word") -> "Word":
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} != {other.rank}")
        return reduce(self.runs + other.runs, self.rank)

    def inverse(self) -> "Word":
        return Word(self.rank, tuple((gen, -exp) for gen, exp in reversed(self.runs)))

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        out = identity(self.rank)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __str__(self) -> str:
        if not self.runs:
            return "1"
        parts = []
        for gen, exp in self.runs:
            token = f"g{gen}" if exp > 0 else f"G{gen}"
            parts.append(token if abs(exp) == 1 else f"{token}^{abs(exp)}")
        return " ".join(parts)


def _check_generator(gen: int, rank: int) -> None:
    if not 1 <= gen <= rank:
        raise ValueError(f"generator g{gen} outside 1..{rank}")


def reduce(letters: Iterable[Run], rank: int) -> Word:
    """Free reduction of (generator, exponent) pairs; exponents may be any integer."""
    stack: List[List[int]] = []
    for gen, exp in letters:
        _check_generator(gen, rank)
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            stack[-1][1] += exp
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([gen, exp])
    return Word(rank, tuple((gen, exp) for gen, exp in stack))


def identity(rank: int) -> Word:
    return Word(rank, ())


def generator(i: int, rank: int, exp: int = 1) -> Word:
    _check_generator(i, rank)
    return Word(rank, ((i, exp),)) if exp else identity(rank)


def commutator(a: Word, b: Word) -> Word:
    return a * b * a.inverse() * b.inverse()


def zeta(g: int) -> Word:
    """Boundary word [g1, g2][g3, g4]...[g_{2g-1}, g_{2g}]."""
    rank = 2 * g
    out = identity(rank)
    for i in range(1, g + 1):
        out = out * commutator(generator(2 * i - 1, rank), generator(2 * i, rank))
    return out


def cyclic_reduce(w: Word) -> Tuple[Word, Word]:
    """Return (u, c) with w = u c u^-1 and c cyclically reduced."""
    letters = list(w.letters)
    head: List[Run] = []
    while len(letters) >= 2 and letters[0] == (letters[-1][0], -letters[-1][1]):
        head.append(letters.pop(0))
        letters.pop()
    return reduce(head, w.rank), reduce(letters, w.rank)


def is_conjugate(a: Word, b: Word) -> bool:
    if a.rank != b.rank:
        return False
    _, ca = cyclic_reduce(a)
    _, cb = cyclic_reduce(b)
    la, lb = ca.letters, cb.letters
    if len(la) != len(lb):
        return False
    if not la:
        return True
    doubled = la + la
    return any(doubled[i : i + len(lb)] == lb for i in range(len(la)))


@dataclass(frozen=True)
class FreeGroupMap:
    source_rank: int
    target_rank: int
    images: Tuple[Word, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.source_rank:
            raise RankMismatch(
                f"{len(self.images)} images for a source of rank {self.source_rank}"
            )
        for w in self.images:
            if w.rank != self.target_rank:
                raise RankMismatch(f"image of rank {w.rank}, expected {self.target_rank}")

    @classmethod
    def from_assignments(
        cls, rank: int, assignments: Mapping[int, Word], target_rank: Optional[int] = None
    ) -> "FreeGroupMap":
        """Endomorphism (or map to target_rank) fixing unlisted generators."""
        target = rank if target_rank is None else target_rank
        images = []
        for i in range(1, rank + 1):
            if i in assignments:
                images.append(assignments[i])
            else:
                images.append(generator(i, target))
        return cls(rank, target, tuple(images))

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def __mul__(self, other: "FreeGroupMap") -> "FreeGroupMap":
        return compose(self, other)

    def is_identity(self) -> bool:
        return self.source_rank == self.target_rank and all(
            img == generator(i + 1, self.target_rank) for i, img in enumerate(self.images)
        )

    def __str__(self) -> str:
        return "; ".join(f"g{i + 1} -> {img}" for i, img in enumerate(self.images))


def identity_map(rank: int) -> FreeGroupMap:
    return FreeGroupMap(rank, rank, tuple(generator(i, rank) for i in range(1, rank + 1)))


def apply(phi: FreeGroupMap, w: Word) -> Word:
    if w.rank != phi.source_rank:
        raise RankMismatch(f"word of rank {w.rank}, map source rank {phi.source_rank}")
    out: List[Run] = []
    for gen, exp in w.runs:
        image = phi.images[gen - 1]
        runs = image.runs if exp > 0 else image.inverse().runs
        out.extend(runs * abs(exp))
    return reduce(out, phi.target_rank)


def compose(phi: FreeGroupMap, psi: FreeGroupMap) -> FreeGroupMap:
    """phi after psi."""
    if psi.target_rank != phi.source_rank:
        raise RankMismatch(f"cannot compose rank {phi.source_rank} after {psi.target_rank}")
    return FreeGroupMap(
        psi.source_rank, phi.target_rank, tuple(apply(phi, img) for img in psi.images)
    )


# ---------------------------------------------------------------------------
# exterior classes


def _merge_sign(s: Index, t: Index) -> int:
    inversions = sum(1 for a in s for b in t if a > b)
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class ExteriorClass:
    degree: int
    terms: Tuple[Tuple[Index, int], ...] = field(default=())

    @classmethod
    def from_dict(cls, degree: int, data: Mapping[Index, int]) -> "ExteriorClass":
        items = []
        for idx, coeff in data.items():
            if len(idx) != degree or any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index {idx} is not a strictly increasing {degree}-tuple")
            if coeff:
                items.append((tuple(idx), coeff))
        return cls(degree, tuple(sorted(items)))

    @classmethod
    def zero(cls, degree: int) -> "ExteriorClass":
        return cls(degree, ())

    @classmethod
    def unit(cls) -> "ExteriorClass":
        return cls(0, (((), 1),))

    @classmethod
    def basis(cls, i: int, coeff: int = 1) -> "ExteriorClass":
        return cls.from_dict(1, {(i,): coeff})

    def as_dict(self) -> Dict[Index, int]:
        return dict(self.terms)

    def coefficient(self, idx: Index) -> int:
        return self.as_dict().get(tuple(idx), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ExteriorClass") -> "ExteriorClass":
        if self.degree != other.degree:
            raise ValueError(f"degree {self.degree} + degree {other.degree}")
        acc = self.as_dict()
        for idx, coeff in other.terms:
            acc[idx] = acc.get(idx, 0) + coeff
        return ExteriorClass.from_dict(self.degree, acc)

    def __neg__(self) -> "ExteriorClass":
        return self.scale(-1)

    def __sub__(self, other: "ExteriorClass") -> "ExteriorClass":
        return self + (-other)

    def scale(self, k: int) -> "ExteriorClass":
        return ExteriorClass.from_dict(self.degree, {idx: k * c for idx, c in self.terms})

    def wedge(self, other: "ExteriorClass") -> "ExteriorClass":
        acc: Dict[Index, int] = {}
        for s, a in self.terms:
            for t, b in other.terms:
                if set(s) & set(t):
                    continue
                merged = tuple(sorted(s + t))
                acc[merged] = acc.get(merged, 0) + _merge_sign(s, t) * a * b
        return ExteriorClass.from_dict(self.degree + other.degree, acc)

    def reduce_mod(self, p: int) -> "ExteriorClass":
        return ExteriorClass.from_dict(self.degree, {idx: c % p for idx, c in self.terms})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx, coeff in self.terms:
            mono = "^".join(f"[g{i}]" for i in idx) or "1"
            parts.append(mono if coeff == 1 else f"{coeff}*{mono}")
        return " + ".join(parts)


def abelianize(w: Word) -> ExteriorClass:
    acc: Dict[Index, int] = {}
    for gen, exp in w.runs:
        acc[(gen,)] = acc.get((gen,), 0) + exp
    return ExteriorClass.from_dict(1, acc)


def content2(w: Word) -> ExteriorClass:
    """Quadratic part of the content, by one left-to-right scan over runs."""
    prefix: Dict[int, int] = {}
    acc: Dict[Index, int] = {}
    for gen, exp in w.runs:
        for j, n in prefix.items():
            if j == gen or not n:
                continue
            idx, sign = ((j, gen), 1) if j < gen else ((gen, j), -1)
            acc[idx] = acc.get(idx, 0) + sign * n * exp
        prefix[gen] = prefix.get(gen, 0) + exp
    return ExteriorClass.from_dict(2, acc)


def content_component(w: Word, i: int) -> ExteriorClass:
    """Degree-i part of prod (1 + e[gamma]) over the runs of w, truncated at i."""
    if i < 0 or i > w.rank:
        raise ValueError(f"degree {i} outside 0..{w.rank}")
    parts: List[Dict[Index, int]] = [{(): 1}] + [{} for _ in range(i)]
    for gen, exp in w.runs:
        for d in range(i, 0, -1):
            for idx, coeff in parts[d - 1].items():
                if gen in idx:
                    continue
                merged = tuple(sorted(idx + (gen,)))
                sign = _merge_sign(idx, (gen,))
                parts[d][merged] = parts[d].get(merged, 0) + sign * coeff * exp
    return ExteriorClass.from_dict(i, parts[i])


def linear_image(phi: FreeGroupMap, cls: ExteriorClass) -> ExteriorClass:
    """Action of the abelianization of phi on an exterior class."""
    out = ExteriorClass.zero(cls.degree)
    images = [abelianize(img) for img in phi.images]
    for idx, coeff in cls.terms:
        term = ExteriorClass.unit()
        for j in idx:
            term = term.wedge(images[j - 1])
        out = out + term.scale(coeff)
    return out


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:([gG])(\d+)(?:\^(-?\d+))?|(1)(?![\d^])|([*.·]))")


def parse_word(text: str, rank: int, line: int = 1, column_offset: int = 0) -> Word:
    """Parse `g1 g2 G1^2 ...`; `1` is the identity."""
    if not text.strip():
        raise WordParseError("empty word (use `1` for the identity)", line, column_offset + 1)
    pos = 0
    runs: List[Run] = []
    stripped_end = len(text.rstrip())
    while pos < stripped_end:
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            raise WordParseError(
                f"unexpected {text[pos:].strip()[:10]!r}", line, column_offset + pos + 1
            )
        letter, index, power, one, _sep = match.groups()
        if letter:
            gen = int(index)
            if not 1 <= gen <= rank:
                raise WordParseError(
                    f"generator {letter}{gen} outside 1..{rank}",
                    line,
                    column_offset + match.start(1) + 1,
                )
            exp = int(power) if power is not None else 1
            runs.append((gen, exp if letter == "g" else -exp))
        pos = match.end()
    return reduce(runs, rank)


def parse_assignments(
    text: str, rank: int, line: int = 1, column_offset: int = 0
) -> FreeGroupMap:
    """Parse `g1 -> w; g2 -> w`; unlisted generators are fixed."""
    assignments: Dict[int, Word] = {}
    offset = 0
    for chunk in text.split(";"):
        start = column_offset + offset
        offset += len(chunk) + 1
        if not chunk.strip():
            continue
        if "->" not in chunk:
            raise WordParseError("expected `gN -> word`", line, start + 1)
        lhs, rhs = chunk.split("->", 1)
        head = re.fullmatch(r"\s*g(\d+)\s*", lhs)
        if head is None:
            raise WordParseError(f"bad left-hand side {lhs.strip()!r}", line, start + 1)
        gen = int(head.group(1))
        if not 1 <= gen <= rank:
            raise WordParseError(f"generator g{gen} outside 1..{rank}", line, start + 1)
        if gen in assignments:
            raise WordParseError(f"g{gen} assigned twice", line, start + 1)
        assignments[gen] = parse_word(rhs, rank, line, start + len(lhs) + 2)
    return FreeGroupMap.from_assignments(rank, assignments)
