from functools import lru_cache
from itertools import combinations
from typing import Iterator, List, Tuple


@lru_cache(maxsize=None)
def compositions(n: int) -> Tuple[Tuple[int, ...], ...]:
    """All compositions of n into positive parts, lexicographic order."""
    if n < 0:
        raise ValueError("n должно быть неотрицательным")
    if n == 0:
        return ((),)
    result: List[Tuple[int, ...]] = []
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            result.append((first,) + rest)
    return tuple(result)


def compositions_into(n: int, parts: int) -> Iterator[Tuple[int, ...]]:
    for comp in compositions(n):
        if len(comp) == parts:
            yield comp


@lru_cache(maxsize=None)
def weak_compositions(n: int, parts: int) -> Tuple[Tuple[int, ...], ...]:
    """Vectors of `parts` nonnegative integers summing to n, lexicographic order."""
    if n < 0 or parts < 0:
        raise ValueError("n и parts должны быть неотрицательными")
    if parts == 0:
        return ((),) if n == 0 else ()
    if parts == 1:
        return ((n,),)
    result: List[Tuple[int, ...]] = []
    for first in range(n + 1):
        for rest in weak_compositions(n - first, parts - 1):
            result.append((first,) + rest)
    return tuple(result)


def subsets_by_size(u: int, k: int) -> List[Tuple[int, ...]]:
    """k-subsets of {1..u} as sorted tuples, lexicographic order."""
    return list(combinations(range(1, u + 1), k))


def base_digits(k: int, base: int) -> List[int]:
    digits: List[int] = []
    while k:
        k, r = divmod(k, base)
        digits.append(r)
    return digits
