"""Lexicographic ranking of Bierwirth vectors (multiset permutations).

Symbols are job indices ordered 0 < 1 < ... < n-1. The rank of a vector is
the number of vectors that precede it lexicographically; it is found by
summing, position by position, the sizes of the blocks of vectors that share
the prefix so far but continue with a smaller job index. All arithmetic is
exact Python integers.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

from .instance import JsspInstance, total_vector_count
from .schedule import check_vector


class RankRangeError(ValueError):
    pass


@lru_cache(maxsize=None)
def _factorial(k: int) -> int:
    return math.factorial(k)


def multinomial(remaining: int, counts: Sequence[int]) -> int:
    """``remaining! / prod(counts[k]!)``; requires ``sum(counts) == remaining``."""
    if sum(counts) != remaining:
        raise ValueError(f"counts {list(counts)} do not sum to {remaining}")
    den = 1
    for c in counts:
        if c < 0:
            raise ValueError(f"negative count in {list(counts)}")
        den *= _factorial(c)
    return _factorial(remaining) // den


def _blocks(counts: list[int], remaining_total: int, rem: int):
    """Yield ``(j, size)`` for every job j still available at this position.

    ``remaining_total`` is the number of arrangements of the ``rem`` symbols
    left; fixing the next symbol to j leaves
    (rem-1)! / (c_0! ... (c_j - 1)! ... c_{n-1}!) = remaining_total * c_j / rem
    of them, an exact integer division.
    """
    for j, c in enumerate(counts):
        if c:
            yield j, remaining_total * c // rem


def rank_of(inst: JsspInstance, v: Sequence[int], trace: list | None = None) -> int:
    """Lexicographic rank of ``v``.

    If ``trace`` is a list, the accumulated rank after each position is
    appended to it.
    """
    check_vector(inst, v)
    counts = inst.multiplicities()
    length = len(v)
    arrangements = total_vector_count(inst)
    r = 0
    for i, val in enumerate(v):
        for j, size in _blocks(counts, arrangements, length - i):
            if j == val:
                arrangements = size
                break
            r += size
        counts[val] -= 1
        if trace is not None:
            trace.append(r)
    return r


def unrank(inst: JsspInstance, r: int, trace: list | None = None) -> list[int]:
    """Inverse of :func:`rank_of`.

    If ``trace`` is a list, the residual rank after each position is
    appended to it.
    """
    arrangements = total_vector_count(inst)
    if not 0 <= r < arrangements:
        raise RankRangeError(f"rank {r} outside [0, {arrangements})")
    counts = inst.multiplicities()
    length = inst.n_operations
    v = []
    for i in range(length):
        for j, size in _blocks(counts, arrangements, length - i):
            if r < size:
                break
            r -= size
        arrangements = size
        v.append(j)
        counts[j] -= 1
        if trace is not None:
            trace.append(r)
    return v


def qubit_count(inst: JsspInstance) -> int:
    """Register width able to address every rank: ceil(log2(N)), at least 1."""
    total = total_vector_count(inst)
    return max(1, (total - 1).bit_length())


def bits_value(bits: Sequence[int]) -> int:
    """Little-endian bit weights: ``bits[j]`` carries ``2**j``."""
    value = 0
    for j, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"bit {j} is {b!r}, expected 0 or 1")
        value |= int(b) << j
    return value


def bits_to_rank(bits: Sequence[int], inst: JsspInstance) -> int:
    """Rank addressed by a measured bitstring.

    Values at or above the vector count wrap around modulo the count, so
    every outcome maps to a feasible vector.
    """
    return bits_value(bits) % total_vector_count(inst)
