"""Symmetric-group characters via the recursive border-strip rule.

Characters enter only through group-averaged projectors on small tensor
spaces, so plain memoized recursion over cycle types is plenty fast.
"""

from __future__ import annotations

from functools import lru_cache


def _beta_set(parts: tuple[int, ...]) -> list[int]:
    # first-column hook lengths: strictly decreasing beta_i = parts_i + (r-1-i)
    r = len(parts)
    return [parts[i] + (r - 1 - i) for i in range(r)]


def _shape_from_beta(beta: list[int]) -> tuple[int, ...]:
    beta = sorted(beta, reverse=True)
    r = len(beta)
    parts = [beta[i] - (r - 1 - i) for i in range(r)]
    return tuple(p for p in parts if p > 0)


@lru_cache(maxsize=1 << 16)
def character(shape: tuple[int, ...], cycle_type: tuple[int, ...]) -> int:
    """Character of the irrep labeled ``shape`` on the class ``cycle_type``.

    Border strips of each cycle length are removed on the beta-set (abacus):
    removing a strip of length k moves one bead from b to b-k, with sign
    (-1)^(number of beads jumped over).
    """
    if sum(shape) != sum(cycle_type):
        raise ValueError("shape and cycle type must have equal size")
    if not cycle_type:
        return 1
    k = cycle_type[0]
    rest = cycle_type[1:]
    beta = _beta_set(shape)
    occupied = set(beta)
    total = 0
    for b in beta:
        target = b - k
        if target < 0 or target in occupied:
            continue
        jumped = sum(1 for c in beta if target < c < b)
        new_beta = [target if c == b else c for c in beta]
        total += (-1) ** jumped * character(_shape_from_beta(new_beta), rest)
    return total


def cycle_type(perm: tuple[int, ...]) -> tuple[int, ...]:
    """Cycle type of a 0-based permutation given as a tuple of images."""
    n = len(perm)
    seen = [False] * n
    lengths = []
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))
