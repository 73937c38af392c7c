"""Integer partitions (Young frames) and exact irrep combinatorics.

Frames with height at most ``d`` label the blocks that the symmetric group
and the diagonal unitary action carve out of ``(C^d)^{(x)n}``.  Everything
here is exact integer arithmetic; companion ``ln_*`` accessors return
logarithms for sums whose terms overflow any fixed-width float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Optional

#: Capacity of the memoization caches for dimensions/multiplicities.  Sweeps
#: re-query the same frames heavily; lru_cache is thread-safe.
CACHE_CAPACITY = 1 << 16


@dataclass(frozen=True)
class Partition:
    """A Young frame: weakly decreasing positive parts, possibly empty."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        p = tuple(int(x) for x in self.parts)
        object.__setattr__(self, "parts", p)
        if any(x <= 0 for x in p):
            raise ValueError(f"partition parts must be positive: {p}")
        if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing: {p}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def height(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.parts)

    def __repr__(self) -> str:
        return f"Partition({self.parts!r})"


class IrrepDims(NamedTuple):
    """Exact dimension / multiplicity pair for one frame at local dimension d."""

    dim_s: int
    mult: int


def as_partition(p) -> Partition:
    """Coerce a Partition, tuple or list of parts into a Partition."""
    if isinstance(p, Partition):
        return p
    return Partition(tuple(p))


def partitions_bounded(n: int, max_height: int) -> list[Partition]:
    """All partitions of ``n`` with height <= ``max_height``, descending lexicographic.

    ``n = 0`` yields the singleton list containing the empty partition.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if max_height < 1:
        raise ValueError("max_height must be positive")
    out: list[Partition] = []

    def rec(remaining: int, largest: int, acc: list[int]):
        if remaining == 0:
            out.append(Partition(tuple(acc)))
            return
        if len(acc) == max_height:
            return
        for part in range(min(remaining, largest), 0, -1):
            acc.append(part)
            rec(remaining - part, part, acc)
            acc.pop()

    rec(n, n if n > 0 else 1, [])
    return out


def _column_heights(parts: tuple[int, ...]) -> list[int]:
    cols = [0] * (parts[0] if parts else 0)
    for row in parts:
        for j in range(row):
            cols[j] += 1
    return cols


@lru_cache(maxsize=CACHE_CAPACITY)
def _hook_product(parts: tuple[int, ...]) -> int:
    cols = _column_heights(parts)
    prod = 1
    for i, row in enumerate(parts):
        for j in range(row):
            prod *= (row - j) + (cols[j] - i) - 1
    return prod


@lru_cache(maxsize=CACHE_CAPACITY)
def _dim_irrep(parts: tuple[int, ...]) -> int:
    return math.factorial(sum(parts)) // _hook_product(parts)


@lru_cache(maxsize=CACHE_CAPACITY)
def _mult_schur_weyl(parts: tuple[int, ...], d: int) -> int:
    if len(parts) > d:
        return 0
    num = 1
    for i, row in enumerate(parts):
        for j in range(row):
            num *= d + j - i
    den = _hook_product(parts)
    q, r = divmod(num, den)
    assert r == 0, "hook-content product is always integral"
    return q


def dim_irrep(alpha) -> int:
    """Number of standard Young tableaux of shape ``alpha`` (hook lengths, exact)."""
    return _dim_irrep(as_partition(alpha).parts)


def mult_schur_weyl(alpha, d: int) -> int:
    """Number of semistandard tableaux of shape ``alpha`` with entries <= ``d``.

    This is the multiplicity of the frame's block in ``(C^d)^{(x)n}``; it is 0
    exactly when the frame is taller than ``d``.
    """
    if d < 1:
        raise ValueError("d must be positive")
    return _mult_schur_weyl(as_partition(alpha).parts, d)


def dims(alpha, d: int) -> IrrepDims:
    """Exact (dimension, multiplicity) pair for ``alpha`` at local dimension ``d``."""
    a = as_partition(alpha)
    return IrrepDims(_dim_irrep(a.parts), _mult_schur_weyl(a.parts, d))


@lru_cache(maxsize=CACHE_CAPACITY)
def _ln_dim_irrep(parts: tuple[int, ...]) -> float:
    return math.log(_dim_irrep(parts)) if parts else 0.0


@lru_cache(maxsize=CACHE_CAPACITY)
def _ln_mult_schur_weyl(parts: tuple[int, ...], d: int) -> float:
    m = _mult_schur_weyl(parts, d)
    return math.log(m) if m else float("-inf")


def ln_dim_irrep(alpha) -> float:
    """log of dim_irrep, safe for frames whose dimension overflows a float."""
    return _ln_dim_irrep(as_partition(alpha).parts)


def ln_mult_schur_weyl(alpha, d: int) -> float:
    """log of mult_schur_weyl (``-inf`` when the multiplicity is 0)."""
    return _ln_mult_schur_weyl(as_partition(alpha).parts, d)


def add_box(alpha, max_height: Optional[int] = None) -> list[Partition]:
    """Frames obtained from ``alpha`` by adding one box, tallest row first.

    ``max_height`` drops frames exceeding that height; ``None`` keeps all.
    """
    a = as_partition(alpha)
    parts = a.parts
    out = []
    for i in range(len(parts) + 1):
        if i < len(parts):
            if i > 0 and parts[i] == parts[i - 1]:
                continue  # not a valid corner: would break weak decrease
            grown = parts[:i] + (parts[i] + 1,) + parts[i + 1:]
        else:
            grown = parts + (1,)
        if max_height is None or len(grown) <= max_height:
            out.append(Partition(grown))
    return out


def remove_box(alpha) -> list[Partition]:
    """Frames obtained from ``alpha`` by removing one corner box, top row first."""
    a = as_partition(alpha)
    parts = a.parts
    if not parts:
        raise ValueError("no box to remove")
    out = []
    for i in range(len(parts)):
        below = parts[i + 1] if i + 1 < len(parts) else 0
        if parts[i] > below:
            shrunk = parts[:i] + ((parts[i] - 1,) if parts[i] > 1 else ()) + parts[i + 1:]
            out.append(Partition(shrunk))
    return out


def theta_of(alpha, d: int) -> Optional[tuple[Partition, int]]:
    """The unique over-height frame for ``alpha`` at local dimension ``d``.

    When ``alpha`` has height exactly ``d``, appending a one-box row yields the
    single frame of height ``d + 1``; its dimension corrects the measurement
    spectrum.  Frames shorter than ``d`` have no such frame (returns None,
    read downstream as dimension 0).
    """
    a = as_partition(alpha)
    if a.height > d:
        raise ValueError("frame exceeds local dimension")
    if a.height < d:
        return None
    theta = Partition(a.parts + (1,))
    return theta, dim_irrep(theta)


def theta_dim(alpha, d: int) -> int:
    """Dimension of the over-height frame, or 0 when there is none."""
    t = theta_of(alpha, d)
    return t[1] if t is not None else 0
