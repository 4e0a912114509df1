"""Factor complexity of coding sequences and patterns.

Counts come from a finite orbit sample.  A count is accepted only if
doubling the sample window does not change it; otherwise the result is
reported as inconclusive rather than silently undercounted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..coding import Coloring, coding_pattern
from ..errors import InconclusiveComplexity, InputError
from ..rotation import AngleSpec, CirclePoint

DEFAULT_WINDOW = 10_000


def count_factors(symbols: np.ndarray, shape: Sequence[int]) -> int:
    """Number of distinct sub-arrays of the given shape."""
    symbols = np.asarray(symbols, dtype=np.uint8)
    shape = tuple(int(s) for s in shape)
    if len(shape) != symbols.ndim:
        raise InputError(f"window shape {shape} does not match a {symbols.ndim}-dimensional pattern")
    if any(s < 1 for s in shape):
        raise InputError("window sides must be positive")
    if any(s > n for s, n in zip(shape, symbols.shape)):
        return 0
    windows = sliding_window_view(symbols, shape).reshape(-1, math.prod(shape))
    return len(np.unique(windows, axis=0))


@dataclass(frozen=True)
class ComplexityCount:
    shape: tuple[int, ...]
    count: int
    doubled_count: int
    window: int

    @property
    def stabilized(self) -> bool:
        return self.count == self.doubled_count

    def to_json(self) -> dict:
        return {
            "n": self.shape[0] if len(self.shape) == 1 else list(self.shape),
            "count": self.count,
            "doubled_count": self.doubled_count,
            "stabilized": self.stabilized,
            "window": self.window,
        }


def _sample_sides(k: int, window: int) -> list[int]:
    side = max(1, math.ceil(window ** (1.0 / k)))
    return [side] * k


def complexity_counts(
    spec: AngleSpec,
    coloring: Coloring,
    z: CirclePoint,
    shapes: Sequence[int | Sequence[int]],
    window: int = DEFAULT_WINDOW,
) -> list[ComplexityCount]:
    """Factor counts for each window shape at sample sizes W and 2W.

    For k = 1 the sample is the positions 0..W-1 (window starts); for k >= 2
    it is a cube of about W starting cells, and the doubled sample doubles
    the first side.
    """
    shapes = [(s,) if isinstance(s, (int, np.integer)) else tuple(s) for s in shapes]
    if not shapes:
        return []
    for s in shapes:
        if len(s) != spec.k:
            raise InputError(f"window shape {s} has the wrong dimension for k={spec.k}")
    sides = _sample_sides(spec.k, window)
    big = [max(s[i] for s in shapes) - 1 for i in range(spec.k)]
    doubled = [2 * sides[0]] + sides[1:]
    box = [(0, doubled[i] + big[i] - 1) for i in range(spec.k)]
    pattern = coding_pattern(spec, coloring, z, box).symbols
    out = []
    for s in shapes:
        small = pattern[tuple(slice(0, sides[i] + s[i] - 1) for i in range(spec.k))]
        large = pattern[tuple(slice(0, doubled[i] + s[i] - 1) for i in range(spec.k))]
        out.append(ComplexityCount(s, count_factors(small, s), count_factors(large, s), math.prod(sides)))
    return out


def factor_complexity(
    spec: AngleSpec,
    coloring: Coloring,
    z: CirclePoint,
    n: int | Sequence[int],
    window: int = DEFAULT_WINDOW,
) -> int:
    """p(n): distinct length-n words (k = 1) or n-shaped boxes (k >= 2);
    raises InconclusiveComplexity when the count moves on doubling."""
    (c,) = complexity_counts(spec, coloring, z, [n], window)
    if not c.stabilized:
        raise InconclusiveComplexity(n, c.count, c.doubled_count)
    return c.count


def sequence_complexity(seq: Sequence[int], n: int) -> int:
    """Distinct length-n factors of a finite word (no stabilization check)."""
    return count_factors(np.asarray(seq, dtype=np.uint8), (n,))
