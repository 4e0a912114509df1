"""Exhaustive search for combinatorially independent subfamilies.

A family f_1..f_m of functions on a finite sample is independent with
thresholds u < w when every sign pattern is realized: for every eps in
{low, high}^m some sample point has f_i <= u where eps_i is low and
f_i >= w where it is high.  For 0/1 functions the only choice is u=0, w=1.
Patterns are tracked as Python-int bitsets over the sample.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import BudgetExceeded, InputError

DEFAULT_CAP = 4
DEFAULT_BUDGET = 50_000_000


@dataclass
class IndependenceResult:
    size: int
    witness: tuple[int, ...] = ()
    thresholds: tuple | None = None
    # pattern (tuple of 0=low / 1=high) -> index of a sample point realizing it
    cells: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "witness": list(self.witness),
            "thresholds": list(self.thresholds) if self.thresholds else None,
            "cells": {"".join(map(str, k)): v for k, v in sorted(self.cells.items())},
        }


def _bits(mask: np.ndarray) -> int:
    packed = np.packbits(mask.astype(bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def search_cost(m: int, cap: int, pairs: int = 1) -> int:
    return pairs * sum(math.comb(m, r) * 2**r for r in range(1, cap + 1))


def independence_max(
    family: Sequence[Sequence[float]] | np.ndarray,
    cap: int = DEFAULT_CAP,
    budget: int = DEFAULT_BUDGET,
) -> IndependenceResult:
    """Largest independent subfamily of size <= cap.

    ``family`` is an (m, N) array: row i holds f_i on the N sample points.
    Non-binary values are handled per threshold pair (u, w) of observed
    values with u < w.
    """
    F = np.asarray(family)
    if F.ndim != 2:
        raise InputError("family must be a 2-d array (functions x sample points)")
    if cap < 1:
        raise InputError("cap must be positive")
    m, N = F.shape
    values = np.unique(F)
    pairs = [(u, w) for u, w in itertools.combinations(values.tolist(), 2)]
    estimate = search_cost(m, min(cap, m), max(1, len(pairs)))
    if estimate > budget:
        raise BudgetExceeded(
            f"independence search over {m} functions up to size {cap} needs ~{estimate} steps (budget {budget})",
            estimate,
        )
    best = IndependenceResult(0)
    for u, w in pairs:
        low = [_bits(F[i] <= u) for i in range(m)]
        high = [_bits(F[i] >= w) for i in range(m)]
        found = _search(low, high, (1 << N) - 1, min(cap, m), best.size)
        if found is not None and len(found[0]) > best.size:
            idx, cells = found
            best = IndependenceResult(len(idx), tuple(idx), (u, w), cells)
            if best.size == min(cap, m):
                break
    return best


def _search(low: list[int], high: list[int], full: int, cap: int, floor: int):
    """Depth-first search; returns (indices, cells) of the largest
    independent subfamily larger than ``floor``, or None."""
    m = len(low)
    best: list = [None, floor]

    def extend(chosen: list[int], cells: dict, start: int):
        if len(chosen) > best[1]:
            best[0], best[1] = (list(chosen), dict(cells)), len(chosen)
        if len(chosen) == cap or best[1] == cap:
            return
        if len(chosen) + (m - start) <= best[1]:
            return
        for j in range(start, m):
            new = {}
            for pat, mask in cells.items():
                lo, hi = mask & low[j], mask & high[j]
                if not lo or not hi:
                    break
                new[pat + (0,)] = lo
                new[pat + (1,)] = hi
            else:
                extend(chosen + [j], new, j + 1)
            if best[1] == cap:
                return

    extend([], {(): full}, 0)
    if best[0] is None:
        return None
    idx, cells = best[0]
    return idx, {pat: (mask & -mask).bit_length() - 1 for pat, mask in cells.items()}


def arc_indicator_family(arcs: Sequence[tuple[float, float]], sample: Sequence[float]) -> np.ndarray:
    """Rows 1_{[s, t)} (circular, s -> t counterclockwise) evaluated on sample points."""
    x = np.asarray(sample, dtype=float) % 1.0
    rows = []
    for s, t in arcs:
        s, t = s % 1.0, t % 1.0
        if s <= t:
            rows.append((x >= s) & (x < t))
        else:
            rows.append((x >= s) | (x < t))
    return np.array(rows, dtype=np.uint8)
