"""Open arc covers of the circle and cover counts of their joins.

All open sets here are unions of *atoms*: with the distinct endpoints
e_0 < ... < e_{m-1} of every arc involved, the atoms are the points e_j and
the open gaps (e_j, e_{j+1}), 2m of them in circular order.  An open arc
(s, t) is the cyclic run of atoms strictly between the point atoms s and t,
so covers and intersections become bitmask arithmetic.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..errors import BudgetExceeded, InputError
from ..rotation import AngleSpec, CirclePoint, act, compare, less

JOIN_BUDGET = 200_000


@dataclass(frozen=True)
class ArcCover:
    """Open arcs (s, t), each running counterclockwise from s to t."""

    arcs: tuple[tuple[CirclePoint, CirclePoint], ...]

    def __post_init__(self):
        arcs = tuple((s, t) for s, t in self.arcs)
        object.__setattr__(self, "arcs", arcs)
        if not arcs:
            raise InputError("an arc cover needs at least one arc")
        for s, t in arcs:
            if compare(s, t).equal:
                raise InputError(f"arc ({s}, {t}) is degenerate: open arcs must be proper")
        atoms = Atoms.from_points([p for arc in arcs for p in arc])
        union = 0
        for arc in arcs:
            union |= atoms.arc_mask(*arc)
        if union != atoms.full:
            missing = atoms.describe(atoms.full & ~union)
            raise InputError(f"arcs do not cover the circle (uncovered near {missing})")

    @classmethod
    def parse(cls, spec: AngleSpec, text: str) -> "ArcCover":
        """``"s1:t1;s2:t2;..."`` with point expressions as in parse_point."""
        from ..rotation import parse_point

        arcs = []
        for item in text.split(";"):
            if not item.strip():
                continue
            if ":" not in item:
                raise InputError(f"arc {item!r} must look like start:end")
            s, t = item.split(":", 1)
            arcs.append((parse_point(spec, s), parse_point(spec, t)))
        return cls(tuple(arcs))

    @property
    def spec(self) -> AngleSpec:
        return self.arcs[0][0].spec

    def __len__(self):
        return len(self.arcs)

    def shifted(self, n: int) -> "ArcCover":
        """a^{-1}(U) for the rotation by n*alpha: every arc moved by -n*alpha."""
        spec = self.spec
        s = (-n,) + (0,) * (spec.k - 1)
        return ArcCover(tuple((act(spec, s, a), act(spec, s, b)) for a, b in self.arcs))

    def to_json(self) -> list:
        return [[str(a), str(b)] for a, b in self.arcs]


class Atoms:
    """The atom decomposition for a finite set of circle points."""

    def __init__(self, points: Sequence[CirclePoint]):
        self.points = points
        self.count = 2 * len(points)
        self.full = (1 << self.count) - 1
        self._index = {p.value: i for i, p in enumerate(points)}

    @classmethod
    def from_points(cls, points: Iterable[CirclePoint]) -> "Atoms":
        uniq: dict = {}
        for p in points:
            uniq.setdefault(p.value, p)

        def cmp(p, q):
            return -1 if less(p, q) else 1

        return cls(sorted(uniq.values(), key=functools.cmp_to_key(cmp)))

    def point_atom(self, p: CirclePoint) -> int:
        try:
            return 2 * self._index[p.value]
        except KeyError:
            raise InputError(f"{p} is not an endpoint of this decomposition") from None

    def arc_mask(self, s: CirclePoint, t: CirclePoint) -> int:
        i, j = self.point_atom(s), self.point_atom(t)
        mask = 0
        k = (i + 1) % self.count
        while k != j:
            mask |= 1 << k
            k = (k + 1) % self.count
        return mask

    def describe(self, mask: int) -> str:
        k = (mask & -mask).bit_length() - 1
        p = self.points[k // 2]
        return str(p) if k % 2 == 0 else f"just after {p}"


# minimum subcovers --------------------------------------------------------------------


def _runs(mask: int, n: int) -> list[tuple[int, int]]:
    """Maximal cyclic runs of set bits as (start, length)."""
    if mask == (1 << n) - 1:
        return [(0, n)]
    runs = []
    for i in range(n):
        if mask >> i & 1 and not mask >> ((i - 1) % n) & 1:
            length = 0
            while mask >> ((i + length) % n) & 1:
                length += 1
            runs.append((i, length))
    return runs


def min_cover_runs(runs: Sequence[tuple[int, int]], n: int) -> int:
    """Minimum number of cyclic runs (start, length) covering Z/n; exact.

    Some chosen run covers atom 0.  For each such anchor the rest is a
    linear interval-cover problem, solved optimally by the greedy
    farthest-reach rule on unrolled copies of the runs.
    """
    if any(length >= n for _, length in runs):
        return 1
    # unrolled copies: [a, a + length - 1] shifted by multiples of n
    copies = sorted({(a + shift, a + shift + length - 1) for a, length in runs for shift in (-n, 0, n)})
    best = math.inf
    for a, length in runs:
        lo, hi = a, a + length - 1
        if not (lo <= 0 <= hi or lo <= n <= hi):
            continue
        if lo > 0:
            lo, hi = lo - n, hi - n
        target = lo + n - 1  # cover hi+1 .. target
        count, reach = 1, hi
        while reach < target:
            nxt = max((e for s, e in copies if s <= reach + 1), default=reach)
            if nxt <= reach:
                count = math.inf
                break
            reach, count = nxt, count + 1
            if count >= best:
                break
        best = min(best, count)
    if best is math.inf:
        raise InputError("the runs do not cover the circle")
    return int(best)


def min_cover_masks(masks: Sequence[int], n: int) -> int:
    """Minimum number of masks whose union is all n atoms (exact).

    Cyclic runs go through :func:`min_cover_runs`; anything else through a
    branch-and-bound set cover on the non-dominated masks.
    """
    full = (1 << n) - 1
    masks = _maximal(masks)
    union = 0
    for m in masks:
        union |= m
    if union != full:
        raise InputError("sets do not cover")
    split = [_runs(m, n) for m in masks]
    if all(len(r) == 1 for r in split):
        return min_cover_runs([r[0] for r in split], n)
    return _set_cover(masks, full)


def _maximal(masks: Sequence[int]) -> list[int]:
    uniq = sorted(set(m for m in masks if m), key=lambda m: -bin(m).count("1"))
    keep: list[int] = []
    for m in uniq:
        if not any(m | k == k for k in keep):
            keep.append(m)
    return keep


def _set_cover(masks: list[int], full: int) -> int:
    covering: dict[int, list[int]] = {}
    for i in range(full.bit_length()):
        covering[i] = [m for m in masks if m >> i & 1]
    biggest = max(bin(m).count("1") for m in masks)
    best = [_greedy_cover(masks, full)]

    def go(covered: int, used: int):
        if covered == full:
            best[0] = min(best[0], used)
            return
        left = bin(full & ~covered).count("1")
        if used + -(-left // biggest) >= best[0]:
            return
        # branch on the uncovered atom with the fewest options
        rest = full & ~covered
        atom, options = None, None
        r = rest
        while r:
            i = (r & -r).bit_length() - 1
            r &= r - 1
            opts = covering[i]
            if options is None or len(opts) < len(options):
                atom, options = i, opts
                if len(opts) <= 1:
                    break
        for m in sorted(options, key=lambda m: -bin(m & rest).count("1")):
            go(covered | m, used + 1)

    go(0, 0)
    return best[0]


def _greedy_cover(masks: list[int], full: int) -> int:
    covered, count = 0, 0
    while covered != full:
        m = max(masks, key=lambda m: bin(m & ~covered).count("1"))
        covered |= m
        count += 1
    return count


def min_subcover_count(cover: ArcCover) -> int:
    """N(U): the least number of arcs of the cover whose union is the circle."""
    atoms = Atoms.from_points([p for arc in cover.arcs for p in arc])
    runs = []
    for s, t in cover.arcs:
        i, j = atoms.point_atom(s), atoms.point_atom(t)
        runs.append(((i + 1) % atoms.count, (j - i - 1) % atoms.count))
    return min_cover_runs(runs, atoms.count)


# joins under a rotation ----------------------------------------------------------------------


@dataclass(frozen=True)
class CoverGrowth:
    counts: tuple[int, ...]  # N_1, ..., N_nmax
    k: int  # number of arcs in the cover
    cells: tuple[int, ...]  # number of nonempty cells of each join

    @property
    def step_bound_holds(self) -> bool:
        return all(b <= a + 2 * self.k for a, b in zip(self.counts, self.counts[1:]))

    @property
    def linear_bound_holds(self) -> bool:
        return all(N <= 2 * self.k * n for n, N in enumerate(self.counts, start=1))

    @property
    def entropy_estimates(self) -> list[float]:
        return [math.log(N) / n for n, N in enumerate(self.counts, start=1)]

    def to_json(self) -> dict:
        return {
            "cover_growth": list(self.counts),
            "k": self.k,
            "cells": list(self.cells),
            "step_bound_holds": self.step_bound_holds,
            "linear_bound_holds": self.linear_bound_holds,
            "entropy_estimates": [round(x, 12) for x in self.entropy_estimates],
        }


def join_cover_growth(cover: ArcCover, A: Sequence[int], n_max: int, budget: int = JOIN_BUDGET) -> CoverGrowth:
    """N_n = N(a_1^{-1}U v ... v a_n^{-1}U) for n = 1..n_max under the
    rotation x -> x + alpha (k = 1 specs; extra generators are ignored)."""
    if n_max < 1:
        raise InputError("n_max must be positive")
    if len(A) < n_max:
        raise InputError(f"sequence A has {len(A)} terms, need {n_max}")
    shifted = [cover.shifted(a) for a in A[:n_max]]
    atoms = Atoms.from_points([p for U in shifted for arc in U.arcs for p in arc])
    level = [atoms.arc_mask(*arc) for arc in shifted[0].arcs]
    counts, cells = [], []
    for n in range(n_max):
        if n > 0:
            new = {c & atoms.arc_mask(*arc) for c in level for arc in shifted[n].arcs}
            new.discard(0)
            if len(new) > budget:
                raise BudgetExceeded(f"join at n={n + 1} has {len(new)} cells", len(new))
            level = list(new)
        else:
            level = list(set(level))
        cells.append(len(level))
        counts.append(min_cover_masks(level, atoms.count))
    return CoverGrowth(tuple(counts), len(cover), tuple(cells))
