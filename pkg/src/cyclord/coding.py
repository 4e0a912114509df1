"""Coloring functions on the circle and the coding sequences they induce.

A :class:`CyclicPartition` is a cycle of cut points c_0, ..., c_d; arc i is
the half-open interval [c_i, c_{i+1}) with c_{d+1} = c_0.  A
:class:`Coloring` assigns a symbol to every arc, and the coding of a point z
under a Z^k rotation is s |-> color(z + h(s)).

Bulk evaluation goes through a certified float filter: orbit positions are
computed in float64 together with a rigorous error bound, and every point
whose distance to a cut is within that bound is recolored exactly.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError
from .rotation import (
    DEFAULT_BOX_LIMIT,
    Angle,
    AngleSpec,
    CirclePoint,
    box_points,
    compare,
    less,
    parse_point,
    same_orbit,
)

MAX_SYMBOLS = 256
_EPS = 2.0**-52


@dataclass(frozen=True)
class CyclicPartition:
    cuts: tuple[CirclePoint, ...]

    def __post_init__(self):
        cuts = tuple(self.cuts)
        object.__setattr__(self, "cuts", cuts)
        if not cuts:
            raise InputError("a partition needs at least one cut")
        if len(cuts) > MAX_SYMBOLS:
            raise InputError(f"at most {MAX_SYMBOLS} arcs are supported")
        spec = cuts[0].spec
        if any(c.spec != spec for c in cuts):
            raise InputError("cuts live under different AngleSpecs")
        for i, c in enumerate(cuts):
            for e in cuts[i + 1:]:
                if compare(c, e).equal:
                    raise InputError(f"repeated cut point {c}")
        # a cycle of distinct points on T: exactly one cyclic descent
        if len(cuts) > 2:
            descents = sum(less(cuts[(i + 1) % len(cuts)], cuts[i]) for i in range(len(cuts)))
            if descents != 1:
                raise InputError("cut points are not listed in cyclic order")

    @classmethod
    def parse(cls, spec: AngleSpec, text: str | Sequence[str]) -> "CyclicPartition":
        items = text.split(",") if isinstance(text, str) else list(text)
        items = [x for x in items if x.strip()]
        return cls(tuple(parse_point(spec, x) for x in items))

    @property
    def spec(self) -> AngleSpec:
        return self.cuts[0].spec

    @property
    def d(self) -> int:
        return len(self.cuts) - 1

    def arc_of(self, t: CirclePoint) -> int:
        """Index i of the arc [c_i, c_{i+1}) containing t."""
        order = self._sorted
        # last sorted cut that is <= t; wrap to the largest cut if none
        pos = -1
        for j, i in enumerate(order):
            if less(t, self.cuts[i]):
                break
            pos = j
        return order[pos]

    @property
    def _sorted(self) -> list[int]:
        cached = self.__dict__.get("_sorted_cache")
        if cached is None:

            def cmp(i, j):
                return -1 if less(self.cuts[i], self.cuts[j]) else 1

            cached = sorted(range(len(self.cuts)), key=functools.cmp_to_key(cmp))
            self.__dict__["_sorted_cache"] = cached
        return cached

    def to_json(self) -> list[str]:
        return [str(c) for c in self.cuts]


@dataclass(frozen=True)
class Coloring:
    partition: CyclicPartition
    colors: tuple[int, ...]

    def __post_init__(self):
        colors = tuple(int(c) for c in self.colors)
        object.__setattr__(self, "colors", colors)
        if len(colors) != len(self.partition.cuts):
            raise InputError(f"{len(self.partition.cuts)} arcs but {len(colors)} colors")
        if any(not 0 <= c < MAX_SYMBOLS for c in colors):
            raise InputError(f"colors must lie in 0..{MAX_SYMBOLS - 1}")

    @classmethod
    def standard(cls, partition: CyclicPartition) -> "Coloring":
        return cls(partition, tuple(range(len(partition.cuts))))

    @property
    def d(self) -> int:
        return self.partition.d

    @property
    def proper(self) -> bool:
        """Colors map onto {0, ..., d}: distinct arcs get distinct symbols."""
        return set(self.colors) == set(range(self.d + 1))

    @property
    def alphabet(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.colors)))

    def to_json(self) -> dict:
        return {"cuts": self.partition.to_json(), "colors": list(self.colors)}


def color(c: Coloring, t: CirclePoint) -> int:
    """f(t) = colors[i] for t in [c_i, c_{i+1})."""
    return c.colors[c.partition.arc_of(t)]


# bulk evaluation ---------------------------------------------------------------


def _float_positions(z: CirclePoint, coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    """Float64 positions of z + h(s) mod 1 for the rows s of ``coeffs`` and a
    rigorous bound on their absolute error; None when coefficients are too
    large for float64 to track."""
    spec = z.spec
    total = coeffs + np.asarray(z.coeffs, dtype=np.int64)
    if total.size and np.abs(total).max() > 2**40:
        return None
    alphas = np.array([float(a.value) for a in spec.angles])
    base = float(z.base)
    raw = base + total.astype(np.float64) @ alphas
    # representation error of each alpha and of base is <= eps/2 relative;
    # each product and sum adds at most eps/2 relative to its magnitude
    scale = 1.0 + np.abs(total).astype(np.float64) @ np.maximum(1.0, np.abs(alphas))
    err = scale * (spec.k + 3) * _EPS
    return np.mod(raw, 1.0), err + _EPS


def arc_indices(partition: CyclicPartition, z: CirclePoint, coeffs: np.ndarray, *, with_exact: bool = False):
    """Arc index of z + h(s) for every row s of ``coeffs`` (shape (m, k)).

    With ``with_exact`` also return the mask of rows that were decided
    exactly; every point lying on a cut is among them.
    """
    coeffs = np.asarray(coeffs, dtype=np.int64).reshape(-1, partition.spec.k)
    m = len(coeffs)
    if len(partition.cuts) == 1:
        out = np.zeros(m, dtype=np.int64)
        return (out, np.zeros(m, dtype=bool)) if with_exact else out
    order = np.array(partition._sorted)
    cut_vals = np.array([float(partition.cuts[i].value) for i in order])
    approx = _float_positions(z, coeffs)
    if approx is None:
        uncertain = np.ones(m, dtype=bool)
        out = np.zeros(m, dtype=np.int64)
    else:
        v, err = approx
        pos = np.searchsorted(cut_vals, v, side="right") - 1  # -1 wraps to the last cut
        out = order[pos]
        dist = np.abs(v[:, None] - cut_vals[None, :])
        dist = np.minimum(dist, 1.0 - dist).min(axis=1)
        uncertain = dist <= err + 2 * _EPS
    spec = partition.spec
    for i in np.flatnonzero(uncertain):
        s = coeffs[i]
        p = CirclePoint(z.base, tuple(int(a) + int(b) for a, b in zip(z.coeffs, s)), spec)
        out[i] = partition.arc_of(p)
    return (out, uncertain) if with_exact else out


def color_many(c: Coloring, z: CirclePoint, coeffs: np.ndarray) -> np.ndarray:
    palette = np.array(c.colors, dtype=np.uint8)
    return palette[arc_indices(c.partition, z, coeffs)]


# patterns -------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SymbolicPattern:
    """Symbols over the integer box with lower corner ``origin``.

    ``symbols`` has one axis per dimension of the acting group; a word for
    k = 1, a rectangular array for k >= 2.
    """

    origin: tuple[int, ...]
    symbols: np.ndarray

    def __post_init__(self):
        if self.symbols.ndim != len(self.origin):
            raise InputError("pattern dimensions do not match its origin")

    @property
    def shape(self) -> tuple[int, ...]:
        return self.symbols.shape

    @property
    def box(self) -> list[tuple[int, int]]:
        return [(o, o + n - 1) for o, n in zip(self.origin, self.shape)]

    def __getitem__(self, s: Sequence[int]) -> int:
        idx = tuple(a - o for a, o in zip(s, self.origin))
        if any(i < 0 for i in idx):
            raise IndexError(s)
        return int(self.symbols[idx])

    def __eq__(self, other):
        if not isinstance(other, SymbolicPattern):
            return NotImplemented
        return self.origin == other.origin and np.array_equal(self.symbols, other.symbols)

    def word(self) -> str:
        if self.symbols.ndim != 1:
            raise InputError("only one-dimensional patterns are words")
        return "".join(str(int(x)) for x in self.symbols)

    def to_json(self) -> dict:
        return {"box": [list(r) for r in self.box], "symbols": self.symbols.tolist()}

    def to_csv(self) -> str:
        rows = self.symbols.reshape(self.shape[0], -1) if self.symbols.ndim > 1 else self.symbols[None, :]
        return "\n".join(",".join(str(int(x)) for x in row) for row in rows) + "\n"


def _box_coeffs(box: Sequence[tuple[int, int]], limit: int) -> tuple[np.ndarray, tuple[int, ...]]:
    box_points(box, limit)  # validates ranges and volume
    axes = [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in box]
    grids = np.meshgrid(*axes, indexing="ij")
    shape = tuple(len(a) for a in axes)
    return np.stack([g.reshape(-1) for g in grids], axis=1), shape


def coding_pattern(
    spec: AngleSpec,
    coloring: Coloring,
    z: CirclePoint,
    box: Sequence[tuple[int, int]],
    limit: int = DEFAULT_BOX_LIMIT,
) -> SymbolicPattern:
    """The pattern of s |-> f(z + s1*alpha1 + ... + sk*alphak) on ``box``."""
    if len(box) != spec.k:
        raise InputError(f"box has dimension {len(box)}, spec has k={spec.k}")
    if coloring.partition.spec != spec or z.spec != spec:
        raise InputError("coloring, point and spec disagree")
    coeffs, shape = _box_coeffs(box, limit)
    symbols = color_many(coloring, z, coeffs).reshape(shape)
    return SymbolicPattern(tuple(lo for lo, _ in box), symbols)


def sturmian_bisequence(
    alpha: Angle | str,
    t: CirclePoint | str | Fraction,
    z: CirclePoint | str | Fraction = 0,
    range_: tuple[int, int] = (0, 0),
    precision: int | None = None,
) -> list[int]:
    """s_n for n0 <= n <= n1: 0 iff {z + n*alpha} lies in [0, t)."""
    if isinstance(alpha, str):
        spec = AngleSpec.from_strings([alpha], precision)
    else:
        spec = AngleSpec((alpha,), precision or AngleSpec.from_strings("golden").precision)
    t = _as_point(spec, t)
    z = _as_point(spec, z)
    if t.value.is_zero():
        raise InputError("t must lie in (0, 1)")
    coloring = Coloring(CyclicPartition((spec.point(), t)), (0, 1))
    return coding_pattern(spec, coloring, z, [range_]).symbols.tolist()


def _as_point(spec: AngleSpec, x) -> CirclePoint:
    if isinstance(x, CirclePoint):
        if x.spec != spec:
            return CirclePoint(x.base, x.coeffs, spec)
        return x
    if isinstance(x, str):
        return parse_point(spec, x)
    return spec.point(Fraction(x))


# the split coloring -------------------------------------------------------------------


@dataclass(frozen=True)
class SplitPoint:
    """A point of the split circle: ``sign`` is '-' or '+' for doubled points,
    None for points outside the split set."""

    point: CirclePoint
    sign: str | None = None

    def __str__(self):
        return f"{self.point}{self.sign or ''}"


class SplitColoring:
    """f+ on the split circle T_A.

    f+(x+) = f(x); f+(x-) is the color of the arc ending at x, which differs
    from f(x) only when x is a cut; unsplit points keep f(x).
    """

    def __init__(self, coloring: Coloring, generators: Iterable[CirclePoint]):
        self.coloring = coloring
        self.generators = tuple(generators)
        for c in coloring.partition.cuts:
            if not self.in_split_set(c):
                raise InputError(f"split set misses the orbit of cut {c}")

    def in_split_set(self, x: CirclePoint) -> bool:
        return any(same_orbit(x, g) for g in self.generators)

    def __call__(self, p: SplitPoint) -> int:
        cuts = self.coloring.partition.cuts
        if p.sign is None:
            if self.in_split_set(p.point):
                raise InputError(f"{p.point} is split; give it a sign")
            return color(self.coloring, p.point)
        if p.sign not in "+-" or len(p.sign) != 1:
            raise InputError(f"bad sign {p.sign!r}")
        if not self.in_split_set(p.point):
            raise InputError(f"{p.point} is not in the split set")
        i = self.coloring.partition.arc_of(p.point)
        if p.sign == "-" and compare(p.point, cuts[i]).equal:
            return self.coloring.colors[(i - 1) % len(cuts)]
        return self.coloring.colors[i]


def split_coloring(coloring: Coloring, generators: Iterable[CirclePoint]) -> SplitColoring:
    return SplitColoring(coloring, generators)


__all__ = [
    "CyclicPartition",
    "Coloring",
    "SymbolicPattern",
    "SplitPoint",
    "SplitColoring",
    "arc_indices",
    "color",
    "color_many",
    "coding_pattern",
    "sturmian_bisequence",
    "split_coloring",
]
