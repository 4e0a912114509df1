"""Bounded variation of functions on finite ordered samples.

On a finite chain x_1 < ... < x_n the supremum over sub-chains of
sum |f(x_i) - f(x_{i+1})| is attained by the full chain: inserting a point
between two neighbors never decreases the sum (triangle inequality).  The
same holds for cycles on a finite circular order, with the wraparound
term |f(x_n) - f(x_1)| added; by rotation invariance of the cyclic sum any
starting point gives the same value.  So variation is a single pass.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Any, Mapping, Sequence

from ..corder import (
    FiniteCyclicOrder,
    LinearCut,
    PointMap,
    cut_at,
    is_cop,
)
from ..errors import InputError
from ..rotation import CirclePoint, less


@dataclass(frozen=True)
class FunctionSample:
    """Values of a real function on an ordered finite domain.

    ``domain`` is a FiniteCyclicOrder (circular), a LinearCut (linear), or
    a sequence of distinct CirclePoints (circular, ordered by position).
    """

    domain: Any
    values: Mapping

    def __post_init__(self):
        if isinstance(self.domain, (list, tuple)):
            if not all(isinstance(p, CirclePoint) for p in self.domain):
                raise InputError("a sequence domain must consist of CirclePoints")
            pts = sorted(self.domain, key=functools.cmp_to_key(lambda p, q: -1 if less(p, q) else (1 if less(q, p) else 0)))
            object.__setattr__(self, "domain", tuple(pts))
        elif not isinstance(self.domain, (FiniteCyclicOrder, LinearCut)):
            raise InputError(f"unordered domain {type(self.domain).__name__}")
        missing = [x for x in self.points if x not in self.values]
        if missing:
            raise InputError(f"no value at {missing[0]!r}")
        for x in self.points:
            if not isinstance(self.values[x], Real):
                raise InputError(f"value at {x!r} is not a real number")

    @property
    def points(self) -> tuple:
        """Domain labels in order (linear order, or arrangement for circles)."""
        if isinstance(self.domain, FiniteCyclicOrder):
            return self.domain.arrangement
        if isinstance(self.domain, LinearCut):
            return self.domain.order
        return self.domain

    @property
    def circular(self) -> bool:
        return not isinstance(self.domain, LinearCut)

    def __call__(self, x):
        return self.values[x]

    def diam(self):
        vals = [self.values[x] for x in self.points]
        return max(vals) - min(vals) if vals else 0

    def restrict(self, points: Sequence) -> "FunctionSample":
        """Restriction to a subsample (same kind of order)."""
        keep = set(points)
        if isinstance(self.domain, FiniteCyclicOrder):
            dom = FiniteCyclicOrder(tuple(x for x in self.points if x in keep))
            return FunctionSample(dom, {x: self.values[x] for x in dom.arrangement})
        if isinstance(self.domain, LinearCut):
            raise InputError("restrict a linear sample by slicing its chain instead")
        return FunctionSample([p for p in self.points if p in keep], {p: self.values[p] for p in keep})

    def to_json(self) -> dict:
        from ..jsonio import encode_label

        return {
            "points": [encode_label(x) if not isinstance(x, CirclePoint) else str(x) for x in self.points],
            "values": [_num_json(self.values[x]) for x in self.points],
            "circular": self.circular,
        }


def _num_json(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else float(v)
    return v


def variation(f: FunctionSample):
    """Upsilon(f): consecutive sum over the chain, plus wraparound on a circle."""
    vals = [f.values[x] for x in f.points]
    if len(vals) < 2:
        return 0
    total = sum(abs(a - b) for a, b in zip(vals, vals[1:]))
    if f.circular:
        total += abs(vals[-1] - vals[0])
    return total


def chain_variation(values: Sequence) -> Any:
    """Variation of a finite chain given by its values in order."""
    return sum(abs(a - b) for a, b in zip(values, values[1:]))


# the cut sandwich --------------------------------------------------------------------


@dataclass(frozen=True)
class CutReport:
    upsilon_cut: Any
    upsilon_circle: Any
    diam: Any

    @property
    def holds(self) -> bool:
        return self.upsilon_cut <= self.upsilon_circle <= self.upsilon_cut + self.diam

    def to_json(self) -> dict:
        return {
            "upsilon_cut": _num_json(self.upsilon_cut),
            "upsilon_circle": _num_json(self.upsilon_circle),
            "diam": _num_json(self.diam),
            "holds": self.holds,
        }


def cut_function(f0: FunctionSample, c) -> FunctionSample:
    """f = f0 o q on the cut X(c), with f(c-) = f(c+) = f0(c)."""
    if not isinstance(f0.domain, FiniteCyclicOrder):
        raise InputError("cut_function needs a FiniteCyclicOrder domain")
    cut = cut_at(f0.domain, c)
    q = cut.projection()
    return FunctionSample(cut, {x: f0.values[q(x)] for x in cut.order})


def variation_cut_inequality(f0: FunctionSample, c, *, gap: bool = False, diam=None) -> CutReport:
    """Upsilon(f) <= Upsilon(f0) <= Upsilon(f) + diam for f = f0 o q.

    With ``gap=False`` the circle is cut at the sample point c, whose two
    copies c-, c+ both carry f0(c); on a finite sample the two variations
    then coincide.  With ``gap=True`` the cut point lies in the gap right
    after c and is not itself sampled: the chain runs from the successor of
    c around to c and loses only the wraparound term.
    ``diam`` defaults to the diameter of the value set.
    """
    if not isinstance(f0.domain, FiniteCyclicOrder):
        raise InputError("the circular function must live on a FiniteCyclicOrder")
    order = f0.domain
    order.index(c)
    if gap:
        chain = [order.successor(c, i) for i in range(1, len(order) + 1)]
        up_cut = chain_variation([f0.values[x] for x in chain])
    else:
        up_cut = variation(cut_function(f0, c))
    return CutReport(up_cut, variation(f0), f0.diam() if diam is None else diam)


# COP maps -----------------------------------------------------------------------------


@dataclass(frozen=True)
class CopReport:
    before: Any
    after: Any

    @property
    def holds(self) -> bool:
        return self.after <= self.before

    def to_json(self) -> dict:
        return {"before": _num_json(self.before), "after": _num_json(self.after), "holds": self.holds}


def compose(f: FunctionSample, s: PointMap) -> FunctionSample:
    """f o s as a sample on the domain of s."""
    return FunctionSample(s.domain, {x: f.values[s(x)] for x in s.mapping})


def cop_variation_preservation(f: FunctionSample, s: PointMap) -> CopReport:
    """Upsilon(f o s) <= Upsilon(f) for a COP map s."""
    verdict = is_cop(s)
    if not verdict:
        raise InputError(f"map is not COP: {verdict.condition} fails at {verdict.witness!r}")
    if s.codomain != f.domain:
        raise InputError("the map must land in the domain of f")
    return CopReport(variation(f), variation(compose(f, s)))


# separating functions ---------------------------------------------------------------------


@dataclass(frozen=True)
class SeparatingFunction:
    f0: FunctionSample  # on the circle X
    f: FunctionSample  # on the cut X(c)
    cutpoint: Any
    case: int  # 1: c- < a < b < c+,  2: c- < b < a < c+

    def to_json(self) -> dict:
        return {
            "cut": self.cutpoint,
            "case": self.case,
            "f0": self.f0.to_json(),
            "f": self.f.to_json(),
            "upsilon_f0": _num_json(variation(self.f0)),
            "upsilon_f": _num_json(variation(self.f)),
        }


def _ramp(labels: Sequence, start, stop) -> dict:
    """Linear interpolation by position from ``start`` (first) to ``stop`` (last)."""
    n = len(labels) - 1
    if n == 0:
        return {labels[0]: Fraction(stop)}
    return {x: Fraction(start) + (Fraction(stop) - Fraction(start)) * i / n for i, x in enumerate(labels)}


def separating_function(X: FiniteCyclicOrder, a, b, c=None) -> SeparatingFunction:
    """A [0,1]-valued f0 on X with f0(a) = 0, f0(b) = 1 and Upsilon(f0) <= 3.

    Built on the cut X(c) for a third point c (by default the predecessor
    of a, or of b when that is a): zero up to a, rising on [a, b], falling
    on [b, c+] (case 1); or rising on [c-, b], falling on [b, a], zero
    after a (case 2).
    """
    if len(X) < 3:
        raise InputError("separating_function needs at least three points")
    if a == b:
        raise InputError("a and b must differ")
    X.index(a), X.index(b)
    if c is None:
        c = X.successor(a, -1)
        if c == b:
            c = X.successor(b, -1)
    elif c in (a, b):
        raise InputError("the cut point must differ from a and b")
    cut = cut_at(X, c)
    chain = list(cut.order)
    ia, ib = chain.index(a), chain.index(b)
    values: dict = {}
    if ia < ib:
        case = 1
        values.update({x: Fraction(0) for x in chain[: ia + 1]})
        values.update(_ramp(chain[ia: ib + 1], 0, 1))
        values.update(_ramp(chain[ib:], 1, 0))
    else:
        case = 2
        values.update(_ramp(chain[: ib + 1], 0, 1))
        values.update(_ramp(chain[ib: ia + 1], 1, 0))
        values.update({x: Fraction(0) for x in chain[ia:]})
    f = FunctionSample(cut, values)
    q = cut.projection()
    f0_values = {q(x): v for x, v in values.items()}
    f0 = FunctionSample(X, f0_values)
    return SeparatingFunction(f0, f, c, case)
