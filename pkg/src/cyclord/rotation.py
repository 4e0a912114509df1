"""Exact points of the circle T = [0, 1) and rotation actions of Z^k on it.

A point is stored symbolically as ``base + n1*alpha1 + ... + nk*alphak``
(mod 1) with ``base`` rational and integer coefficients.  Angles are exact
:class:`~cyclord.surd.Surd` values: decimals and fractions become rationals,
named irrationals become quadratic surds.  All comparisons go through exact
sign tests; only sums mixing two or more radicands fall back to certified
high-precision numerics.
"""

from __future__ import annotations

import itertools
import math
import os
import re
import warnings
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import mpmath

from .errors import BudgetExceeded, InputError, PrecisionExhausted
from .surd import DEFAULT_PRECISION, GUARD_DIGITS, Surd, margin

DEFAULT_BOX_LIMIT = 10**6

NAMED_ANGLES = {
    "golden": Surd({1: Fraction(-1, 2), 5: Fraction(1, 2)}),
    "sqrt2m1": Surd({1: -1, 2: 1}),
}


class NonMinimalWarning(UserWarning):
    """All generator angles are rational, so the action is not minimal."""


def default_precision() -> int:
    raw = os.environ.get("CYCLORD_PRECISION")
    if raw is None:
        return DEFAULT_PRECISION
    try:
        p = int(raw)
    except ValueError:
        raise InputError(f"CYCLORD_PRECISION must be an integer, got {raw!r}") from None
    if p < 10:
        raise InputError("precision must be at least 10 digits")
    return p


def parse_rational(text: str, precision: int = DEFAULT_PRECISION) -> Fraction:
    """Parse ``"1/3"``, ``"0.25"`` or ``"-2"``; decimals are rounded to P digits."""
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        try:
            value = Fraction(int(num), int(den))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad fraction {text!r}") from None
        return value
    try:
        value = Fraction(Decimal(text))
    except (InvalidOperation, ValueError):
        raise InputError(f"bad number {text!r}") from None
    scale = 10**precision
    if (value * scale).denominator != 1:
        value = Fraction(round(value * scale), scale)
    return value


@dataclass(frozen=True)
class Angle:
    """One generator angle; ``source`` is how the user wrote it."""

    source: str
    value: Surd

    @property
    def irrational(self) -> bool:
        return not self.value.is_rational()

    @classmethod
    def parse(cls, text: str, precision: int = DEFAULT_PRECISION) -> "Angle":
        key = text.strip()
        if key in NAMED_ANGLES:
            return cls(key, NAMED_ANGLES[key])
        return cls(key, Surd(parse_rational(key, precision)))

    def to_json(self) -> dict:
        if self.source in NAMED_ANGLES:
            return {"named": self.source}
        if "/" in self.source:
            return {"rational": self.source}
        return {"decimal": self.source}


@dataclass(frozen=True)
class AngleSpec:
    """Generator angles alpha_1..alpha_k of a Z^k rotation action."""

    angles: tuple[Angle, ...]
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if not self.angles:
            raise InputError("an AngleSpec needs at least one angle")
        if self.precision < 10:
            raise InputError("precision must be at least 10 digits")
        if not self.minimal:
            warnings.warn(
                "all angles are rational: the rotation action is periodic, not minimal",
                NonMinimalWarning,
                stacklevel=3,
            )

    @classmethod
    def from_strings(cls, texts: Sequence[str] | str, precision: int | None = None) -> "AngleSpec":
        if isinstance(texts, str):
            texts = [t for t in texts.split(",") if t.strip()]
        p = default_precision() if precision is None else precision
        return cls(tuple(Angle.parse(t, p) for t in texts), p)

    @classmethod
    def from_json(cls, data: dict) -> "AngleSpec":
        try:
            p = int(data.get("precision", default_precision()))
            texts = []
            for entry in data["angles"]:
                if "named" in entry:
                    if entry["named"] not in NAMED_ANGLES:
                        raise InputError(f"unknown named angle {entry['named']!r}")
                    texts.append(entry["named"])
                elif "decimal" in entry:
                    texts.append(str(entry["decimal"]))
                elif "rational" in entry:
                    texts.append(str(entry["rational"]))
                else:
                    raise InputError(f"bad angle entry {entry!r}")
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed AngleSpec JSON: {exc}") from None
        return cls(tuple(Angle.parse(t, p) for t in texts), p)

    def to_json(self) -> dict:
        return {"angles": [a.to_json() for a in self.angles], "precision": self.precision}

    @property
    def k(self) -> int:
        return len(self.angles)

    @property
    def minimal(self) -> bool:
        return any(a.irrational for a in self.angles)

    def point(self, base=0, coeffs: Sequence[int] | None = None) -> "CirclePoint":
        base = Fraction(base)
        coeffs = tuple(coeffs) if coeffs is not None else (0,) * self.k
        return CirclePoint(base - math.floor(base), coeffs, self)

    def parse_point(self, text: str) -> "CirclePoint":
        return parse_point(self, text)

    def shift(self, s: Sequence[int]) -> Surd:
        """h(s) = s1*alpha1 + ... + sk*alphak, not reduced mod 1."""
        total = Surd(0)
        for n, a in zip(s, self.angles):
            if n:
                total = total + a.value * n
        return total


@dataclass(frozen=True)
class CirclePoint:
    base: Fraction
    coeffs: tuple[int, ...]
    spec: AngleSpec = field(repr=False)

    def __post_init__(self):
        if not 0 <= self.base < 1:
            raise InputError(f"base must lie in [0, 1), got {self.base}")
        if len(self.coeffs) != self.spec.k:
            raise InputError(f"expected {self.spec.k} coefficients, got {len(self.coeffs)}")

    @cached_property
    def value(self) -> Surd:
        """Exact representative in [0, 1)."""
        return (self.spec.shift(self.coeffs) + self.base).frac(self.spec.precision)

    def approx(self, dps: int | None = None) -> mpmath.mpf:
        """Cached-precision approximation, error below 10**-(P+GUARD_DIGITS)."""
        return self.value.to_mpf(dps or self.spec.precision + GUARD_DIGITS)

    def __float__(self):
        return float(self.value)

    def __str__(self):
        parts = [str(self.base)] if self.base else []
        names = ["alpha"] if self.spec.k == 1 else [f"alpha{i + 1}" for i in range(self.spec.k)]
        for n, name in zip(self.coeffs, names):
            if n:
                parts.append(name if n == 1 else f"-{name}" if n == -1 else f"{n}*{name}")
        return "+".join(parts).replace("+-", "-") or "0"


_TERM = re.compile(r"([+-]?)\s*([^+-]+)")


def parse_point(spec: AngleSpec, text: str) -> CirclePoint:
    """Parse a point expression like ``"0"``, ``"1/4"``, ``"1-alpha"`` or
    ``"0.5+2*alpha1-alpha2"`` (``alpha`` means ``alpha1``)."""
    text = text.replace(" ", "")
    if not text:
        raise InputError("empty point expression")
    base = Fraction(0)
    coeffs = [0] * spec.k
    pos = 0
    for m in _TERM.finditer(text):
        if m.start() != pos:
            raise InputError(f"cannot parse point {text!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        term = m.group(2)
        am = re.fullmatch(r"(?:(\d+)\*)?alpha(\d*)", term)
        if am:
            n = int(am.group(1) or 1)
            idx = int(am.group(2) or 1) - 1
            if not 0 <= idx < spec.k:
                raise InputError(f"no generator {term!r} in a {spec.k}-angle spec")
            coeffs[idx] += sign * n
        else:
            base += sign * parse_rational(term, spec.precision)
    if pos != len(text):
        raise InputError(f"cannot parse point {text!r}")
    return spec.point(base, coeffs)


def _check_same_spec(*points: CirclePoint) -> None:
    spec = points[0].spec
    for p in points[1:]:
        if p.spec != spec:
            raise InputError("points live under different AngleSpecs")


def act(spec: AngleSpec, s: Sequence[int], p: CirclePoint) -> CirclePoint:
    """Translate ``p`` by the group element ``s``: coefficients add, base is kept."""
    if len(s) != spec.k:
        raise InputError(f"group element has dimension {len(s)}, spec has k={spec.k}")
    if p.spec != spec:
        raise InputError("point does not belong to this AngleSpec")
    return CirclePoint(p.base, tuple(a + b for a, b in zip(p.coeffs, s)), spec)


def difference(p: CirclePoint, q: CirclePoint) -> Surd:
    """Exact value of p - q reduced into [0, 1)."""
    _check_same_spec(p, q)
    return (p.value - q.value).frac(p.spec.precision)


@dataclass(frozen=True)
class Comparison:
    equal: bool
    gap: Surd | None = None  # exact circular distance when distinct

    def gap_lower_bound(self, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
        if self.gap is None:
            return mpmath.mpf(0)
        return self.gap.to_mpf(precision + GUARD_DIGITS) - mpmath.mpf(10) ** -(precision + GUARD_DIGITS)


def compare(p: CirclePoint, q: CirclePoint) -> Comparison:
    """Decide equality; for distinct points return the circular distance.

    Identical symbols short-circuit.  Otherwise the exact difference is
    tested for zero (this covers coincidences forced by rational angles)
    and its sign is certified, raising PrecisionExhausted when it cannot be.
    """
    _check_same_spec(p, q)
    if p.base == q.base and p.coeffs == q.coeffs:
        return Comparison(True)
    d = difference(p, q)
    if d.is_zero():
        return Comparison(True)
    prec = p.spec.precision
    # certify that d is bounded away from 0 and 1 when the sign path is numeric
    if len(d.radicands) > 1:
        approx = d.to_mpf(prec + GUARD_DIGITS)
        if approx < margin(prec) or 1 - approx < margin(prec):
            raise PrecisionExhausted(f"points {p} and {q} are too close to separate", 2 * prec)
    gap = d if (Surd(Fraction(1, 2)) - d).sign(prec) >= 0 else 1 - d
    return Comparison(False, gap)


def less(p: CirclePoint, q: CirclePoint) -> bool:
    """Strict comparison of the [0, 1) representatives."""
    return (q.value - p.value).sign(p.spec.precision) > 0


def circular_betweenness(a: CirclePoint, b: CirclePoint, c: CirclePoint) -> bool:
    """[a, b, c] on T: the sign of (b-a)(c-b)(c-a) on [0, 1) representatives."""
    _check_same_spec(a, b, c)
    prec = a.spec.precision
    s1 = (b.value - a.value).sign(prec)
    s2 = (c.value - b.value).sign(prec)
    s3 = (c.value - a.value).sign(prec)
    return s1 * s2 * s3 > 0


def box_points(box: Sequence[tuple[int, int]], limit: int = DEFAULT_BOX_LIMIT) -> Iterable[tuple[int, ...]]:
    """Row-major enumeration of the integer box prod [lo_i, hi_i] (inclusive)."""
    volume = 1
    for lo, hi in box:
        if hi < lo:
            raise InputError(f"empty range {lo}..{hi}")
        volume *= hi - lo + 1
    if volume > limit:
        raise BudgetExceeded(f"box volume {volume} exceeds limit {limit}", volume)
    return itertools.product(*(range(lo, hi + 1) for lo, hi in box))


def orbit_sample(
    spec: AngleSpec,
    z: CirclePoint,
    box: Sequence[tuple[int, int]],
    limit: int = DEFAULT_BOX_LIMIT,
) -> list[tuple[tuple[int, ...], CirclePoint]]:
    if len(box) != spec.k:
        raise InputError(f"box has dimension {len(box)}, spec has k={spec.k}")
    return [(s, act(spec, s, z)) for s in box_points(box, limit)]


def same_orbit(p: CirclePoint, q: CirclePoint) -> bool:
    """Whether ``p = q + h(s)`` for some s in Z^k.

    Solved exactly as a lattice problem: the irrational part of p - q must be
    an integer combination of the angles' irrational parts, and what is left
    over must lie in the (cyclic) subgroup of Q/Z reachable by integer
    combinations whose irrational parts cancel.
    """
    _check_same_spec(p, q)
    spec = p.spec
    diff = spec.shift(tuple(a - b for a, b in zip(p.coeffs, q.coeffs))) + (p.base - q.base)
    angles = [a.value for a in spec.angles]

    groups: dict[int, list[int]] = {}
    for i, a in enumerate(angles):
        rads = a.radicands
        if len(rads) > 1:
            raise InputError("orbit membership needs angles with at most one radicand")
        if rads:
            groups.setdefault(rads[0], []).append(i)
    if any(d not in groups for d in diff.radicands):
        return False

    residual = diff.rational_part
    generators: list[Fraction] = [a.rational_part for a in angles if a.is_rational()]
    for d, idx in groups.items():
        b = [angles[i].coefficient(d) for i in idx]
        target = diff.coefficient(d)
        scale = math.lcm(*(x.denominator for x in b), target.denominator)
        beta = [int(x * scale) for x in b]
        t = int(target * scale)
        g, u = _extended_gcd(beta)
        if t % g:
            return False
        factor = t // g
        for i, ui in zip(idx, u):
            residual -= ui * factor * angles[i].rational_part
        for x, y in itertools.combinations(range(len(idx)), 2):
            gij = math.gcd(beta[x], beta[y])
            r_x = angles[idx[x]].rational_part
            r_y = angles[idx[y]].rational_part
            generators.append(Fraction(beta[y] // gij) * r_x - Fraction(beta[x] // gij) * r_y)
    modulus = math.lcm(1, *((g - math.floor(g)).denominator for g in generators))
    return (residual * modulus).denominator == 1


def _extended_gcd(values: list[int]) -> tuple[int, list[int]]:
    """gcd of ``values`` and integer Bezout coefficients."""
    g, coeffs = 0, [0] * len(values)
    for i, v in enumerate(values):
        # solve x*g + y*v = gcd(g, v)
        old_r, r = g, v
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            qt = old_r // r
            old_r, r = r, old_r - qt * r
            old_s, s = s, old_s - qt * s
            old_t, t = t, old_t - qt * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        coeffs = [c * old_s for c in coeffs]
        coeffs[i] = old_t
        g = old_r
    return g, coeffs
