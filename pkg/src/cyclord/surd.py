"""Exact numbers of the form q0 + q1*sqrt(d1) + ... + qm*sqrt(dm).

The radicands are squarefree integers > 1 and the coefficients are
:class:`fractions.Fraction`.  Since square roots of distinct squarefree
integers are linearly independent over Q, the normalized coefficient map is
a canonical form: two surds are equal iff their maps are equal.

Signs are decided exactly when at most one radicand is present.  With two or
more radicands the sign is read off a high-precision approximation and the
call raises :class:`~cyclord.errors.PrecisionExhausted` when the magnitude is
below the comparison margin.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Union

import mpmath

from .errors import PrecisionExhausted

Number = Union[int, Fraction]

DEFAULT_PRECISION = 60
GUARD_DIGITS = 10


def margin(precision: int) -> mpmath.mpf:
    """Comparison margin delta = 10**(-P+5) for working precision P."""
    return mpmath.mpf(10) ** (-precision + 5)


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (s, r) with n == s*s*r and r squarefree."""
    s, r = 1, 1
    p = 2
    m = n
    while p * p <= m:
        while m % (p * p) == 0:
            m //= p * p
            s *= p
        if m % p == 0:
            m //= p
            r *= p
        p += 1
    return s, r * m


class Surd:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Number] | Number = 0):
        if not isinstance(terms, Mapping):
            terms = {1: terms}
        clean: dict[int, Fraction] = {}
        for d, q in terms.items():
            q = Fraction(q)
            if q == 0:
                continue
            if d < 1:
                raise ValueError(f"radicand must be positive, got {d}")
            s, r = _squarefree_split(d)
            clean[r] = clean.get(r, Fraction(0)) + q * s
            if clean[r] == 0:
                del clean[r]
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def sqrt(cls, d: int, coeff: Number = 1) -> "Surd":
        return cls({d: coeff})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    @property
    def rational_part(self) -> Fraction:
        return self._terms.get(1, Fraction(0))

    @property
    def radicands(self) -> tuple[int, ...]:
        return tuple(d for d in self._terms if d != 1)

    def coefficient(self, d: int) -> Fraction:
        return self._terms.get(d, Fraction(0))

    def is_rational(self) -> bool:
        return not self.radicands

    def is_zero(self) -> bool:
        return not self._terms

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Surd(other)
        if not isinstance(other, Surd):
            return NotImplemented
        out = dict(self._terms)
        for d, q in other._terms.items():
            out[d] = out.get(d, Fraction(0)) + q
        return Surd(out)

    __radd__ = __add__

    def __neg__(self):
        return Surd({d: -q for d, q in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Surd(other)
        if not isinstance(other, Surd):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Surd({d: q * other for d, q in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Surd(other)
        if not isinstance(other, Surd):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self):
        if not self._terms:
            return "Surd(0)"
        parts = []
        for d, q in self._terms.items():
            parts.append(str(q) if d == 1 else f"{q}*sqrt({d})")
        return "Surd(" + " + ".join(parts) + ")"

    # evaluation -----------------------------------------------------------

    def to_mpf(self, dps: int) -> mpmath.mpf:
        with mpmath.workdps(dps):
            total = mpmath.mpf(0)
            for d, q in self._terms.items():
                term = mpmath.mpf(q.numerator) / q.denominator
                if d != 1:
                    term *= mpmath.sqrt(d)
                total += term
            return +total

    def __float__(self):
        return float(self.to_mpf(30))

    def sign(self, precision: int = DEFAULT_PRECISION) -> int:
        """Exact sign for zero or one radicand, certified numeric otherwise."""
        rads = self.radicands
        a = self.rational_part
        if not rads:
            return (a > 0) - (a < 0)
        if len(rads) == 1:
            b = self._terms[rads[0]]
            if a == 0:
                return 1 if b > 0 else -1
            if (a > 0) == (b > 0):
                return 1 if a > 0 else -1
            # opposite signs: compare a^2 with b^2*d; equality is impossible
            if a * a > b * b * rads[0]:
                return 1 if a > 0 else -1
            return 1 if b > 0 else -1
        approx = self.to_mpf(precision + GUARD_DIGITS + self._magnitude_digits())
        if abs(approx) < margin(precision):
            raise PrecisionExhausted(
                f"cannot certify the sign of {self!r}", 2 * precision
            )
        return 1 if approx > 0 else -1

    def _magnitude_digits(self) -> int:
        big = max((abs(q) for q in self._terms.values()), default=Fraction(0))
        if big == 0:
            return 0
        return max(0, len(str(big.numerator)) - len(str(big.denominator))) + 2

    def floor(self, precision: int = DEFAULT_PRECISION) -> int:
        """Greatest integer m with m <= self, verified by exact sign tests."""
        if self.is_rational():
            return math.floor(self.rational_part)
        try:
            est = sum(float(q) * (math.sqrt(d) if d != 1 else 1.0) for d, q in self._terms.items())
            if not abs(est) < 1e12:
                raise OverflowError
            guess = math.floor(est)
        except OverflowError:
            guess = int(mpmath.floor(self.to_mpf(self._magnitude_digits() + GUARD_DIGITS)))
        m = guess
        while (self - m).sign(precision) < 0:
            m -= 1
        while (self - (m + 1)).sign(precision) >= 0:
            m += 1
        return m

    def frac(self, precision: int = DEFAULT_PRECISION) -> "Surd":
        """Representative in [0, 1)."""
        return self - self.floor(precision)
