"""Point splitting: Split(X; A) on finite data.

Every a in A is replaced by two copies a- and a+ sitting next to each other
(a- first), points outside A keep their bare label, and the projection nu
sends both copies back to a.  Circle samples of Split(T, R_alpha; A) are
built from finite orbit segments; the infinite system itself is never
materialized.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

from .coding import Coloring, SplitColoring, arc_indices
from .corder import (
    FiniteCyclicOrder,
    PointMap,
    SignedLabel,
    is_cop,
    lex_product,
)
from .errors import InputError
from .rotation import AngleSpec, CirclePoint, act, compare, less, same_orbit

MINUS, PLUS, MARK = "-", "+", "0"


@dataclass(frozen=True)
class SplitOrder:
    base: FiniteCyclicOrder
    A: frozenset
    order: FiniteCyclicOrder

    @property
    def arrangement(self) -> tuple:
        return self.order.arrangement

    def nu(self, x):
        """Projection onto the base."""
        if isinstance(x, SignedLabel) and x.base in self.A:
            return x.base
        if x in self.base and x not in self.A:
            return x
        raise InputError(f"{x!r} is not a point of the split order")

    @property
    def projection(self) -> PointMap:
        return PointMap(self.order, self.base, {x: self.nu(x) for x in self.arrangement})

    def fibers(self) -> dict:
        out: dict = {b: [] for b in self.base.arrangement}
        for x in self.arrangement:
            out[self.nu(x)].append(x)
        return out

    def lift(self, x, sign: str | None = None):
        """The split point over base point x (with sign when x is in A)."""
        if x in self.A:
            if sign not in (MINUS, PLUS):
                raise InputError(f"{x!r} is split; choose '-' or '+'")
            return SignedLabel(x, sign)
        if sign is not None:
            raise InputError(f"{x!r} is not split")
        return x

    def to_json(self) -> dict:
        from .jsonio import encode_label, label_str

        return {
            "arrangement": [encode_label(x) for x in self.arrangement],
            "nu": {label_str(x): encode_label(self.nu(x)) for x in self.arrangement},
        }


def split(base: FiniteCyclicOrder, A: Iterable) -> SplitOrder:
    """Double every point of A into a-, a+ (in that order)."""
    A = frozenset(A)
    stray = A - base.ground
    if stray:
        raise InputError(f"split set is not contained in the base: {sorted(map(repr, stray))}")
    arr = []
    for x in base.arrangement:
        if x in A:
            arr += [SignedLabel(x, MINUS), SignedLabel(x, PLUS)]
        else:
            arr.append(x)
    if len(set(arr)) != len(arr):
        raise InputError("base labels collide with doubled labels")
    return SplitOrder(base, A, FiniteCyclicOrder(tuple(arr)))


def lemma_violations(S: SplitOrder, limit: int = 10) -> list[tuple]:
    """Triples of S breaking the two defining rules: base triples lift, and
    [a-, a+, u] for every other u."""
    out = []
    arr = S.arrangement
    for u, v, w in itertools.permutations(arr, 3):
        nu_u, nu_v, nu_w = S.nu(u), S.nu(v), S.nu(w)
        if len({nu_u, nu_v, nu_w}) == 3 and S.base.between(nu_u, nu_v, nu_w) != S.order.between(u, v, w):
            out.append(("lift", (u, v, w)))
        elif isinstance(u, SignedLabel) and u.sign == MINUS and v == SignedLabel(u.base, PLUS):
            if not S.order.between(u, v, w):
                out.append(("twin", (u, v, w)))
        if len(out) >= limit:
            break
    return out


def embeds_in_lex_product(S: SplitOrder) -> bool:
    """S is the subsequence of base x (-,+) keeping both signs over A and
    the '-' copy (renamed to the bare label) elsewhere."""
    lex = lex_product(S.base, (MINUS, PLUS)).arrangement
    kept = [x if x[0] in S.A else x[0] for x in lex if x[0] in S.A or x[1] == MINUS]
    kept = [SignedLabel(*x) if isinstance(x, tuple) and x[0] in S.A else x for x in kept]
    return FiniteCyclicOrder(tuple(kept)) == S.order


# uniqueness ------------------------------------------------------------------


@dataclass
class UniquenessResult:
    isomorphism: dict | None
    A: frozenset = frozenset()
    counterexample: Any = None

    def __bool__(self):
        return self.isomorphism is not None


def split_uniqueness_check(M: FiniteCyclicOrder, gamma: PointMap) -> UniquenessResult:
    """Recover the isomorphism M -> Split(base, A) for a COP map gamma onto
    the base whose fibers have size <= 2, with A the size-2 fibers."""
    base = gamma.codomain
    if not isinstance(base, FiniteCyclicOrder) or gamma.domain != M:
        raise InputError("gamma must map M onto a finite circular order")
    verdict = is_cop(gamma)
    if not verdict:
        raise InputError(f"gamma is not COP: {verdict.condition} fails at {verdict.witness!r}")
    fibers: dict = {b: [] for b in base.arrangement}
    for x in M.arrangement:
        fibers[gamma(x)].append(x)
    for b, fib in fibers.items():
        if not fib:
            raise InputError(f"gamma is not onto: nothing maps to {b!r}")
        if len(fib) > 2:
            raise InputError(f"fiber over {b!r} has {len(fib)} points")
    A = frozenset(b for b, fib in fibers.items() if len(fib) == 2)
    target = split(base, A)
    iso = {}
    for b, fib in fibers.items():
        if len(fib) == 1:
            iso[fib[0]] = b
            continue
        p, q = fib
        if M.successor(p) != q:
            p, q = q, p
        iso[p], iso[q] = SignedLabel(b, MINUS), SignedLabel(b, PLUS)
    if M.relabel(iso) != target.order:
        bad = next(
            (t for t in itertools.permutations(M.arrangement, 3) if M.between(*t) != target.order.between(*(iso[x] for x in t))),
            None,
        )
        return UniquenessResult(None, A, bad)
    return UniquenessResult(iso, A)


def factor_map(S2: SplitOrder, A1: Iterable) -> tuple[SplitOrder, PointMap]:
    """For A1 inside A2, the map eta: Split(X; A2) -> Split(X; A1) that
    glues the twins over A2 \\ A1; nu1 o eta = nu2."""
    A1 = frozenset(A1)
    if not A1 <= S2.A:
        raise InputError("A1 must be a subset of A2")
    S1 = split(S2.base, A1)
    mapping = {x: (x if S2.nu(x) in A1 else S2.nu(x)) for x in S2.arrangement}
    return S1, PointMap(S2.order, S1.order, mapping)


# circle samples ------------------------------------------------------------------


@dataclass
class SplitAction:
    """A finite window of Split(T, R_alpha; A) for a k = 1 rotation.

    ``points`` maps base labels (strings) to circle points; ``split`` is
    the split order over the sample; ``translations`` maps a shift n to the
    partial map x -> x + n*alpha restricted to labels whose image stays in
    the sample.
    """

    spec: AngleSpec
    points: dict
    split: SplitOrder
    translations: dict = field(default_factory=dict)

    def translation_cop(self) -> dict:
        return {n: bool(is_cop(f)) for n, f in self.translations.items()}


def _sorted_points(points: Sequence[CirclePoint]) -> list[CirclePoint]:
    def cmp(p, q):
        if compare(p, q).equal:
            return 0
        return -1 if less(p, q) else 1

    return sorted(points, key=functools.cmp_to_key(cmp))


def circle_order(points: Sequence[CirclePoint]) -> tuple[FiniteCyclicOrder, dict]:
    """Circular order of distinct circle points, labeled by their string form."""
    pts = _sorted_points(points)
    labels = [str(p) for p in pts]
    for p, q in zip(pts, pts[1:]):
        if compare(p, q).equal:
            raise InputError(f"points {p} and {q} coincide")
    return FiniteCyclicOrder(tuple(labels)), dict(zip(labels, pts))


def split_action(
    spec: AngleSpec,
    generators: Sequence[CirclePoint],
    z: CirclePoint | None = None,
    N: int = 10,
    shifts: Sequence[int] = (1, -1),
) -> SplitAction:
    """Sample the orbits of z and the generators for |n| <= N and split the
    points lying in A = orbit of the generators."""
    if spec.k != 1:
        raise InputError("split_action samples k = 1 rotations")
    z = spec.point() if z is None else z
    seeds = [z, *generators]
    raw = {}
    for seed in seeds:
        for n in range(-N, N + 1):
            p = act(spec, (n,), seed)
            raw.setdefault(p.value, p)
    order, points = circle_order(list(raw.values()))
    A = {lab for lab, p in points.items() if any(same_orbit(p, g) for g in generators)}
    S = split(order, A)
    by_value = {p.value: lab for lab, p in points.items()}
    translations = {}
    for n in shifts:
        image = {}
        for lab, p in points.items():
            q = act(spec, (n,), p)
            tgt = by_value.get(q.value)
            if tgt is not None:
                image[lab] = tgt
        dom_labels = [x for x in S.arrangement if S.nu(x) in image]
        mapping = {}
        for x in dom_labels:
            b = S.nu(x)
            mapping[x] = SignedLabel(image[b], x.sign) if isinstance(x, SignedLabel) else image[b]
        if dom_labels:
            translations[n] = PointMap(FiniteCyclicOrder(tuple(dom_labels)), S.order, mapping)
    return SplitAction(spec, points, S, translations)


def split_orbit_symbols(
    fplus: SplitColoring,
    z: CirclePoint,
    sign: str | None,
    coeffs: np.ndarray,
) -> np.ndarray:
    """f+ along the split orbit of z-sign: g(z+-) = (gz)+-, g z otherwise.

    The orbit of z lies in A iff z does, so membership is decided once.
    f+((gz)+) = f(gz); f+((gz)-) differs only where gz is a cut c_i, where
    it takes the color of the preceding arc.
    """
    coloring: Coloring = fplus.coloring
    in_A = fplus.in_split_set(z)
    if in_A and sign not in (MINUS, PLUS):
        raise InputError(f"{z} lies in the split set; choose '-' or '+'")
    if not in_A and sign is not None:
        raise InputError(f"{z} is not in the split set")
    coeffs = np.asarray(coeffs, dtype=np.int64).reshape(-1, z.spec.k)
    idx, exact = arc_indices(coloring.partition, z, coeffs, with_exact=True)
    colors = np.array(coloring.colors, dtype=np.uint8)
    out = colors[idx]
    if sign == MINUS:
        cuts = coloring.partition.cuts
        # only exactly-decided rows can sit on a cut
        for h in np.flatnonzero(exact):
            c_i = int(idx[h])
            p = CirclePoint(z.base, tuple(int(a) + int(b) for a, b in zip(z.coeffs, coeffs[h])), z.spec)
            if compare(p, cuts[c_i]).equal:
                out[h] = colors[(c_i - 1) % len(cuts)]
    return out


# double circle ------------------------------------------------------------------------


def double_circle_sample(n: int, markers: Iterable[int] = (), spec: AngleSpec | None = None) -> FiniteCyclicOrder:
    """The lexicographic product of the orbit sample {0, alpha, ..., (n-1)alpha}
    (labels 0..n-1, in circle order) with (-, +).

    Each marker m adds the isolated point sigma^m as (m, '0'), the unique
    point strictly between m- and m+.
    """
    if n < 1:
        raise InputError("need at least one base point")
    spec = spec or AngleSpec.from_strings("golden")
    pts = [act(spec, (k,), spec.point()) for k in range(n)]
    ranked = sorted(range(n), key=lambda k: pts[k].value.to_mpf(spec.precision))
    # sort is exact for a single radicand; double-check with the certified comparison
    for a, b in zip(ranked, ranked[1:]):
        if not less(pts[a], pts[b]):
            raise InputError("orbit points are not distinct")
    markers = set(markers)
    if not markers <= set(range(n)):
        raise InputError("markers must name base points 0..n-1")
    arr = []
    for k in ranked:
        arr.append(SignedLabel(k, MINUS))
        if k in markers:
            arr.append(SignedLabel(k, MARK))
        arr.append(SignedLabel(k, PLUS))
    return FiniteCyclicOrder(tuple(arr))


# rotation number ------------------------------------------------------------------------


@dataclass(frozen=True)
class RotationEstimate:
    estimate: Fraction
    N: int

    def to_json(self) -> dict:
        return {"estimate": float(self.estimate), "N": self.N, "ones": int(self.estimate * self.N)}


def rotation_number_estimate(symbols: Sequence[int], N: int | None = None) -> RotationEstimate:
    """Frequency of the symbol 1 among the first N symbols."""
    seq = np.asarray(symbols)
    N = len(seq) if N is None else N
    if N <= 0 or N > len(seq):
        raise InputError(f"need 0 < N <= {len(seq)}")
    head = seq[:N]
    if not np.isin(head, (0, 1)).all():
        raise InputError("rotation number estimates need a binary sequence")
    return RotationEstimate(Fraction(int(head.sum()), N), N)
