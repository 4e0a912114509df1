"""Finite circular orders: axioms, betweenness, cycles, COP maps, cuts.

A finite circular order is stored as an *arrangement*: the labels listed
once around the circle.  ``[a, b, c]`` holds iff a, b, c are distinct and
appear in this cyclic order.  Arrangements are normalized by rotating the
least label (under :func:`label_key`) to the front, so two orders are equal
iff their arrangements are equal.

Explicit ternary relations (:class:`TernaryRelation`) exist only to validate
untrusted input against the four axioms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Mapping, NamedTuple, Sequence, Union

import numpy as np

from .errors import BudgetExceeded, InputError

Label = Hashable

VALIDATION_LIMIT = 60

AXIOMS = ("Cyclicity", "Asymmetry", "Transitivity", "Totality")


class SignedLabel(NamedTuple):
    """A doubled copy of ``base``: sign '-' or '+' (or '0' for a marker)."""

    base: Any
    sign: str

    def __str__(self):
        return f"{self.base}{self.sign}"


_SIGN_RANK = {"-": 0, "0": 1, "+": 2}


def label_key(x) -> tuple:
    """Total sort key over mixed label types (numbers < strings < tuples).

    The sign strings sort as '-' < '0' < '+' ahead of other strings, so a
    doubled point a- normalizes in front of its twin a+.
    """
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, (int, float)) or type(x).__name__ == "Fraction":
        return (0, x)
    if isinstance(x, str):
        if x in _SIGN_RANK:
            return (1, "", _SIGN_RANK[x])
        return (1, x)
    if isinstance(x, tuple):
        return (2, tuple(label_key(y) for y in x))
    return (3, repr(x))


def _check_distinct(seq: Sequence[Label]) -> None:
    if len(set(seq)) != len(seq):
        seen, dup = set(), None
        for x in seq:
            if x in seen:
                dup = x
                break
            seen.add(x)
        raise InputError(f"duplicate label {dup!r}")


@dataclass(frozen=True)
class FiniteCyclicOrder:
    arrangement: tuple

    def __post_init__(self):
        arr = tuple(self.arrangement)
        _check_distinct(arr)
        if arr:
            i = min(range(len(arr)), key=lambda j: label_key(arr[j]))
            arr = arr[i:] + arr[:i]
        object.__setattr__(self, "arrangement", arr)

    @cached_property
    def position(self) -> dict:
        return {x: i for i, x in enumerate(self.arrangement)}

    @property
    def ground(self) -> frozenset:
        return frozenset(self.arrangement)

    def __len__(self):
        return len(self.arrangement)

    def __iter__(self):
        return iter(self.arrangement)

    def __contains__(self, x):
        return x in self.position

    def index(self, x) -> int:
        try:
            return self.position[x]
        except KeyError:
            raise InputError(f"unknown label {x!r}") from None

    def successor(self, x, steps: int = 1):
        n = len(self.arrangement)
        return self.arrangement[(self.index(x) + steps) % n]

    def between(self, a, b, c) -> bool:
        i, j, k = self.index(a), self.index(b), self.index(c)
        return i < j < k or j < k < i or k < i < j

    def relabel(self, mapping: Mapping) -> "FiniteCyclicOrder":
        return FiniteCyclicOrder(tuple(mapping[x] for x in self.arrangement))

    def to_json(self) -> dict:
        from .jsonio import encode_label

        return {"arrangement": [encode_label(x) for x in self.arrangement]}


def betweenness(order: FiniteCyclicOrder, a, b, c) -> bool:
    """``[a, b, c]``: distinct and in cyclic order."""
    return order.between(a, b, c)


def interval(order: FiniteCyclicOrder, a, b, closed: bool = False) -> set:
    """The oriented interval ``(a, b) = {x : [a, x, b]}``; ``closed`` adds a, b."""
    if a == b:
        raise InputError("interval endpoints must differ")
    n = len(order)
    i, j = order.index(a), order.index(b)
    out = set()
    m = (i + 1) % n
    while m != j:
        out.add(order.arrangement[m])
        m = (m + 1) % n
    if closed:
        out |= {a, b}
    return out


def standard_corder_from_linear(seq: Sequence[Label]) -> FiniteCyclicOrder:
    """The circular order ``R_<`` of a linear order: read the sequence cyclically."""
    return FiniteCyclicOrder(tuple(seq))


@dataclass(frozen=True)
class LinearCut:
    """The cut ``X(c) = [c-, c+]`` of a circular order at ``cutpoint``."""

    base: FiniteCyclicOrder
    cutpoint: Any
    order: tuple

    @property
    def minus(self) -> SignedLabel:
        return SignedLabel(self.cutpoint, "-")

    @property
    def plus(self) -> SignedLabel:
        return SignedLabel(self.cutpoint, "+")

    @cached_property
    def position(self) -> dict:
        return {x: i for i, x in enumerate(self.order)}

    @property
    def ground(self) -> frozenset:
        return frozenset(self.order)

    def __len__(self):
        return len(self.order)

    def less(self, x, y) -> bool:
        return self.position[x] < self.position[y]

    def as_corder(self) -> FiniteCyclicOrder:
        return standard_corder_from_linear(self.order)

    def restore(self) -> FiniteCyclicOrder:
        """Drop c+, rename c- to c, and close the chain into a circle."""
        return standard_corder_from_linear(
            [self.cutpoint if x == self.minus else x for x in self.order[:-1]]
        )

    def projection(self) -> "PointMap":
        """The quotient ``q: X(c) -> X`` gluing c- and c+."""
        mapping = {x: x for x in self.order[1:-1]}
        mapping[self.minus] = self.cutpoint
        mapping[self.plus] = self.cutpoint
        return PointMap(self, self.base, mapping)


def cut_at(order: FiniteCyclicOrder, c) -> LinearCut:
    """Open the circle at ``c``: c- < x < y < c+ where x < y iff [c, x, y]."""
    i = order.index(c)
    rest = order.arrangement[i + 1:] + order.arrangement[:i]
    chain = (SignedLabel(c, "-"),) + rest + (SignedLabel(c, "+"),)
    return LinearCut(order, c, chain)


def _as_corder(obj) -> FiniteCyclicOrder:
    if isinstance(obj, FiniteCyclicOrder):
        return obj
    if isinstance(obj, LinearCut):
        return obj.as_corder()
    raise InputError(f"expected a FiniteCyclicOrder or LinearCut, got {type(obj).__name__}")


@dataclass(frozen=True)
class PointMap:
    domain: Union[FiniteCyclicOrder, LinearCut]
    codomain: Union[FiniteCyclicOrder, LinearCut]
    mapping: Mapping = field(compare=False)

    def __post_init__(self):
        dom, cod = self.domain.ground, self.codomain.ground
        missing = dom - set(self.mapping)
        if missing:
            raise InputError(f"map is not total: no image for {sorted(missing, key=label_key)!r}")
        for x, y in self.mapping.items():
            if x not in dom:
                raise InputError(f"{x!r} is not in the domain")
            if y not in cod:
                raise InputError(f"image {y!r} of {x!r} is not in the codomain")
        object.__setattr__(self, "mapping", dict(self.mapping))

    def __call__(self, x):
        return self.mapping[x]

    def to_json(self) -> dict:
        from .jsonio import label_str, encode_label

        return {"map": {label_str(x): encode_label(y) for x, y in self.mapping.items()}}


def identity_map(order: FiniteCyclicOrder) -> PointMap:
    return PointMap(order, order, {x: x for x in order})


def rotation_map(order: FiniteCyclicOrder, steps: int) -> PointMap:
    return PointMap(order, order, {x: order.successor(x, steps) for x in order})


def is_cycle(order: FiniteCyclicOrder, v: Sequence) -> bool:
    """Whether the vector ``v`` is a cycle in ``order``.

    (1) indices in cyclic order with distinct entries carry entries in cyclic
    order; (2) equal entries v_i = v_k force v to be constant along one of
    the two index arcs from i to k.
    """
    for x in v:
        order.index(x)
    n = len(v)
    for i, j, k in itertools.combinations(range(n), 3):
        a, b, c = v[i], v[j], v[k]
        if a != b and b != c and a != c and not order.between(a, b, c):
            return False
    for i, k in itertools.permutations(range(n), 2):
        if v[i] != v[k]:
            continue
        forward = all(v[m % n] == v[i] for m in range(i, i + (k - i) % n + 1))
        backward = all(v[m % n] == v[i] for m in range(k, k + (i - k) % n + 1))
        if not (forward or backward):
            return False
    return True


@dataclass(frozen=True)
class CopVerdict:
    cop: bool
    witness: tuple | None = None
    condition: str | None = None  # "betweenness" or "constancy"

    def __bool__(self):
        return self.cop


def is_cop(f: PointMap) -> CopVerdict:
    """Check both COP conditions; return a witness when one fails.

    (1) for i < j < k in the domain arrangement with pairwise distinct
    images, the images are in cyclic order; (2) the preimage of every value
    is one cyclic block, so equal images are constant along one of the two
    arcs between them.
    """
    dom = _as_corder(f.domain)
    cod = _as_corder(f.codomain)
    arr = dom.arrangement
    n = len(arr)
    pos = np.array([cod.index(f(x)) for x in arr], dtype=np.int64)
    for i in range(n - 2):
        d = np.sign(pos[i + 1:] - pos[i])  # image of i versus later images
        step = np.sign(pos[None, i + 1:] - pos[i + 1:, None])  # [j, k]: sign(p_k - p_j)
        bad = (d[:, None] * step * d[None, :]) < 0
        bad &= np.triu(np.ones_like(bad), 1)
        if bad.any():
            j, k = (int(x) + i + 1 for x in np.argwhere(bad)[0])
            return CopVerdict(False, (arr[i], arr[j], arr[k]), "betweenness")
    for value in np.unique(pos):
        idx = np.flatnonzero(pos == value)
        if len(idx) in (1, n):
            continue
        gaps = np.flatnonzero(np.diff(np.append(idx, idx[0] + n)) > 1)
        if len(gaps) > 1:
            # two separate runs: the first index of the run after each gap
            i, k = idx[(gaps[0] + 1) % len(idx)], idx[(gaps[1] + 1) % len(idx)]
            i, k = sorted((int(i), int(k)))
            return CopVerdict(False, (arr[i], arr[k]), "constancy")
    return CopVerdict(True)


def compose_cop(f: PointMap, g: PointMap) -> PointMap:
    """``g o f``; the codomain of f must be the domain of g."""
    if f.codomain != g.domain:
        raise InputError("cannot compose: codomain of f differs from domain of g")
    return PointMap(f.domain, g.codomain, {x: g(f(x)) for x in f.mapping})


def lex_product(K: FiniteCyclicOrder, L: Sequence) -> FiniteCyclicOrder:
    """c-ordered lexicographic product ``K x L`` with ``L`` linearly ordered."""
    L = tuple(L)
    if not len(K) or not L:
        raise InputError("lexicographic product needs nonempty factors")
    _check_distinct(L)
    return FiniteCyclicOrder(tuple((k, l) for k in K.arrangement for l in L))


# explicit relations ---------------------------------------------------------


class TernaryRelation:
    """A set of triples over a finite ground set.

    Backed by a boolean tensor over the ground labels (sorted by
    :func:`label_key`); the triple set is materialized on demand.
    """

    def __init__(self, ground: Iterable, triples: Iterable):
        self.ground = frozenset(ground)
        triples = frozenset(tuple(t) for t in triples)
        for t in triples:
            if len(t) != 3:
                raise InputError(f"not a triple: {t!r}")
        stray = frozenset(itertools.chain.from_iterable(triples)) - self.ground
        if stray:
            bad = next(t for t in triples if not set(t) <= self.ground)
            raise InputError(f"label {sorted(stray, key=label_key)[0]!r} of triple {bad!r} is not in the ground set")
        self.__dict__["triples"] = triples

    @cached_property
    def labels(self) -> list:
        return sorted(self.ground, key=label_key)

    @cached_property
    def _index(self) -> dict:
        return {x: i for i, x in enumerate(self.labels)}

    @cached_property
    def tensor(self) -> np.ndarray:
        """Boolean array T with T[i, j, k] iff (labels[i], labels[j], labels[k]) is a triple."""
        idx = self._index
        n = len(idx)
        T = np.zeros((n, n, n), dtype=bool)
        if self.triples:
            coords = np.array([[idx[a], idx[b], idx[c]] for a, b, c in self.triples])
            T[coords[:, 0], coords[:, 1], coords[:, 2]] = True
        return T

    @cached_property
    def triples(self) -> frozenset:
        L = self.labels
        return frozenset((L[i], L[j], L[k]) for i, j, k in np.argwhere(self.tensor))

    def __eq__(self, other):
        if not isinstance(other, TernaryRelation):
            return NotImplemented
        return self.ground == other.ground and self.triples == other.triples

    def __hash__(self):
        return hash((self.ground, self.triples))

    def __repr__(self):
        return f"TernaryRelation(ground={set(self.ground)!r}, {len(self.triples)} triples)"

    def toggled(self, triple) -> "TernaryRelation":
        """The relation with ``triple`` added if absent, removed if present."""
        triple = tuple(triple)
        if len(triple) != 3 or not set(triple) <= self.ground:
            raise InputError(f"cannot toggle {triple!r}")
        i, j, k = (self._index[x] for x in triple)
        T = self.tensor.copy()
        T[i, j, k] = not T[i, j, k]
        new = object.__new__(TernaryRelation)
        new.ground = self.ground
        new.__dict__.update(labels=self.labels, _index=self._index, tensor=T)
        return new

    def to_json(self) -> dict:
        from .jsonio import encode_label

        return {
            "ground": [encode_label(x) for x in self.labels],
            "triples": [[encode_label(x) for x in t] for t in sorted(self.triples, key=label_key)],
        }


def derived_relation(order: FiniteCyclicOrder) -> TernaryRelation:
    arr = order.arrangement
    triples = set()
    for i, j, k in itertools.combinations(range(len(arr)), 3):
        a, b, c = arr[i], arr[j], arr[k]
        triples.update(((a, b, c), (b, c, a), (c, a, b)))
    return TernaryRelation(frozenset(arr), frozenset(triples))


@dataclass
class ValidationReport:
    is_corder: bool
    violations: list = field(default_factory=list)  # (axiom, witness)

    def __bool__(self):
        return self.is_corder


def validate_circular_order(
    rel: TernaryRelation,
    limit: int = VALIDATION_LIMIT,
    fail_fast: bool = False,
    max_violations: int = 100,
) -> ValidationReport:
    """Check Cyclicity, Asymmetry, Transitivity and Totality.

    Every violation carries the axiom name and witness triple(s).  When all
    four axioms hold, the two derived properties (distinct entries, and
    [c,a,x] & [c,x,b] => [a,x,b]) are also checked; a failure there is an
    internal error.  Ground sets larger than ``limit`` are refused.
    """
    n = len(rel.ground)
    if n == 0:
        raise InputError("empty ground set")
    if n > limit:
        raise BudgetExceeded(f"ground set of size {n} exceeds validation limit {limit}", n**4)
    T = rel.tensor
    L = rel.labels
    report = ValidationReport(True)

    def record(axiom, hits, witness):
        room = 1 if fail_fast else max_violations - len(report.violations)
        for hit in zip(*np.unravel_index(hits[:room], T.shape)):
            report.violations.append((axiom, witness(*map(int, hit))))
        report.is_corder = False
        return fail_fast or len(report.violations) >= max_violations

    def lab(*ix):
        return tuple(L[i] for i in ix)

    # [a,b,c] => [b,c,a]
    hits = np.flatnonzero(T & ~_rot(T))
    if len(hits) and record("Cyclicity", hits, lambda a, b, c: (lab(a, b, c), lab(b, c, a))):
        return report
    # [a,b,c] => not [a,c,b]
    hits = np.flatnonzero(T & T.transpose(0, 2, 1))
    if len(hits) and record("Asymmetry", hits, lambda a, b, c: (lab(a, b, c), lab(a, c, b))):
        return report
    # [a,b,c] & [a,c,d] => [a,b,d]
    Ti = T.astype(np.int32)
    paths = np.matmul(Ti, Ti)  # paths[a, b, d] = #{c : [a,b,c] and [a,c,d]}
    hits = np.flatnonzero((paths > 0) & ~T)

    def trans_witness(a, b, d):
        c = int(np.argmax(T[a, b, :] & T[a, :, d]))
        return (lab(a, b, c), lab(a, c, d))

    if len(hits) and record("Transitivity", hits, trans_witness):
        return report
    # distinct a, b, c => [a,b,c] or [a,c,b]
    hits = np.flatnonzero(_increasing_mask(n) & ~(T | T.transpose(0, 2, 1)))
    if len(hits) and record("Totality", hits, lambda a, b, c: (lab(a, b, c),)):
        return report
    if not report.is_corder:
        return report

    if (T & ~_distinct_mask(n)).any():
        raise RuntimeError("internal error: axioms hold but a triple repeats a label")
    derived = np.einsum("cax,cxb->axb", Ti, Ti)  # #{c : [c,a,x] and [c,x,b]}
    bad = np.argwhere((derived > 0) & ~T)
    if len(bad):
        raise RuntimeError(f"internal error: derived transitivity fails at {lab(*bad[0])!r}")
    return report


def _rot(T: np.ndarray) -> np.ndarray:
    """U[a, b, c] = T[b, c, a]."""
    return T.transpose(2, 0, 1)


_MASKS: dict[int, np.ndarray] = {}
_INCREASING: dict[int, np.ndarray] = {}


def _increasing_mask(n: int) -> np.ndarray:
    if n not in _INCREASING:
        i, j, k = np.indices((n, n, n))
        _INCREASING[n] = (i < j) & (j < k)
    return _INCREASING[n]


def _distinct_mask(n: int) -> np.ndarray:
    if n not in _MASKS:
        i, j, k = np.indices((n, n, n))
        _MASKS[n] = (i != j) & (j != k) & (i != k)
    return _MASKS[n]


def relation_to_order(rel: TernaryRelation) -> FiniteCyclicOrder:
    """Recover the arrangement of a validated relation."""
    report = validate_circular_order(rel)
    if not report:
        raise InputError(f"not a circular order: {report.violations[0]}")
    labels = rel.labels
    if len(labels) < 3:
        return FiniteCyclicOrder(tuple(labels))
    first, rest = labels[0], labels[1:]
    # x precedes y after the cut at `first` iff [first, x, y]
    ranked = sorted(rest, key=lambda x: sum((first, y, x) in rel.triples for y in rest))
    return FiniteCyclicOrder((first, *ranked))
