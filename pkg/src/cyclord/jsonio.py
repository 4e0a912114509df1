"""JSON encoding of labels, orders, relations and maps.

Labels may be ints, strings or (nested) tuples; tuples travel as JSON lists
and come back as tuples.  Object keys must be strings, so maps keyed by
labels use :func:`label_str` (strings verbatim, anything else as compact
JSON).  A string label ``"1"`` and the integer ``1`` are therefore not
distinguishable as map keys.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .corder import FiniteCyclicOrder, LinearCut, PointMap, TernaryRelation
from .errors import InputError


def encode_label(x):
    if isinstance(x, tuple):
        return [encode_label(y) for y in x]
    if isinstance(x, (int, str)) or x is None:
        return x
    if isinstance(x, Fraction):
        return str(x)
    return str(x)


def decode_label(x):
    if isinstance(x, list):
        return tuple(decode_label(y) for y in x)
    if isinstance(x, (int, str)):
        return x
    raise InputError(f"unsupported label {x!r}")


def label_str(x) -> str:
    if isinstance(x, str):
        return x
    return json.dumps(encode_label(x), separators=(",", ":"))


def order_from_json(data) -> FiniteCyclicOrder:
    try:
        arr = data["arrangement"]
    except (KeyError, TypeError):
        raise InputError("expected an object with an 'arrangement' list") from None
    if not isinstance(arr, list):
        raise InputError("'arrangement' must be a list")
    return FiniteCyclicOrder(tuple(decode_label(x) for x in arr))


def relation_from_json(data) -> TernaryRelation:
    try:
        ground = [decode_label(x) for x in data["ground"]]
        triples = [tuple(decode_label(x) for x in t) for t in data["triples"]]
    except (KeyError, TypeError):
        raise InputError("expected an object with 'ground' and 'triples'") from None
    return TernaryRelation(frozenset(ground), frozenset(triples))


def map_from_json(data, domain, codomain) -> PointMap:
    try:
        raw = data["map"]
    except (KeyError, TypeError):
        raise InputError("expected an object with a 'map' object") from None
    if not isinstance(raw, dict):
        raise InputError("'map' must be an object")
    labels = domain.order if isinstance(domain, LinearCut) else domain.arrangement
    by_str = {label_str(x): x for x in labels}
    mapping = {}
    for key, value in raw.items():
        if key not in by_str:
            raise InputError(f"map key {key!r} is not a domain label")
        mapping[by_str[key]] = decode_label(value)
    return PointMap(domain, codomain, mapping)


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, compact separators)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
