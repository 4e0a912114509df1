"""Finite-language comparison between a coding and its split-system model.

The coding phi = m(f, z) is read off directly by :func:`coding_pattern`.
The split side colors the split circle T_A, with A the orbit of the cut
points, by f+ and reads it along the orbit of z+ (or of z when z is not
split).  For a minimal action the orbit of z- has the same language, so it
is read as well; for periodic (all-rational) actions it is a different
orbit and is left out.  Both languages are collected over the same window
of group elements and compared as sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..coding import Coloring, coding_pattern, split_coloring
from ..errors import BudgetExceeded, InputError
from ..rotation import AngleSpec, CirclePoint
from ..coding import _box_coeffs
from ..split import MINUS, PLUS, split_orbit_symbols

DEFAULT_SAMPLE = 2_000
LANGUAGE_BUDGET = 2_000_000


def windows(pattern: np.ndarray, shape: Sequence[int]) -> set[bytes]:
    shape = tuple(shape)
    if any(s > n for s, n in zip(shape, pattern.shape)):
        return set()
    view = sliding_window_view(np.ascontiguousarray(pattern, dtype=np.uint8), shape)
    flat = view.reshape(-1, math.prod(shape))
    return {row.tobytes() for row in np.unique(flat, axis=0)}


@dataclass
class LanguageReport:
    shape: tuple[int, ...]
    coding_size: int
    split_size: int
    equal: bool
    only_coding: list
    only_split: list
    orbits: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "n": self.shape[0] if len(self.shape) == 1 else list(self.shape),
            "coding_language": self.coding_size,
            "split_language": self.split_size,
            "equal": self.equal,
            "only_coding": self.only_coding[:10],
            "only_split": self.only_split[:10],
            "orbits": list(self.orbits),
        }


def _decode(words: set[bytes], shape) -> list:
    out = []
    for w in sorted(words):
        arr = np.frombuffer(w, dtype=np.uint8).reshape(shape)
        out.append(arr.tolist())
    return out


def language_equality(
    spec: AngleSpec,
    coloring: Coloring,
    z: CirclePoint,
    shape: int | Sequence[int],
    sample: int = DEFAULT_SAMPLE,
    budget: int = LANGUAGE_BUDGET,
) -> LanguageReport:
    """Compare the n-windows (or box windows) of phi with those of f+ along
    the split orbit(s) over z, on a centered box of about ``sample`` cells."""
    shape = (shape,) if isinstance(shape, (int, np.integer)) else tuple(shape)
    if len(shape) != spec.k:
        raise InputError(f"window shape {shape} has the wrong dimension for k={spec.k}")
    side = max(1, math.ceil(sample ** (1.0 / spec.k)))
    box = [(-side // 2, -side // 2 + side + s - 2) for s in shape]
    volume = math.prod(hi - lo + 1 for lo, hi in box)
    if volume > budget:
        raise BudgetExceeded(f"language window of {volume} cells exceeds budget {budget}", volume)

    phi = coding_pattern(spec, coloring, z, box).symbols
    coding_lang = windows(phi, shape)

    # A = orbit of the cuts
    fplus = split_coloring(coloring, coloring.partition.cuts)
    coeffs, grid = _box_coeffs(box, budget)
    if not fplus.in_split_set(z):
        signs: tuple = (None,)
    else:
        signs = (MINUS, PLUS) if spec.minimal else (PLUS,)
    split_lang: set[bytes] = set()
    for sign in signs:
        symbols = split_orbit_symbols(fplus, z, sign, coeffs).reshape(grid)
        split_lang |= windows(symbols, shape)
    only_c = coding_lang - split_lang
    only_s = split_lang - coding_lang
    return LanguageReport(
        shape,
        len(coding_lang),
        len(split_lang),
        not only_c and not only_s,
        _decode(only_c, shape),
        _decode(only_s, shape),
        tuple(f"z{s or ''}" for s in signs),
    )
