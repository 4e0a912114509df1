"""Independent brute-force oracles used to freeze expected values.

Nothing here imports from cyclord: each oracle re-derives its answer from
definitions by enumeration or high-precision floating point.
"""

from __future__ import annotations

import itertools

import mpmath


def axioms_hold(ground, triples) -> bool:
    R = set(triples)
    for a, b, c in R:
        if (b, c, a) not in R:
            return False
        if (a, c, b) in R:
            return False
    for (a, b, c), (a2, c2, d) in itertools.product(R, R):
        if a == a2 and c == c2 and (a, b, d) not in R:
            return False
    for a, b, c in itertools.permutations(ground, 3):
        if (a, b, c) not in R and (a, c, b) not in R:
            return False
    return True


def sign_between(arrangement, a, b, c) -> bool:
    """[a,b,c] from positions via the sign rule (y-x)(z-y)(z-x) > 0."""
    x, y, z = (arrangement.index(t) for t in (a, b, c))
    return (y - x) * (z - y) * (z - x) > 0


def brute_is_cycle(arrangement, v) -> bool:
    """Runs of equal entries must be contiguous blocks whose values go once
    around the circle in order."""
    n = len(v)
    if n == 0:
        return True
    if len(set(v)) == 1:
        return True
    # rotate so that v[0] starts a block
    start = next(i for i in range(n) if v[i] != v[i - 1])
    w = list(v[start:]) + list(v[:start])
    blocks = [w[0]]
    for x in w[1:]:
        if x != blocks[-1]:
            blocks.append(x)
    if len(blocks) != len(set(blocks)):
        return False
    pos = [arrangement.index(x) for x in blocks]
    m = pos.index(min(pos))
    pos = pos[m:] + pos[:m]
    return pos == sorted(pos)


def cycles_up_to(arrangement, max_len):
    for m in range(1, max_len + 1):
        for v in itertools.product(arrangement, repeat=m):
            if brute_is_cycle(arrangement, v):
                yield v


def fibonacci_oracle(count: int, dps: int = 60) -> list[int]:
    with mpmath.workdps(dps):
        alpha = (mpmath.sqrt(5) - 1) / 2
        t = 1 - alpha
        out = []
        for n in range(count):
            x = n * alpha
            x = x - mpmath.floor(x)
            out.append(0 if x < t else 1)
        return out


def rotation_coding_oracle(alpha_expr, t_expr, count, start=0, dps=60):
    """s_n = 0 iff frac(n*alpha) in [0, t); arguments are mpmath callables."""
    with mpmath.workdps(dps):
        alpha = alpha_expr()
        t = t_expr()
        out = []
        for n in range(start, start + count):
            x = n * alpha
            x = x - mpmath.floor(x)
            out.append(0 if x < t else 1)
        return out


def distinct_factors(seq, n) -> int:
    return len({tuple(seq[i:i + n]) for i in range(len(seq) - n + 1)})


def brute_circular_variation(arrangement, values, max_len):
    """sup over all cycles of length <= max_len of the wraparound sum."""
    best = 0
    for v in cycles_up_to(arrangement, max_len):
        s = sum(abs(values[v[i]] - values[v[(i + 1) % len(v)]]) for i in range(len(v)))
        best = max(best, s)
    return best


def brute_min_cover(sets, universe) -> int:
    """Smallest number of sets whose union contains ``universe``."""
    universe = frozenset(universe)
    for r in range(1, len(sets) + 1):
        for combo in itertools.combinations(sets, r):
            if universe <= frozenset().union(*combo):
                return r
    raise ValueError("not a cover")


def brute_independent(rows) -> bool:
    """0/1 rows: every 0/1 pattern over the rows occurs in some column."""
    seen = {tuple(col) for col in zip(*rows)}
    return all(pat in seen for pat in itertools.product((0, 1), repeat=len(rows)))


def brute_independence_size(family, cap) -> int:
    best = 0
    for r in range(1, cap + 1):
        if any(brute_independent([family[i] for i in combo]) for combo in itertools.combinations(range(len(family)), r)):
            best = r
    return best


def arc_contains(s: float, t: float, x: float) -> bool:
    """Open arc from s counterclockwise to t."""
    length = (t - s) % 1.0
    off = (x - s) % 1.0
    return 0 < off < length


def probe_points(endpoints):
    """Endpoints and the midpoints between consecutive ones."""
    pts = sorted({e % 1.0 for e in endpoints})
    mids = [(a + b) / 2 for a, b in zip(pts, pts[1:])] + [((pts[-1] + pts[0] + 1) / 2) % 1.0]
    return pts + mids
