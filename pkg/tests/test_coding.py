import random
import warnings
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from cyclord.coding import (
    Coloring,
    CyclicPartition,
    SplitPoint,
    arc_indices,
    coding_pattern,
    color,
    split_coloring,
    sturmian_bisequence,
)
from cyclord.errors import InputError
from cyclord.rotation import AngleSpec, NonMinimalWarning, act, parse_point

from oracles import fibonacci_oracle, rotation_coding_oracle

GOLDEN = AngleSpec.from_strings("golden")


def quiet_spec(text):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonMinimalWarning)
        return AngleSpec.from_strings(text)


def quarters(spec=GOLDEN):
    return Coloring.standard(CyclicPartition.parse(spec, "0,1/4,1/2,3/4"))


# partitions and colorings ---------------------------------------------------------


def test_color_examples():
    c = quarters()
    assert color(c, parse_point(GOLDEN, "0.3")) == 1
    assert color(c, parse_point(GOLDEN, "1/2")) == 2
    assert color(c, parse_point(GOLDEN, "0")) == 0
    assert color(c, parse_point(GOLDEN, "0.99")) == 3
    binary = Coloring.standard(CyclicPartition.parse(GOLDEN, "0,1-alpha"))
    p = act(GOLDEN, (3,), GOLDEN.point())
    with mpmath.workdps(40):
        phi = (mpmath.sqrt(5) - 1) / 2
        assert mpmath.frac(3 * phi) >= 1 - phi
    assert color(binary, p) == 1


def test_partition_must_be_cyclic_and_distinct():
    with pytest.raises(InputError):
        CyclicPartition.parse(GOLDEN, "0,1/2,1/4")
    with pytest.raises(InputError):
        CyclicPartition.parse(GOLDEN, "0,1/2,1/2")
    # any rotation of a cyclic list is fine
    part = CyclicPartition.parse(GOLDEN, "1/2,3/4,0,1/4")
    assert part.arc_of(parse_point(GOLDEN, "0.1")) == 2
    assert part.arc_of(parse_point(GOLDEN, "0.8")) == 1


def test_wrapping_arc():
    part = CyclicPartition.parse(GOLDEN, "1/4,3/4")
    assert part.arc_of(parse_point(GOLDEN, "0.9")) == 1
    assert part.arc_of(parse_point(GOLDEN, "0.1")) == 1
    assert part.arc_of(parse_point(GOLDEN, "0.5")) == 0


def test_properness():
    part = CyclicPartition.parse(GOLDEN, "0,1/4,1/2,3/4")
    assert Coloring.standard(part).proper
    assert not Coloring(part, (0, 1, 0, 1)).proper
    with pytest.raises(InputError):
        Coloring(part, (0, 1))


def test_constant_coloring():
    c = Coloring(CyclicPartition.parse(GOLDEN, "0"), (0,))
    pat = coding_pattern(GOLDEN, c, GOLDEN.point(), [(0, 50)])
    assert set(pat.symbols.tolist()) == {0}


# Sturmian sequences -------------------------------------------------------------------


def test_fibonacci_prefix():
    assert sturmian_bisequence("golden", "1-alpha", 0, (0, 4)) == [0, 1, 0, 1, 1]


def test_fibonacci_matches_oracle():
    assert sturmian_bisequence("golden", "1-alpha", 0, (0, 999)) == fibonacci_oracle(1000)


def test_negative_indices_match_oracle():
    seq = sturmian_bisequence("sqrt2m1", "1-alpha", 0, (-200, 200))
    oracle = rotation_coding_oracle(lambda: mpmath.sqrt(2) - 1, lambda: 2 - mpmath.sqrt(2), 401, start=-200)
    assert seq == oracle


def test_basepoint_on_cut_uses_closed_left_rule():
    assert sturmian_bisequence("golden", "1-alpha", "1-alpha", (0, 0)) == [1]


def test_rational_periodic_coding():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonMinimalWarning)
        assert sturmian_bisequence("1/3", "1/3", 0, (0, 5)) == [0, 1, 1, 0, 1, 1]


def test_t_must_be_inside_circle():
    with pytest.raises(InputError):
        sturmian_bisequence("golden", "0", 0, (0, 3))


def test_float_filter_agrees_with_exact_path():
    spec = AngleSpec.from_strings("golden,sqrt2m1")
    part = CyclicPartition.parse(spec, "0,alpha2+alpha1,1/2,alpha1")
    z = parse_point(spec, "1/7+alpha2")
    rng = random.Random(0)
    coeffs = np.array([[rng.randint(-10**5, 10**5), rng.randint(-10**5, 10**5)] for _ in range(300)])
    # include points sitting exactly on cuts
    coeffs = np.vstack([coeffs, [[-0, -1], [1, -1], [0, 0]]])
    fast = arc_indices(part, z, coeffs)
    for s, got in zip(coeffs, fast):
        p = act(spec, tuple(int(x) for x in s), z)
        assert part.arc_of(p) == got


def test_huge_coefficients_use_exact_path():
    part = CyclicPartition.parse(GOLDEN, "0,1-alpha")
    n = 10**15
    fast = arc_indices(part, GOLDEN.point(), np.array([[n]]))
    assert fast[0] == part.arc_of(act(GOLDEN, (n,), GOLDEN.point()))


# multidimensional patterns ----------------------------------------------------------------


def test_single_cell_pattern():
    c = quarters()
    z = parse_point(GOLDEN, "0.3")
    assert coding_pattern(GOLDEN, c, z, [(0, 0)]).symbols.tolist() == [color(c, z)]


def test_k1_pattern_is_sturmian():
    binary = Coloring.standard(CyclicPartition.parse(GOLDEN, "0,1-alpha"))
    pat = coding_pattern(GOLDEN, binary, GOLDEN.point(), [(-10, 999)])
    assert pat.symbols.tolist() == sturmian_bisequence("golden", "1-alpha", 0, (-10, 999))


def test_two_dimensional_pattern_against_oracle():
    spec = AngleSpec.from_strings("golden,1/4")
    c = Coloring.standard(CyclicPartition.parse(spec, "0,1/2"))
    pat = coding_pattern(spec, c, spec.point(), [(0, 1), (0, 1)])
    with mpmath.workdps(40):
        phi = (mpmath.sqrt(5) - 1) / 2
        oracle = [[0 if mpmath.frac(i * phi + mpmath.mpf(j) / 4) < 0.5 else 1 for j in range(2)] for i in range(2)]
    assert pat.symbols.tolist() == oracle == [[0, 0], [1, 1]]
    assert pat.to_json() == {"box": [[0, 1], [0, 1]], "symbols": [[0, 0], [1, 1]]}


def test_equivariance():
    spec = AngleSpec.from_strings("golden,sqrt2m1")
    c = Coloring.standard(CyclicPartition.parse(spec, "0,1/3,alpha2"))
    z = parse_point(spec, "1/5")
    box = [(-4, 4), (-3, 3)]
    base = coding_pattern(spec, c, z, [(-30, 30), (-30, 30)])
    rng = random.Random(4)
    for _ in range(20):
        g = (rng.randint(-20, 20), rng.randint(-20, 20))
        shifted = coding_pattern(spec, c, act(spec, g, z), box)
        for s0 in range(-4, 5):
            for s1 in range(-3, 4):
                assert shifted[(s0, s1)] == base[(s0 + g[0], s1 + g[1])]


def test_proper_coloring_shows_every_symbol():
    c = quarters()
    pat = coding_pattern(GOLDEN, c, GOLDEN.point(), [(0, 999)])
    assert set(pat.symbols.tolist()) == {0, 1, 2, 3}


# the split coloring ----------------------------------------------------------------------


def test_split_coloring_at_cuts():
    c = quarters()
    cuts = c.partition.cuts
    fplus = split_coloring(c, cuts)
    for i, ci in enumerate(cuts):
        assert fplus(SplitPoint(ci, "+")) == i
        assert fplus(SplitPoint(ci, "-")) == (i - 1) % 4
        assert fplus(SplitPoint(ci, "-")) != fplus(SplitPoint(ci, "+"))


def test_split_coloring_off_cuts():
    c = Coloring.standard(CyclicPartition.parse(GOLDEN, "0,1-alpha"))
    fplus = split_coloring(c, [GOLDEN.point()])
    # orbit points of 0 are split; those not on a cut keep the arc color on both sides
    for n in range(2, 30):
        p = act(GOLDEN, (n,), GOLDEN.point())
        assert fplus(SplitPoint(p, "-")) == fplus(SplitPoint(p, "+")) == color(c, p)
    q = parse_point(GOLDEN, "0.3")
    assert fplus(SplitPoint(q)) == color(c, q)
    with pytest.raises(InputError):
        fplus(SplitPoint(q, "+"))
    with pytest.raises(InputError):
        fplus(SplitPoint(GOLDEN.point()))


def test_split_set_must_contain_cut_orbits():
    c = quarters()
    with pytest.raises(InputError):
        split_coloring(c, [GOLDEN.point()])
