import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclord.corder import (
    FiniteCyclicOrder,
    PointMap,
    SignedLabel,
    TernaryRelation,
    betweenness,
    compose_cop,
    cut_at,
    derived_relation,
    identity_map,
    interval,
    is_cop,
    is_cycle,
    lex_product,
    relation_to_order,
    rotation_map,
    standard_corder_from_linear,
    validate_circular_order,
)
from cyclord.errors import BudgetExceeded, InputError

from oracles import axioms_hold, brute_is_cycle, cycles_up_to, sign_between


def C(n):
    return FiniteCyclicOrder(tuple(range(n)))


def random_order(rng, n):
    labels = rng.sample(range(100), n)
    return FiniteCyclicOrder(tuple(labels))


# validation -----------------------------------------------------------------


def test_c3_is_a_circular_order():
    rel = TernaryRelation(frozenset({0, 1, 2}), frozenset({(0, 1, 2), (1, 2, 0), (2, 0, 1)}))
    assert validate_circular_order(rel).is_corder


def test_asymmetry_violation_is_reported():
    rel = TernaryRelation(
        frozenset({0, 1, 2}), frozenset({(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1)})
    )
    report = validate_circular_order(rel)
    assert not report.is_corder
    assert ("Asymmetry", ((0, 1, 2), (0, 2, 1))) in report.violations


def test_derived_relation_of_c4_passes_and_matches_brute_force():
    rel = derived_relation(C(4))
    assert axioms_hold(rel.ground, rel.triples)
    assert validate_circular_order(rel).is_corder


def test_labels_outside_ground_are_rejected():
    with pytest.raises(InputError):
        TernaryRelation(frozenset({0, 1}), frozenset({(0, 1, 2)}))


def test_validation_refuses_large_ground_sets():
    rel = derived_relation(C(61))
    with pytest.raises(BudgetExceeded):
        validate_circular_order(rel)
    assert validate_circular_order(rel, limit=61).is_corder


@pytest.mark.parametrize("n", [1, 2])
def test_tiny_orders_are_valid_with_empty_betweenness(n):
    rel = derived_relation(C(n))
    assert rel.triples == frozenset()
    assert validate_circular_order(rel).is_corder


def test_each_axiom_can_fail_alone():
    # totality: drop a whole rotation class
    rel = derived_relation(C(4))
    broken = rel.triples - {(0, 1, 2), (1, 2, 0), (2, 0, 1)}
    report = validate_circular_order(TernaryRelation(rel.ground, broken))
    axioms = {a for a, _ in report.violations}
    assert "Totality" in axioms
    # transitivity: a cyclic relation that is total and asymmetric on 4 points but not transitive
    bad = {(0, 1, 2), (0, 2, 3), (0, 3, 1)}
    bad |= {(b, c, a) for a, b, c in bad} | {(c, a, b) for a, b, c in bad}
    extra = {(1, 2, 3), (2, 3, 1), (3, 1, 2)}
    report = validate_circular_order(TernaryRelation(frozenset(range(4)), frozenset(bad | extra)))
    assert not report.is_corder
    assert "Transitivity" in {a for a, _ in report.violations}


def test_relation_round_trips_to_arrangement():
    rng = random.Random(5)
    for _ in range(50):
        order = random_order(rng, rng.randint(1, 12))
        assert relation_to_order(derived_relation(order)) == order


# betweenness and intervals ---------------------------------------------------


def test_betweenness_examples():
    order = C(4)
    assert betweenness(order, 0, 1, 2)
    assert not betweenness(order, 0, 2, 1)
    assert betweenness(order, 3, 0, 2)


def test_betweenness_matches_derived_relation_exhaustively():
    order = FiniteCyclicOrder((3, 7, 1, 9, 4))
    rel = derived_relation(order)
    for t in itertools.product(order.arrangement, repeat=3):
        assert betweenness(order, *t) == (t in rel.triples)


def test_betweenness_unknown_label():
    with pytest.raises(InputError):
        betweenness(C(3), 0, 1, 5)


def test_interval_examples():
    assert interval(C(4), 0, 2) == {1}
    assert interval(C(4), 2, 0) == {3}
    assert interval(C(6), 4, 1) == {5, 0}
    assert interval(C(6), 4, 1, closed=True) == {4, 5, 0, 1}
    with pytest.raises(InputError):
        interval(C(4), 1, 1)


def test_interval_matches_betweenness_enumeration():
    order = C(6)
    for a, b in itertools.permutations(range(6), 2):
        assert interval(order, a, b) == {x for x in range(6) if sign_between(list(range(6)), a, x, b)}


# normalization ----------------------------------------------------------------


def test_arrangements_are_normalized():
    assert FiniteCyclicOrder((2, 3, 0, 1)) == C(4)
    assert FiniteCyclicOrder((2, 3, 0, 1)).arrangement == (0, 1, 2, 3)
    assert FiniteCyclicOrder((1, 0, 2)) != C(3)


def test_duplicate_labels_rejected():
    with pytest.raises(InputError):
        FiniteCyclicOrder((0, 1, 0))
    with pytest.raises(InputError):
        standard_corder_from_linear([1, 2, 2])


def test_mixed_label_types_normalize():
    order = FiniteCyclicOrder((SignedLabel(1, "-"), "x", 5))
    assert order.arrangement[0] == 5


# cuts ----------------------------------------------------------------------------


def test_cut_examples():
    cut = cut_at(C(4), 2)
    assert cut.order == (SignedLabel(2, "-"), 3, 0, 1, SignedLabel(2, "+"))
    cut = cut_at(C(3), 0)
    assert cut.order == ((0, "-"), 1, 2, (0, "+"))


def test_cut_order_is_forced_by_betweenness():
    order = C(7)
    for c in order:
        cut = cut_at(order, c)
        inner = cut.order[1:-1]
        for x, y in itertools.combinations(inner, 2):
            assert cut.less(x, y) == betweenness(order, c, x, y)


def test_cut_round_trip_random():
    rng = random.Random(11)
    for _ in range(300):
        order = random_order(rng, rng.randint(1, 20))
        for c in order:
            assert cut_at(order, c).restore() == order


def test_standard_order_identity_on_cyclic_data():
    assert standard_corder_from_linear([0, 1, 2, 3]) == C(4)
    rng = random.Random(2)
    seq = rng.sample(range(50), 10)
    order = standard_corder_from_linear(seq)
    for a, b, c in itertools.permutations(seq, 3):
        assert order.between(a, b, c) == sign_between(seq, a, b, c)


def test_projection_from_cut_is_cop():
    rng = random.Random(3)
    for _ in range(30):
        order = random_order(rng, rng.randint(1, 9))
        for c in order:
            assert is_cop(cut_at(order, c).projection())


# cycles ----------------------------------------------------------------------------


def test_cycle_examples():
    order = C(5)
    assert is_cycle(order, (0, 1, 2, 3, 4))
    assert not is_cycle(order, (0, 2, 1))
    assert is_cycle(order, (0, 0, 2, 2, 4))


def test_interleaved_blocks_are_not_cycles():
    assert not is_cycle(C(5), (0, 1, 0, 1))
    assert not is_cycle(C(5), (0, 1, 2, 0, 1, 2))
    assert not is_cycle(C(5), (0, 1, 0, 2))
    assert is_cycle(C(5), (0, 0, 1, 2, 0))  # block of 0s wraps around


def test_is_cycle_agrees_with_block_oracle_exhaustively():
    arr = (0, 1, 2, 3)
    order = FiniteCyclicOrder(arr)
    for m in range(1, 6):
        for v in itertools.product(arr, repeat=m):
            assert is_cycle(order, v) == brute_is_cycle(list(arr), v), v


# COP maps -----------------------------------------------------------------------------


def test_cop_examples():
    assert is_cop(identity_map(C(5)))
    assert is_cop(PointMap(C(5), C(3), {x: 1 for x in range(5)}))
    glue = PointMap(C(4), C(4), {0: 0, 1: 1, 2: 2, 3: 0})
    assert is_cop(glue)


def test_cop_witnesses():
    flip = PointMap(C(3), C(3), {0: 0, 1: 2, 2: 1})
    verdict = is_cop(flip)
    assert not verdict and verdict.condition == "betweenness"
    alt = PointMap(C(4), C(2), {0: 0, 1: 1, 2: 0, 3: 1})
    verdict = is_cop(alt)
    assert not verdict and verdict.condition == "constancy"


def test_cop_agrees_with_cycle_transport_exhaustively():
    """COP conditions <=> every cycle (length <= 4) is carried to a cycle."""
    for n, m in [(1, 3), (2, 3), (3, 3), (3, 4), (4, 3), (4, 4)]:
        X, Y = list(range(n)), list(range(m))
        cycles = list(cycles_up_to(X, 4))
        for images in itertools.product(Y, repeat=n):
            f = PointMap(C(n), C(m), dict(zip(X, images)))
            transports = all(brute_is_cycle(Y, tuple(images[x] for x in v)) for v in cycles)
            assert bool(is_cop(f)) == transports, images


def test_cop_maps_from_cn_are_exactly_cycles():
    for n in range(1, 6):
        for v in itertools.product(range(4), repeat=n):
            f = PointMap(C(n), C(4), dict(enumerate(v)))
            assert bool(is_cop(f)) == is_cycle(C(4), v)


@pytest.mark.parametrize("n", range(1, 8))
def test_injective_cop_self_maps_are_rotations(n):
    order = C(n)
    rotations = {tuple(rotation_map(order, r)(x) for x in range(n)) for r in range(n)}
    found = set()
    for perm in itertools.permutations(range(n)):
        if is_cop(PointMap(order, order, dict(enumerate(perm)))):
            found.add(perm)
    assert found == rotations


def test_compose_examples():
    I = identity_map(C(5))
    assert compose_cop(I, I).mapping == I.mapping
    r2, r3 = rotation_map(C(6), 2), rotation_map(C(6), 3)
    assert compose_cop(r2, r3).mapping == rotation_map(C(6), 5).mapping


def test_compose_mismatch():
    with pytest.raises(InputError):
        compose_cop(identity_map(C(3)), identity_map(C(4)))


def _all_cop_maps(n, m):
    for images in itertools.product(range(m), repeat=n):
        f = PointMap(C(n), C(m), dict(enumerate(images)))
        if is_cop(f):
            yield f


def test_composition_preserves_cop_exhaustive_small():
    fs = list(_all_cop_maps(4, 3))
    gs = list(_all_cop_maps(3, 4))
    for f in fs:
        for g in gs:
            assert is_cop(compose_cop(f, g))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.integers(2, 7), st.randoms(use_true_random=False))
def test_composition_preserves_cop_random(n, m, rnd):
    # sample a COP map as a random cycle: sorted values, rotated, with a random offset
    def random_cop(a, b):
        vals = sorted(rnd.randrange(b) for _ in range(a))
        shift = rnd.randrange(a)
        vals = vals[shift:] + vals[:shift]
        return PointMap(C(a), C(b), dict(enumerate(vals)))

    f, g = random_cop(n, m), random_cop(m, n)
    assert is_cop(f) and is_cop(g)
    assert is_cop(compose_cop(f, g))


# lexicographic products ----------------------------------------------------------------


def test_lex_product_examples():
    assert lex_product(C(2), ("-", "+")).arrangement == ((0, "-"), (0, "+"), (1, "-"), (1, "+"))
    single = lex_product(C(3), ("*",))
    assert single == C(3).relabel({x: (x, "*") for x in range(3)})
    prod = lex_product(C(3), ("-", 0, "+"))
    assert validate_circular_order(derived_relation(prod)).is_corder
    with pytest.raises(InputError):
        lex_product(C(3), ())
