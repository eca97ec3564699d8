from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from homwalk import core, counting, line
from homwalk.errors import (
    IndexOutOfRange,
    InfeasibleStructure,
    MalformedDecomposition,
)


def hom(values, n, d):
    return core.validate(values, core.line_graph(n, d))


def test_average_height_example():
    f = hom((0, 1, 2, 1, 2), 4, 1)
    h, delta = line.average_height(f)
    assert h == (0, 0, 1, 1, 1)
    assert delta == (0, 1, 0, 0)
    assert line.jump_structure(f).positions == (2,)


def test_average_height_flat():
    f = core.zigzag(core.line_graph(7, 1))
    h, delta = line.average_height(f)
    assert set(h) == {0}
    assert line.jump_structure(f).positions == ()


@pytest.mark.parametrize("n,d", [(8, 1), (9, 2)])
def test_average_height_tracks_function(n, d):
    for f in counting.enumerate_homomorphisms(core.line_graph(n, d)):
        h, delta = line.average_height(f)
        assert all(abs(a - b) <= 1 for a, b in zip(f.values, h))
        assert set(delta) <= {-1, 0, 1}


def test_feasibility_conditions():
    line.LineJumpStructure(10, 1, (2, 5))       # gap 3 == 2d+1
    line.LineJumpStructure(10, 1, (2, 7))       # gap 5
    with pytest.raises(InfeasibleStructure):
        line.LineJumpStructure(10, 1, (3,))     # odd first jump
    with pytest.raises(InfeasibleStructure):
        line.LineJumpStructure(10, 1, (2, 4))   # even gap
    with pytest.raises(InfeasibleStructure):
        line.LineJumpStructure(10, 2, (2, 5))   # gap below 2d+1


def test_chain_structure_examples():
    assert line.chain_structure(line.LineJumpStructure(5, 1, (2,))).chains == ((2, 1),)
    assert line.chain_structure(line.LineJumpStructure(8, 1, (2, 5))).chains == ((5, 2),)
    assert line.chain_structure(line.LineJumpStructure(8, 1, (2, 7))).chains == ((2, 1), (7, 1))


def test_fluctuation_points_examples():
    empty = line.LineJumpStructure(7, 1, ())
    assert line.fluctuation_points(empty) == (1, 3, 5, 7)
    s = line.LineJumpStructure(5, 1, (2,))
    assert line.fluctuation_points(s) == (4,)
    assert line.fluctuation_count(s) == 1


@pytest.mark.parametrize("n,d", [(12, 1), (14, 2), (16, 3), (10, 1)])
def test_fluctuation_formula_exhaustive(n, d):
    for s in line.feasible_structures(n, d):
        assert len(line.fluctuation_points(s)) == line.fluctuation_count(s)


def test_feasibility_matches_enumeration():
    # a structure is realizable as a jump set iff the gap conditions hold
    for n, d in [(10, 1), (12, 2)]:
        realized = {line.jump_structure(f).positions
                    for f in counting.enumerate_homomorphisms(core.line_graph(n, d))}
        generated = {s.positions for s in line.feasible_structures(n, d)}
        assert realized == generated


def test_decode_examples():
    empty = line.LineJumpStructure(5, 1, ())
    f = line.decode(line.LineDecomposition(empty, (), (1, 1, 1)))
    assert f.values == (0, 1, 0, 1, 0, 1)
    s = line.LineJumpStructure(5, 1, (2,))
    f = line.decode(line.LineDecomposition(s, (1,), (-1,)))
    assert f.values == (0, 1, 2, 1, 0, 1)


def test_decode_rejects_malformed():
    s = line.LineJumpStructure(5, 1, (2,))
    with pytest.raises(MalformedDecomposition):
        line.LineDecomposition(s, (1, 1), (-1,))
    with pytest.raises(MalformedDecomposition):
        line.LineDecomposition(s, (1,), (0,))


@pytest.mark.parametrize("n,d", [(12, 1), (10, 2), (9, 3)])
def test_round_trip_on_enumeration(n, d):
    for f in counting.enumerate_homomorphisms(core.line_graph(n, d)):
        dec = line.encode(f)
        assert line.decode(dec) == f


@pytest.mark.parametrize("n,d", [(9, 1), (11, 2)])
def test_decode_surjective_onto_jump_class(n, d):
    # every decomposition decodes to a distinct function with that jump set
    from itertools import product

    total = 0
    for s in line.feasible_structures(n, d):
        chains = line.chain_structure(s).chains
        fps = line.fluctuation_points(s)
        for signs in product((-1, 1), repeat=len(chains) + len(fps)):
            dec = line.LineDecomposition(s, signs[:len(chains)], signs[len(chains):])
            f = line.decode(dec)
            assert line.jump_structure(f).positions == s.positions
            total += 1
    assert total == counting.hom_count_line(n, d)


def test_count_structures_examples():
    assert line.count_structures(10, 1, 1, 2) == 4   # single jumps at 4,6,8,10
    assert line.count_structures(10, 1, 0, 2) == 1   # empty structure
    with pytest.raises(IndexOutOfRange):
        line.count_structures(10, 1, 1, 3)


def test_conditional_uniformity_of_chain_signs():
    # fixing the jump set, chain signs are exactly uniform over the class
    n, d = 12, 1
    from collections import Counter

    by_structure: dict = {}
    for f in counting.enumerate_homomorphisms(core.line_graph(n, d)):
        dec = line.encode(f)
        by_structure.setdefault(dec.structure.positions, Counter())[dec.chain_signs] += 1
    for counts in by_structure.values():
        assert len(set(counts.values())) == 1


def test_jump_probability_bounds():
    # P(jumps at all of s_1..s_t) <= 2^(-dt) for windows past 2d+1, exactly
    for n, d in [(12, 1), (12, 2)]:
        homs = counting.enumerate_homomorphisms(core.line_graph(n, d))
        total = len(homs)
        jump_sets = [set(line.jump_structure(f).positions) for f in homs]
        from itertools import combinations

        for t in (1, 2, 3):
            for positions in combinations(range(2 * d + 2, n + 1), t):
                hits = sum(1 for s in jump_sets if set(positions) <= s)
                assert Fraction(hits, total) <= Fraction(1, 2 ** (d * t))


def test_first_window_bounds():
    for n, d in [(10, 1), (12, 2), (14, 1)]:
        homs = counting.enumerate_homomorphisms(core.line_graph(n, d))
        total = len(homs)
        jump_sets = [set(line.jump_structure(f).positions) for f in homs]
        p2 = Fraction(sum(1 for s in jump_sets if 2 in s), total)
        assert Fraction(1, 4) <= p2 <= Fraction(1, 2)
        window = set(range(1, 2 * d + 2))
        pw = Fraction(sum(1 for s in jump_sets if s & window), total)
        assert Fraction(1, 3) <= pw <= Fraction(2, 3)


def test_range_bounded_by_jump_count():
    for f in counting.enumerate_homomorphisms(core.line_graph(12, 1)):
        pos = line.jump_structure(f).positions
        r = sum(1 for p in pos if p > 3)
        assert core.range_size(f) <= r + 3
