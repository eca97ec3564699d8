import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from homwalk import core, counting, words
from homwalk.errors import InconsistentPrefix, InvalidParameter, TooLarge


def brute_force_word_count(n, k, d):
    """Direct enumeration oracle for the recurrence table."""
    total = 0
    for w in words.legal_words(n, d):
        if any(x == "A" for x in w[:k]) or any(x == "B" for x in w[:d]):
            continue
        total += 1
    return total


@pytest.mark.parametrize("d", [1, 2, 3])
def test_c_table_matches_word_enumeration(d):
    for n in range(0, 12):
        for k in range(0, d):
            assert counting.c_recursive(n, k, d) == brute_force_word_count(n, k, d)


def test_c_base_values():
    assert counting.c_recursive(0, 0, 1) == 1
    assert counting.c_recursive(1, 0, 1) == 2
    assert counting.c_recursive(2, 0, 1) == 3


def test_hom_count_small_values():
    assert counting.hom_count_line(3, 1) == 6
    assert counting.hom_count_line(4, 1) == 10
    fib = [1, 1]
    while len(fib) < 12:
        fib.append(fib[-1] + fib[-2])
    for n in range(1, 9):
        assert counting.hom_count_line(n, 1) == 2 * fib[n]  # 2 * Fibonacci(n+1)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_hom_count_matches_enumeration(d):
    for n in range(1, 13):
        graph = core.line_graph(n, d)
        assert counting.hom_count_line(n, d) == len(counting.enumerate_homomorphisms(graph))


def test_enumeration_order_and_dedup():
    homs = counting.enumerate_homomorphisms(core.line_graph(6, 1))
    assert len(homs) == len(set(homs)) == 26
    steps = [core.derivative(f) for f in homs]
    assert steps == sorted(steps)


def test_enumeration_cap():
    with pytest.raises(TooLarge):
        counting.enumerate_homomorphisms(core.line_graph(30, 1))
    counting.enumerate_homomorphisms(core.line_graph(30, 1), cap_leaves=2 ** 40)


def test_torus_enumeration_small():
    assert len(counting.enumerate_homomorphisms(core.torus_graph(4, 1))) == 6
    # parity of values along the cycle
    for f in counting.enumerate_homomorphisms(core.torus_graph(8, 1)):
        assert all((v - x) % 2 == 0 for x, v in enumerate(f.values))


def test_growth_ratio_stabilizes():
    # |Hom| ~ C * lambda^(n/2): successive even-n ratios agree to 4 digits
    lam = counting.lambda_of_d(1).lam
    r1 = counting.hom_count_line(200, 1) / counting.hom_count_line(198, 1)
    r2 = counting.hom_count_line(202, 1) / counting.hom_count_line(200, 1)
    assert abs(r1 - lam) < 1e-4 * lam
    assert abs(r1 - r2) < 1e-8 * lam


def test_lambda_constants():
    c1 = counting.lambda_of_d(1)
    assert abs(c1.lam - (3 + math.sqrt(5)) / 2) < 1e-14
    for d in range(1, 41):
        c = counting.lambda_of_d(d)
        assert c.residual < 1e-12
        assert 2 < c.lam <= 3
        assert 0 < c.delta * 2 ** (d - 0.5) <= 1
        assert abs(c.mu0 ** 2 - c.lam) < 1e-12
    with pytest.raises(InvalidParameter):
        counting.lambda_of_d(0)


def test_lambda_bracket_is_certified():
    # the defining quantity changes sign across the stored rational bracket
    c = counting.lambda_of_d(5)

    def h(lam):
        return lam ** (2 * 5 - 1) * (lam - 2) ** 2 - 1

    assert h(c.lam_lo) < 0 < h(c.lam_hi)
    assert c.lam_hi - c.lam_lo < Fraction(1, 2 ** 100)
    assert c.lam_lo < c.lam_fraction < c.lam_hi


def test_sigma_prime_value_for_d1():
    c = counting.lambda_of_d(1)
    # (lambda-2)(lambda-1) = 1 exactly at the golden-ratio root
    assert abs(c.sigma_prime_sq - 1 / (4 + 3 * (c.lam - 2))) < 1e-14
    assert abs(c.sigma_prime_sq - 0.17082) < 1e-4


def test_prefix_marginal_empty_prefix():
    count, prob = counting.prefix_marginal(10, 1, ())
    assert count == counting.hom_count_line(10, 1)
    assert prob == 1


def test_prefix_marginal_single_letter():
    # functions starting with one wiggle: count c_{n-2}(0)
    count, prob = counting.prefix_marginal(10, 1, (1, -1))
    assert count == counting.c_recursive(8, 0, 1)
    assert prob == Fraction(count, counting.hom_count_line(10, 1))


@pytest.mark.parametrize("n,d", [(10, 1), (11, 2), (12, 3)])
def test_prefix_marginal_against_enumeration(n, d):
    homs = counting.enumerate_homomorphisms(core.line_graph(n, d))
    for prefix_len in (1, 2, 3, 5, 8, n):
        seen = {}
        for f in homs:
            key = core.derivative(f)[:prefix_len]
            seen[key] = seen.get(key, 0) + 1
        for key, want in seen.items():
            count, prob = counting.prefix_marginal(n, d, key)
            assert count == want
            assert prob == Fraction(want, len(homs))


def test_prefix_marginal_partitions():
    # both one-step extensions of a prefix partition its count
    n, d = 14, 2
    prefix = (1, -1, 1)
    count, _ = counting.prefix_marginal(n, d, prefix)
    ext = 0
    for step in (-1, 1):
        try:
            c, _ = counting.prefix_marginal(n, d, prefix + (step,))
        except InconsistentPrefix:
            c = 0
        ext += c
    assert ext == count


def test_prefix_marginal_rejects_illegal():
    with pytest.raises(InconsistentPrefix):
        counting.prefix_marginal(10, 1, (1, 1, 1))
    with pytest.raises(InconsistentPrefix):
        # up jump then immediate down jump violates radius-2 legality
        counting.prefix_marginal(14, 2, (1, 1, -1, -1, -1, 1))


@settings(max_examples=200)
@given(st.integers(1, 3), st.lists(st.sampled_from([-1, 1]), min_size=0, max_size=8))
def test_prefix_marginal_total_never_exceeds_hom_count(d, prefix):
    n = 12
    try:
        count, prob = counting.prefix_marginal(n, d, tuple(prefix))
    except InconsistentPrefix:
        return
    assert 0 < count <= counting.hom_count_line(n, d)
    assert 0 < prob <= 1
