import math
from fractions import Fraction

import numpy as np
import pytest

from homwalk import core, counting, locallimit, words
from homwalk.errors import InvalidParameter, WeightMismatch


@pytest.fixture(scope="module")
def law1():
    return locallimit.build_chain(1)


@pytest.fixture(scope="module")
def law3():
    return locallimit.build_chain(3)


def test_state_space_size(law3):
    assert len(law3.states) == 2 * 3 + 2
    with pytest.raises(InvalidParameter):
        locallimit.ChainState("a", 0)
    with pytest.raises(InvalidParameter):
        locallimit.ChainState("A", 2)


def test_rows_sum_to_one(law1, law3):
    for law in (law1, law3):
        sums = law.matrix.sum(axis=1)
        assert np.allclose(sums, 1.0, atol=1e-12)
        assert abs(law.initial_vector.sum() - 1.0) < 1e-12


def test_initial_mass_placement(law3):
    for s in law3.states:
        expected_nonzero = str(s) in ("a3", "b3", "A", "B")
        assert (law3.initial(s) > 0) == expected_nonzero


def test_explicit_entries_d1(law1):
    lam = law1.constants.lam
    a1, b1 = locallimit.ChainState("a", 1), locallimit.ChainState("b", 1)
    A, B = locallimit.ChainState("A"), locallimit.ChainState("B")
    assert law1.transition(a1, b1) == pytest.approx(1 / lam, abs=1e-12)
    assert law1.transition(a1, b1) == pytest.approx(0.381966, abs=1e-6)
    assert law1.transition(a1, A) == pytest.approx(1 - 2 / lam, abs=1e-12)
    assert law1.transition(A, A) == pytest.approx(1 - 2 / lam, abs=1e-12)
    assert law1.transition(A, B) == 0.0
    assert law1.initial(a1) == pytest.approx(0.309017, abs=1e-6)


def test_explicit_entries_d3(law3):
    lam, delta = law3.constants.lam, law3.constants.delta
    b1 = locallimit.ChainState("b", 1)
    A = locallimit.ChainState("A")
    assert law3.transition(A, b1) == pytest.approx(1 / lam, abs=1e-12)
    assert law3.transition(A, locallimit.ChainState("a", 1)) == 0.0
    assert law3.transition(A, locallimit.ChainState("a", 2)) == pytest.approx(
        1 - 1 / lam, abs=1e-12)
    for k in (1, 2, 3):
        want = (lam - 1) / (lam ** k * delta + lam)
        assert law3.transition(locallimit.ChainState("a", k), b1) == pytest.approx(
            want, abs=1e-12)
    ad = locallimit.ChainState("a", 3)
    assert law3.transition(ad, ad) == pytest.approx(1 / lam, abs=1e-12)


def test_switch_probability_monotone():
    # 1/2 > p(a_1,b_1) > ... > p(a_d,b_1) > 1/(2+sqrt 2)
    for d in (1, 2, 3, 5, 8):
        law = locallimit.build_chain(d)
        b1 = locallimit.ChainState("b", 1)
        ps = [law.transition(locallimit.ChainState("a", k), b1) for k in range(1, d + 1)]
        assert 0.5 > ps[0]
        assert all(a > b for a, b in zip(ps, ps[1:]))
        assert ps[-1] > 1 / (2 + math.sqrt(2))
        assert ps[0] == pytest.approx(1 / law.constants.lam, abs=1e-12)


def test_only_drawn_transitions_are_nonzero(law3):
    legal = set()
    d = 3
    for i, s in enumerate(law3.states):
        for j, t in enumerate(law3.states):
            if law3.matrix[i, j] > 0:
                legal.add((str(s), str(t)))
    for kind, other in (("a", "b"), ("b", "a")):
        for k in range(1, d):
            assert (f"{kind}{k}", f"{kind}{k + 1}") in legal
        assert (f"{kind}{d}", f"{kind}{d}") in legal
        assert (f"{kind}{d}", kind.upper()) in legal
        for k in range(1, d + 1):
            assert (f"{kind}{k}", f"{other}1") in legal
        assert (kind.upper(), f"{other}1") in legal
        assert (kind.upper(), f"{kind}2") in legal
    expected = 2 * ((d - 1) + 2 + d + 2)
    assert len(legal) == expected


def test_word_probability_matches_trajectory(law1, law3):
    for law, wordlist in ((law1, ["a", "ab", "A", "AA", "aA", "abab"]),
                          (law3, ["a", "aaA", "abaa", "A", "Aa"])):
        for w in wordlist:
            closed = locallimit.word_probability(law, w)
            traj = law.trajectory_probability(w)
            assert closed == pytest.approx(traj, rel=1e-10), w


def test_word_probabilities_partition(law3):
    # one-letter extensions of a word partition its probability
    for w in ("a", "ab", "aaa", "A"):
        total = sum(
            locallimit.word_probability(law3, w + x) for x in words.ALPHABET)
        assert total == pytest.approx(locallimit.word_probability(law3, w), rel=1e-10)


def test_exact_marginal_example(law1):
    f = core.validate((0, 1, 0), core.line_graph(2, 1))
    assert locallimit.exact_marginal(law1, f) == pytest.approx(0.3090, abs=1e-4)
    # same value as the first-letter law
    assert locallimit.exact_marginal(law1, f) == pytest.approx(
        law1.initial(locallimit.ChainState("a", 1)), rel=1e-12)


def test_exact_marginal_weight_mismatch(law1):
    f = core.validate((0, 1, 2), core.line_graph(2, 1))  # encodes to A, weight 3
    with pytest.raises(WeightMismatch):
        locallimit.exact_marginal(law1, f)
    assert locallimit.prefix_probability(law1, f) == pytest.approx(
        law1.initial(locallimit.ChainState("A")), rel=1e-12)


def test_prefix_probability_sums_to_one(law1):
    total = 0.0
    for f in counting.enumerate_homomorphisms(core.line_graph(6, 1)):
        total += locallimit.prefix_probability(law1, f)
    assert total == pytest.approx(1.0, rel=1e-10)


@pytest.mark.parametrize("d", [1, 2])
def test_finite_n_marginals_converge(d):
    # exact finite-length prefix probabilities approach the limit values;
    # the strict monotone-decrease check in exact arithmetic lives in the
    # verification suite, here we assert decrease up to float resolution
    law = locallimit.build_chain(d)
    prefixes = [f for f in counting.enumerate_homomorphisms(core.line_graph(5, d))]
    gaps = []
    for n in (50, 100, 200, 400):
        worst = 0.0
        for f in prefixes:
            steps = core.derivative(f)
            _, prob = counting.prefix_marginal(n, d, steps)
            worst = max(worst, abs(float(prob) - locallimit.prefix_probability(law, f)))
        gaps.append(worst)
    assert all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-9


def test_sample_prefix_valid(law1, law3):
    rng = np.random.default_rng(11)
    for law in (law1, law3):
        for _ in range(50):
            f = locallimit.sample_prefix(law, 17, rng)
            assert f.graph.n == 17 and f.graph.d == law.d
            assert core.is_valid(f.values, f.graph)


def test_sampled_first_letter_frequency(law1):
    rng = np.random.default_rng(3)
    reps = 200_000
    hits = 0
    for _ in range(reps):
        f = locallimit.sample_prefix(law1, 2, rng)
        if f.values == (0, 1, 0):
            hits += 1
    p = law1.initial(locallimit.ChainState("a", 1))
    sigma = math.sqrt(p * (1 - p) / reps)
    assert abs(hits / reps - p) < 4 * sigma + 1e-9


def test_sampled_double_step_frequency(law1):
    # P(f(2) = 2) in the limit equals the probability of an initial rise
    # letter; cross-checks sampling against the closed-form marginal
    rng = np.random.default_rng(21)
    reps = 100_000
    hits = sum(1 for _ in range(reps)
               if locallimit.sample_prefix(law1, 2, rng).values == (0, 1, 2))
    target = locallimit.prefix_probability(
        law1, core.validate((0, 1, 2), core.line_graph(2, 1)))
    sigma = math.sqrt(target * (1 - target) / reps)
    assert abs(hits / reps - target) < 4 * sigma + 1e-9


def test_sampled_words_legal(law3):
    for w in locallimit.sample_words(law3, 60, 300, seed=5):
        assert words.is_d_legal(w, 3)
