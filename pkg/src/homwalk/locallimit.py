"""The local limit of line height functions as an explicit Markov chain.

As the line grows, the law of a fixed-length prefix converges.  The limit is
generated letter by letter: a chain on the ``2d+2`` states ``a_1..a_d,
b_1..b_d, A, B`` emits the word of the infinite height function, where
``a_k`` means the last letters form an effective run of ``k`` lowercase
``a``'s and ``A``/``B`` mean an uppercase letter was just emitted.  The
transition probabilities are explicit in the growth base ``lambda``:

    p(A, b_1) = p(a_d, a_d) = 1/lambda
    p(a_k, b_1) = (lambda - 1) / (lambda^k (lambda - 2) + lambda)

with the remaining mass on the unique other allowed transition, symmetric
rules for ``b``/``B``, and initial law pi(a_d) = pi(b_d) = lambda^{-1/2}/2,
pi(A) = pi(B) = (1 - lambda^{-1/2})/2.

The probability that the infinite word starts with a given legal word ``x``
has the closed form

    (1/2) * lambda^(1 - w(x)/2) * (lambda^m (lambda - 2) + 1) / (sqrt(lambda) + 1)

where ``w`` is the weight and ``m`` the lowercase-run level of the final
state.  Finite-prefix events are finite unions of such word events.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
import numpy as np

from . import words
from .core import HeightFunction, Topology, from_derivative, line_graph
from .counting import LambdaConstants, lambda_of_d
from .errors import InvalidParameter, WeightMismatch


@dataclass(frozen=True)
class ChainState:
    """One of a_1..a_d, b_1..b_d, A, B."""

    kind: str           # 'a', 'b', 'A', or 'B'
    level: int = 0      # 1..d for lowercase kinds, 0 for uppercase

    def __post_init__(self):
        if self.kind in ("a", "b"):
            if self.level < 1:
                raise InvalidParameter("lowercase states need level >= 1")
        elif self.kind in ("A", "B"):
            if self.level != 0:
                raise InvalidParameter("uppercase states carry no level")
        else:
            raise InvalidParameter(f"unknown state kind {self.kind!r}")

    def __str__(self) -> str:
        return self.kind if self.level == 0 else f"{self.kind}{self.level}"

    @property
    def letter(self) -> str:
        return self.kind


def _state_from_tuple(t: tuple) -> ChainState:
    if len(t) == 2:
        return ChainState(t[0], t[1])
    return ChainState(t[0])


def state_of_word(word: str, d: int) -> ChainState:
    """Final chain state of a legal word (the word must be nonempty)."""
    if not word:
        raise InvalidParameter("the empty word has no state")
    t = words.word_state(word, d)
    if t is None:
        raise InvalidParameter(f"{word!r} is not {d}-legal")
    return _state_from_tuple(t)


class ChainLaw:
    """Transition matrix and initial law of the local-limit chain."""

    def __init__(self, d: int, constants: LambdaConstants | None = None):
        if d < 1:
            raise InvalidParameter("the local limit needs d >= 1")
        self.d = d
        self.constants = constants or lambda_of_d(d)
        lam = self.constants.lam
        delta = self.constants.delta

        states = [ChainState("a", k) for k in range(1, d + 1)]
        states += [ChainState("b", k) for k in range(1, d + 1)]
        states += [ChainState("A"), ChainState("B")]
        self.states = tuple(states)
        self._index = {str(s): i for i, s in enumerate(states)}

        size = 2 * d + 2
        P = np.zeros((size, size))

        def idx(kind, level=0):
            return self._index[str(ChainState(kind, level))]

        def to_low(k):
            # probability of switching direction from a lowercase run of k
            return (lam - 1) / (lam ** k * delta + lam)

        for low, up in (("a", "b"), ("b", "a")):
            for k in range(1, d + 1):
                row = idx(low, k)
                P[row, idx(up, 1)] = to_low(k)
                if k < d:
                    P[row, idx(low, k + 1)] = 1 - to_low(k)
                else:
                    P[row, idx(low, d)] = 1 / lam
                    P[row, idx(low.upper())] = 1 - 1 / lam - to_low(d)
            row = idx(low.upper())
            P[row, idx(up, 1)] = 1 / lam
            if d == 1:
                P[row, idx(low, 1)] = 1 / lam
                P[row, idx(low.upper())] = 1 - 2 / lam
            else:
                P[row, idx(low, 2)] = 1 - 1 / lam

        pi = np.zeros(size)
        root = 1 / math.sqrt(lam)
        pi[idx("a", d)] = pi[idx("b", d)] = root / 2
        pi[idx("A")] = pi[idx("B")] = (1 - root) / 2

        self.matrix = P
        self.initial_vector = pi

    def transition(self, s: ChainState, t: ChainState) -> float:
        return float(self.matrix[self._index[str(s)], self._index[str(t)]])

    def initial(self, s: ChainState) -> float:
        return float(self.initial_vector[self._index[str(s)]])

    def trajectory_probability(self, word: str) -> float:
        """pi times the transition product along the unique trajectory of a word."""
        if not word:
            return 1.0
        t = words.START
        prob = None
        prev = None
        for letter in word:
            t = words.step_state(t, letter, self.d)
            if t is None:
                return 0.0
            state = _state_from_tuple(t)
            if prob is None:
                prob = self.initial(state)
            else:
                prob *= self.transition(prev, state)
            prev = state
        return prob


def build_chain(d: int) -> ChainLaw:
    return ChainLaw(d)


def word_probability(law: ChainLaw, word: str) -> float:
    """Probability that the infinite word starts with ``word`` (closed form)."""
    if not word:
        return 1.0
    t = words.word_state(word, law.d)
    if t is None:
        return 0.0
    lam, delta = law.constants.lam, law.constants.delta
    m = words.streak_level(t)
    w = words.weight(word)
    return 0.5 * lam ** (1 - w / 2) * (lam ** m * delta + 1) / (math.sqrt(lam) + 1)


def exact_marginal(law: ChainLaw, f: HeightFunction) -> float:
    """Limit probability of observing the prefix ``f`` on vertices 0..r.

    Only defined when the word encoding of the prefix has weight exactly
    ``r``; otherwise the last letter overhangs and :class:`WeightMismatch`
    is raised (use :func:`prefix_probability` in that case).
    """
    word = _line_prefix_word(law, f)
    r = f.graph.n
    if words.weight(word.letters) != r:
        raise WeightMismatch(
            f"prefix of length {r} encodes to weight {words.weight(word.letters)}"
        )
    return word_probability(law, word.letters)


def prefix_probability(law: ChainLaw, f: HeightFunction) -> float:
    """Limit probability of a prefix, summing word events when the encoding
    overhangs by one step."""
    _check_prefix(law, f)
    steps = tuple(b - a for a, b in zip(f.values, f.values[1:]))
    state, dangling = words.parse_steps(steps, law.d)
    if not dangling:
        # recover the word to reuse the closed form
        return word_probability(law, words.encode_steps(steps))
    prefix_letters = words.encode_steps(steps[: len(steps) - len(dangling)])
    total = 0.0
    cands = ("a", "A") if dangling[0] == 1 else ("b", "B")
    if len(dangling) == 2:
        cands = ("A",) if dangling[0] == 1 else ("B",)
    for letter in cands:
        if words.step_state(state, letter, law.d) is not None:
            total += word_probability(law, prefix_letters + letter)
    return total


def _check_prefix(law: ChainLaw, f: HeightFunction) -> None:
    if f.graph.topology is not Topology.LINE or f.graph.d != law.d:
        raise InvalidParameter("prefix must live on a line with matching d")


def _line_prefix_word(law: ChainLaw, f: HeightFunction) -> words.LegalWord:
    _check_prefix(law, f)
    return words.hom_to_word(f)


def sample_prefix(law: ChainLaw, r: int, rng: np.random.Generator) -> HeightFunction:
    """Run the chain until ``r`` steps are covered and decode the prefix.

    The output is a valid height function on the line ``0..r`` for every
    realization: legality is enforced by the transition graph.
    """
    if r < 1:
        raise InvalidParameter("prefix length must be >= 1")
    size = len(law.states)
    state = int(rng.choice(size, p=law.initial_vector))
    steps: list[int] = []
    steps.extend(words.LETTER_STEPS[law.states[state].letter])
    while len(steps) < r:
        state = int(rng.choice(size, p=law.matrix[state]))
        steps.extend(words.LETTER_STEPS[law.states[state].letter])
    return from_derivative(steps[:r], line_graph(r, law.d))


def sample_words(law: ChainLaw, num_letters: int, reps: int, seed: int) -> list[str]:
    """Independent word prefixes of a fixed letter count (for tests)."""
    rng = np.random.default_rng(seed)
    size = len(law.states)
    cum_init = np.cumsum(law.initial_vector)
    cum_rows = np.cumsum(law.matrix, axis=1)
    out = []
    for _ in range(reps):
        u = rng.random(num_letters)
        s = int(np.searchsorted(cum_init, u[0]))
        letters = [law.states[s].letter]
        for j in range(1, num_letters):
            s = int(np.searchsorted(cum_rows[s], u[j]))
            letters.append(law.states[s].letter)
        out.append("".join(letters))
    return out
