"""Word encoding of line height functions.

A step sequence with no triple repeat is read greedily into a word on the
four-letter alphabet ``a, b, A, B`` standing for the step patterns

    a = (+1, -1)     A = (+1, +1, -1)
    b = (-1, +1)     B = (-1, -1, +1)

The lowercase letters are flat wiggles, the uppercase ones carry a net rise
or fall.  Legality with context radius ``d`` restricts how soon an uppercase
letter may recur: ``A`` needs the previous ``d-1`` letters to be ``a`` and,
beyond position ``d``, the letter ``d`` back to be ``a`` or ``A`` (and
symmetrically for ``B``/``b``).  Height functions on the line with radius
``d`` correspond bijectively to legal words of weight ``n`` or ``n+1``, where
the weight is the total step count of the letters.

Legality is tracked incrementally through a small state machine whose states
are ``('a', i)``/``('b', i)`` for a lowercase streak of effective length
``i`` (capped at ``d``) and ``('A',)``/``('B',)`` right after an uppercase
letter.  The same machine drives the sequential exact sampler and the
local-limit chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .core import HeightFunction, Topology, from_derivative, line_graph
from .errors import IllegalWord, InvalidParameter, NotInD

ALPHABET = "abAB"

LETTER_STEPS: dict[str, tuple[int, ...]] = {
    "a": (1, -1),
    "b": (-1, 1),
    "A": (1, 1, -1),
    "B": (-1, -1, 1),
}

LETTER_WEIGHT = {letter: len(steps) for letter, steps in LETTER_STEPS.items()}

#: pseudo-state before the first letter; behaves like a full streak of both kinds
START = ("start",)


def weight(word: str) -> int:
    """Total number of steps spelled out by the word."""
    return sum(LETTER_WEIGHT[x] for x in word)


def expand(word: str) -> tuple[int, ...]:
    """Concatenate the step patterns of the letters."""
    out: list[int] = []
    for x in word:
        out.extend(LETTER_STEPS[x])
    return tuple(out)


def _check_steps(u: tuple[int, ...], exc) -> None:
    if any(s not in (-1, 1) for s in u):
        raise InvalidParameter("steps must be +1/-1")
    for i in range(len(u) - 2):
        if u[i] == u[i + 1] == u[i + 2]:
            raise exc(f"three equal steps at position {i}")


def encode_steps(steps: Sequence[int]) -> str:
    """Greedy left-to-right encoding of a step sequence into a word.

    The result is the unique word whose expansion equals the input or the
    input plus one trailing step.  Raises :class:`NotInD` on a triple repeat.
    """
    u = tuple(steps)
    _check_steps(u, NotInD)
    out = []
    i = 0
    m = len(u)
    while i < m:
        s = u[i]
        if i + 1 < m and u[i + 1] == s:
            out.append("A" if s == 1 else "B")
            i += 3
        else:
            # a flat wiggle, or one dangling step completed to a wiggle
            out.append("a" if s == 1 else "b")
            i += 2
    return "".join(out)


def step_state(state: tuple, letter: str, d: int):
    """Advance the legality state machine; return None if the letter is illegal."""
    if letter == "a":
        if state == START:
            return ("a", d)
        if state[0] == "a":
            return ("a", min(state[1] + 1, d))
        if state == ("A",):
            return ("a", min(2, d))
        return ("a", 1)
    if letter == "b":
        if state == START:
            return ("b", d)
        if state[0] == "b":
            return ("b", min(state[1] + 1, d))
        if state == ("B",):
            return ("b", min(2, d))
        return ("b", 1)
    if letter == "A":
        if state == START or state == ("a", d) or (d == 1 and state == ("A",)):
            return ("A",)
        return None
    if letter == "B":
        if state == START or state == ("b", d) or (d == 1 and state == ("B",)):
            return ("B",)
        return None
    raise InvalidParameter(f"unknown letter {letter!r}")


def word_state(word: str, d: int):
    """Final machine state of a word, or None if the word is illegal."""
    if d < 1:
        raise InvalidParameter("word legality needs d >= 1")
    state = START
    for x in word:
        state = step_state(state, x, d)
        if state is None:
            return None
    return state


def streak_level(state: tuple) -> int:
    """How far an uppercase letter still is: d-1-level more lowercase needed.

    Returns ``i - 1`` for lowercase-streak states ``(a, i)``/``(b, i)`` and
    ``0`` for the uppercase states.
    """
    if state[0] in ("a", "b") and len(state) == 2:
        return state[1] - 1
    return 0


def is_d_legal(word: str, d: int) -> bool:
    return word_state(word, d) is not None


def parse_steps(steps: Sequence[int], d: int) -> tuple[tuple, tuple[int, ...]]:
    """Split a step sequence into fully determined letters plus dangling steps.

    Returns the machine state after the determined letters and the dangling
    tail (0, 1, or 2 steps whose covering letter depends on what follows).
    Raises :class:`IllegalWord` if the steps violate legality.
    """
    u = tuple(steps)
    _check_steps(u, IllegalWord)
    state = START
    i, m = 0, len(u)
    while i < m:
        s = u[i]
        if i + 1 >= m:
            return state, (s,)
        if u[i + 1] == -s:
            letter = "a" if s == 1 else "b"
            i += 2
        elif i + 2 >= m:
            return state, (s, s)
        else:
            letter = "A" if s == 1 else "B"
            i += 3
        state = step_state(state, letter, d)
        if state is None:
            raise IllegalWord("steps violate the long-range constraints")
    return state, ()


@dataclass(frozen=True)
class LegalWord:
    """A word on ``a, b, A, B`` checked legal for its context radius."""

    letters: str
    d: int

    def __post_init__(self):
        if not is_d_legal(self.letters, self.d):
            raise IllegalWord(f"{self.letters!r} is not {self.d}-legal")

    def __str__(self) -> str:
        return self.letters

    @property
    def weight(self) -> int:
        return weight(self.letters)


def hom_to_word(f: HeightFunction) -> LegalWord:
    """Encode a line height function as a legal word of weight n or n+1."""
    if f.graph.topology is not Topology.LINE:
        raise InvalidParameter("word encoding is defined on the line")
    if f.graph.d < 1:
        raise InvalidParameter("word encoding needs d >= 1")
    steps = tuple(b - a for a, b in zip(f.values, f.values[1:]))
    return LegalWord(encode_steps(steps), f.graph.d)


def word_to_hom(word: str | LegalWord, n: int, d: int) -> HeightFunction:
    """Decode a word back into the height function on ``0..n`` it encodes."""
    letters = word.letters if isinstance(word, LegalWord) else word
    if not is_d_legal(letters, d):
        raise IllegalWord(f"{letters!r} is not {d}-legal")
    w = weight(letters)
    if w not in (n, n + 1):
        raise IllegalWord(f"weight {w} not in {{{n}, {n + 1}}}")
    steps = expand(letters)[:n]
    return from_derivative(steps, line_graph(n, d))


def legal_words(n: int, d: int) -> Iterator[str]:
    """Enumerate all legal words of weight n or n+1, in DFS letter order.

    Brute-force oracle for the recurrence engine; exponential in ``n``.
    """
    if d < 1:
        raise InvalidParameter("needs d >= 1")

    def rec(prefix: list[str], state, w: int) -> Iterator[str]:
        if w in (n, n + 1):
            yield "".join(prefix)
        if w >= n:
            return
        for letter in ALPHABET:
            if w + LETTER_WEIGHT[letter] > n + 1:
                continue
            nxt = step_state(state, letter, d)
            if nxt is None:
                continue
            prefix.append(letter)
            yield from rec(prefix, nxt, w + LETTER_WEIGHT[letter])
            prefix.pop()

    yield from rec([], START, 0)
