"""Exact counting: enumeration oracle, recurrence engine, growth constant.

Counting is exact integer arithmetic throughout; probabilities derived from
counts stay rational until the caller converts them.

The recurrence engine counts legal words by weight.  Writing ``c_n(k)`` for
the number of legal words of weight ``n`` or ``n+1`` whose first ``k``
letters avoid ``A`` and first ``d`` letters avoid ``B``, partitioning on the
first letter gives, for ``n >= 1``,

    c_n(0) = c_{n-2}(0) + c_{n-2}(d-1) + c_{n-3}(d-1)
    c_n(k) = c_{n-2}(k-1) + c_{n-2}(d-1),   1 <= k <= d-1

with base values c_n(k) = 1 for n in {-1, 0} and 0 for n <= -2 (the empty
word is the only word of weight at most 1).  The total count of height
functions on the line of length n is 2*c_{n-2}(0) + 2*c_{n-3}(d-1).

The growth base lambda(d) is the unique root in (2, 3] of
lambda^(d-1/2) * (lambda - 2) = 1, located by rational bisection on its
square-root variable so that the residual is certified exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import words
from .core import GraphSpec, HeightFunction, Topology
from .errors import IllegalWord, InconsistentPrefix, InvalidParameter, TooLarge


# ---------------------------------------------------------------------------
# Brute-force enumeration oracle
# ---------------------------------------------------------------------------

def enumerate_homomorphisms(graph: GraphSpec, cap_leaves: int = 2 ** 24) -> list[HeightFunction]:
    """All height functions on the graph, lexicographic in their step sequence.

    Depth-first search over steps (-1 before +1) with constraint pruning.
    Raises :class:`TooLarge` when the unpruned search space ``2^steps``
    exceeds ``cap_leaves``.
    """
    n, d = graph.n, graph.d
    is_torus = graph.topology is Topology.TORUS
    num_steps = n - 1 if is_torus else n
    if 2 ** num_steps > cap_leaves:
        raise TooLarge(f"2^{num_steps} leaves exceeds cap {cap_leaves}")

    span = 2 * d + 1
    vals = [0] * graph.num_vertices
    out: list[HeightFunction] = []

    def consistent(i: int) -> bool:
        v = vals[i]
        for off in range(3, span + 1, 2):
            if off <= i and abs(v - vals[i - off]) != 1:
                return False
        if is_torus:
            # wrap partners already placed: (i, i+off-n) for i+off >= n
            for off in range(1, span + 1, 2):
                j = i + off - n
                if 0 <= j < i and abs(v - vals[j]) != 1:
                    return False
        return True

    def rec(i: int) -> None:
        if i == graph.num_vertices:
            out.append(HeightFunction(graph, tuple(vals)))
            return
        for step in (-1, 1):
            vals[i] = vals[i - 1] + step
            if consistent(i):
                rec(i + 1)

    rec(1)
    return out


# ---------------------------------------------------------------------------
# Recurrence engine
# ---------------------------------------------------------------------------

class _CTable:
    """Lazy table of the word counts c_n(k) for one context radius d."""

    def __init__(self, d: int):
        if d < 1:
            raise InvalidParameter("word counts need d >= 1")
        self.d = d
        # rows[n + 3] holds [c_n(0), ..., c_n(d-1)]; seeded with n = -3..1
        self.rows: list[list[int]] = [
            [0] * d,        # n = -3
            [0] * d,        # n = -2
            [1] * d,        # n = -1
            [1] * d,        # n = 0
            [2] * d,        # n = 1
        ]

    def grow(self, n: int) -> None:
        d = self.d
        while len(self.rows) - 3 <= n:
            m = len(self.rows) - 3  # next n to fill
            two = self.rows[m - 2 + 3]
            three = self.rows[m - 3 + 3]
            row = [two[0] + two[d - 1] + three[d - 1]]
            for k in range(1, d):
                row.append(two[k - 1] + two[d - 1])
            self.rows.append(row)

    def c(self, n: int, k: int) -> int:
        if not 0 <= k <= self.d - 1:
            raise InvalidParameter(f"k must be in 0..{self.d - 1}, got {k}")
        if n <= -2:
            return 0
        if n <= 1:
            return self.rows[n + 3][k]
        self.grow(n)
        return self.rows[n + 3][k]


@lru_cache(maxsize=None)
def _table(d: int) -> _CTable:
    return _CTable(d)


def c_recursive(n: int, k: int, d: int) -> int:
    """The word count c_n(k); exact, arbitrary precision."""
    return _table(d).c(n, k)


def hom_count_line(n: int, d: int) -> int:
    """Exact size of the set of height functions on the line of length n."""
    if n < 0:
        raise InvalidParameter("n must be nonnegative")
    if n == 0:
        return 1
    if d == 0:
        return 2 ** n
    t = _table(d)
    return 2 * t.c(n - 2, 0) + 2 * t.c(n - 3, d - 1)


# ---------------------------------------------------------------------------
# Growth constant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LambdaConstants:
    """The growth base lambda(d) with a certified rational bracket.

    ``delta`` is lambda - 2 carried at full float precision on its own (the
    difference underflows if recomputed from the float ``lam`` for large d).
    """

    d: int
    lam: float
    delta: float
    mu0: float
    sigma_prime_sq: float
    lam_lo: Fraction
    lam_hi: Fraction
    residual: float

    @property
    def lam_fraction(self) -> Fraction:
        return (self.lam_lo + self.lam_hi) / 2


def _mu0_bracket(d: int, bits: int) -> tuple[Fraction, Fraction]:
    """Rational bracket of width 2^-bits around the positive root of
    mu^(2d-1) * (mu^2 - 2) - 1."""
    e = 2 * d - 1

    def q(mu: Fraction) -> Fraction:
        return mu ** e * (mu * mu - 2) - 1

    lo, hi = Fraction(14142, 10000), Fraction(17321, 10000)
    while hi - lo > Fraction(1, 2 ** bits):
        mid = (lo + hi) / 2
        if q(mid) < 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


@lru_cache(maxsize=None)
def lambda_of_d(d: int, bits: int = 128) -> LambdaConstants:
    """Solve for the growth base; residual certified below 1e-12 for d <= 40."""
    if d < 1:
        raise InvalidParameter("lambda(d) needs d >= 1")
    mu_lo, mu_hi = _mu0_bracket(d, bits)
    lam_lo, lam_hi = mu_lo * mu_lo, mu_hi * mu_hi
    lam_mid = (lam_lo + lam_hi) / 2
    mu_mid = (mu_lo + mu_hi) / 2
    delta = lam_mid - 2
    residual = abs(mu_mid ** (2 * d - 1) * (mu_mid * mu_mid - 2) - 1)
    sig2 = delta * (delta + 1) / (4 + (2 * d + 1) * delta)
    return LambdaConstants(
        d=d,
        lam=float(lam_mid),
        delta=float(delta),
        mu0=float(mu_mid),
        sigma_prime_sq=float(sig2),
        lam_lo=lam_lo,
        lam_hi=lam_hi,
        residual=float(residual),
    )


# ---------------------------------------------------------------------------
# Exact prefix counts
# ---------------------------------------------------------------------------

def _dangling_candidates(dangling: tuple[int, ...]) -> tuple[str, ...]:
    if len(dangling) == 1:
        return ("a", "A") if dangling[0] == 1 else ("b", "B")
    return ("A",) if dangling[0] == 1 else ("B",)


def prefix_extension_counts(n: int, d: int, steps: Sequence[int]) -> dict[str, int]:
    """Exact completion count per compatible next letter of a step prefix.

    Keys are the letters that can cover the dangling steps (the full-letter
    part of the prefix is fixed); for a prefix that parses exactly, the key
    is '' and the value counts all extensions.
    """
    if d < 1:
        raise InvalidParameter("prefix counts need d >= 1")
    if len(steps) > n:
        raise InvalidParameter("prefix longer than the line")
    if len(steps) == 0:
        return {"": hom_count_line(n, d)}
    try:
        state, dangling = words.parse_steps(steps, d)
    except IllegalWord as exc:
        raise InconsistentPrefix(str(exc)) from exc
    t = _table(d)
    consumed = len(steps) - len(dangling)
    out: dict[str, int] = {}
    if not dangling:
        k = d - words.streak_level(state) - 1
        out[""] = t.c(n - len(steps), k)
        return out
    for letter in _dangling_candidates(dangling):
        nxt = words.step_state(state, letter, d)
        if nxt is None:
            continue
        w_after = consumed + words.LETTER_WEIGHT[letter]
        k = d - words.streak_level(nxt) - 1
        cnt = t.c(n - w_after, k)
        if cnt:
            out[letter] = cnt
    return out


def prefix_marginal(n: int, d: int, steps: Sequence[int]) -> tuple[int, Fraction]:
    """Exact number and probability of height functions extending a prefix.

    ``steps`` are the first increments of the function; the probability is
    the exact rational count / hom_count_line(n, d).
    """
    counts = prefix_extension_counts(n, d, steps)
    total = sum(counts.values())
    if total == 0:
        raise InconsistentPrefix("no height function extends this prefix")
    return total, Fraction(total, hom_count_line(n, d))
