"""Reference distributions for the critical-regime limit laws.

The range of a critical height function converges to the range of a simple
random walk run for a random number of steps: a *parity-biased* Poisson
number on the line (even outcomes reweighted by ``alpha``), and on the torus
a walk bridge of length ``2N`` where ``N`` is a Poisson conditioned to equal
an independent copy.  Everything here is computed to fixed accuracy with
tracked truncation mass; the walk-range laws are exact rational dynamic
programs cast to float at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .counting import lambda_of_d
from .errors import InvalidParameter

#: default ceiling on the truncation mass of constructed distributions
TRUNCATION_BOUND = 1e-10


@dataclass(frozen=True)
class PMF:
    """A finite probability mass function over integers.

    ``truncation_mass`` accounts for probability beyond the stored support,
    so stored mass plus truncation is 1 up to rounding.
    """

    probs: dict[int, float]
    truncation_mass: float = 0.0

    def __post_init__(self):
        if any(p < 0 for p in self.probs.values()) or self.truncation_mass < -1e-15:
            raise InvalidParameter("probabilities must be nonnegative")
        total = sum(self.probs.values()) + self.truncation_mass
        if abs(total - 1.0) > 1e-12:
            raise InvalidParameter(f"mass sums to {total}, not 1")

    def __getitem__(self, k: int) -> float:
        return self.probs.get(k, 0.0)

    def support(self) -> list[int]:
        return sorted(self.probs)

    def shift(self, offset: int) -> "PMF":
        return PMF({k + offset: p for k, p in self.probs.items()}, self.truncation_mass)

    def mean(self) -> float:
        return sum(k * p for k, p in self.probs.items())

    def to_csv(self) -> str:
        lines = [f"{k},{self.probs[k]!r}" for k in self.support()]
        lines.append(f"#truncation_mass={self.truncation_mass!r}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_csv(text: str) -> "PMF":
        probs: dict[int, float] = {}
        trunc = 0.0
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#truncation_mass="):
                trunc = float(line.split("=", 1)[1])
            else:
                k, p = line.split(",")
                probs[int(k)] = float(p)
        return PMF(probs, trunc)


def empirical_pmf(samples: Iterable[int] | Mapping[int, int]) -> PMF:
    """Histogram of integer samples as a PMF with zero truncation."""
    if isinstance(samples, Mapping):
        counts = dict(samples)
    else:
        counts = {}
        for s in samples:
            counts[s] = counts.get(s, 0) + 1
    total = sum(counts.values())
    if total == 0:
        raise InvalidParameter("empirical distribution needs at least one sample")
    return PMF({k: c / total for k, c in counts.items()})


def tv_distance(p: PMF, q: PMF) -> float:
    """Total variation upper bound: half L1 plus half the truncated mass."""
    keys = set(p.probs) | set(q.probs)
    l1 = sum(abs(p[k] - q[k]) for k in keys)
    return 0.5 * l1 + 0.5 * (p.truncation_mass + q.truncation_mass)


# ---------------------------------------------------------------------------
# Biased Poisson families
# ---------------------------------------------------------------------------

def parity_biased_poisson(lam: float, alpha: float, tol: float = 1e-15) -> PMF:
    """Poisson(lam) reweighted by ``alpha`` on even outcomes.

    pmf(r) is proportional to alpha(r) * lam^r / r! with alpha(r) = alpha for
    even r and 1 for odd r.
    """
    if lam <= 0 or alpha <= 0:
        raise InvalidParameter("lam and alpha must be positive")
    z = alpha * math.cosh(lam) + math.sinh(lam)
    probs = {}
    term = 1.0  # lam^r / r!
    tail = math.exp(lam)  # sum of remaining unweighted terms
    r = 0
    while True:
        weighted = (alpha if r % 2 == 0 else 1.0) * term / z
        probs[r] = weighted
        tail -= term
        if max(alpha, 1.0) * tail / z < tol and r > lam:
            break
        r += 1
        term *= lam / r
    trunc = max(0.0, 1.0 - sum(probs.values()))
    return PMF(probs, trunc)


def parity_biased_poisson_mixture(lam: float, alpha: float, tol: float = 1e-15) -> PMF:
    """Same law through the convex combination of the even- and
    odd-conditioned Poissons, weighted alpha : tanh(lam).

    Independent of :func:`parity_biased_poisson`; the two agree pointwise.
    """
    if lam <= 0 or alpha <= 0:
        raise InvalidParameter("lam and alpha must be positive")
    w_even = alpha / (alpha + math.tanh(lam))
    w_odd = math.tanh(lam) / (alpha + math.tanh(lam))
    probs = {}
    term = 1.0
    tail = math.exp(lam)
    r = 0
    while True:
        if r % 2 == 0:
            probs[r] = w_even * term / math.cosh(lam)
        else:
            probs[r] = w_odd * term / math.sinh(lam)
        tail -= term
        if tail * 2 / min(math.cosh(lam), math.sinh(lam)) < tol and r > lam:
            break
        r += 1
        term *= lam / r
    trunc = max(0.0, 1.0 - sum(probs.values()))
    return PMF(probs, trunc)


def equality_biased_poisson(lam_prime: float, tol: float = 1e-15) -> PMF:
    """Law of X given X = Y for independent Poisson(lam_prime) X, Y:
    pmf(k) proportional to lam_prime^(2k) / (k!)^2."""
    if lam_prime <= 0:
        raise InvalidParameter("lam_prime must be positive")
    terms = []
    term = 1.0
    k = 0
    while True:
        terms.append(term)
        nxt = term * lam_prime ** 2 / (k + 1) ** 2
        if nxt < tol * sum(terms) and k > lam_prime:
            break
        term = nxt
        k += 1
    z = sum(terms)
    probs = {k: t / z for k, t in enumerate(terms)}
    trunc = max(0.0, 1.0 - sum(probs.values()))
    return PMF(probs, trunc)


def equality_biased_poisson_conditioned(lam_prime: float, tol: float = 1e-12) -> PMF:
    """Brute-force conditioning oracle: truncate two independent Poissons
    and condition on equality."""
    if lam_prime <= 0:
        raise InvalidParameter("lam_prime must be positive")
    # truncate the single Poisson at tail mass tol
    single = []
    term = math.exp(-lam_prime)
    k = 0
    acc = 0.0
    while acc < 1.0 - tol * 1e-3 and k < 500:
        single.append(term)
        acc += term
        k += 1
        term *= lam_prime / k
    joint = [p * p for p in single]
    z = sum(joint)
    probs = {k: j / z for k, j in enumerate(joint)}
    trunc = max(0.0, 1.0 - sum(probs.values()))
    return PMF(probs, trunc)


# ---------------------------------------------------------------------------
# Walk range laws (exact dynamic programs)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _walk_range_table(k: int) -> tuple[dict[int, Fraction], dict[int, Fraction]]:
    """Exact range laws after k steps: (all walks, walks ending at 0).

    Dynamic program over (position, running min, running max) with integer
    path counts; the range size is max - min + 1.  No path enumeration.
    """
    states: dict[tuple[int, int, int], int] = {(0, 0, 0): 1}
    for _ in range(k):
        nxt: dict[tuple[int, int, int], int] = {}
        for (pos, mn, mx), cnt in states.items():
            for step in (-1, 1):
                p = pos + step
                key = (p, min(mn, p), max(mx, p))
                nxt[key] = nxt.get(key, 0) + cnt
        states = nxt
    total = 2 ** k
    walk: dict[int, Fraction] = {}
    bridge_counts: dict[int, int] = {}
    for (pos, mn, mx), cnt in states.items():
        r = mx - mn + 1
        walk[r] = walk.get(r, Fraction(0)) + Fraction(cnt, total)
        if pos == 0:
            bridge_counts[r] = bridge_counts.get(r, 0) + cnt
    bridge_total = sum(bridge_counts.values())
    bridge = (
        {r: Fraction(c, bridge_total) for r, c in bridge_counts.items()}
        if bridge_total
        else {}
    )
    return walk, bridge


def srw_range_pmf(k: int) -> PMF:
    """Exact law of the range size of a k-step simple random walk."""
    if k < 0:
        raise InvalidParameter("k must be nonnegative")
    walk, _ = _walk_range_table(k)
    return PMF({r: float(p) for r, p in walk.items()})


def bridge_range_pmf(two_n: int) -> PMF:
    """Exact law of the range size of a walk bridge of even length."""
    if two_n < 0 or two_n % 2:
        raise InvalidParameter("bridge length must be even and nonnegative")
    if two_n == 0:
        return PMF({1: 1.0})
    _, bridge = _walk_range_table(two_n)
    return PMF({r: float(p) for r, p in bridge.items()})


def stopped_range_pmf(lam: float, sign: int, tol: float = 1e-12) -> PMF:
    """Range law of a walk stopped after a parity-biased Poisson number of
    steps with parameters (lam/(2 sqrt 2), (3/(2 sqrt 2))^sign)."""
    if sign not in (-1, 1):
        raise InvalidParameter("sign must be +1 or -1")
    if lam <= 0:
        raise InvalidParameter("lam must be positive")
    steps_law = parity_biased_poisson(lam / (2 * math.sqrt(2)),
                                      (3 / (2 * math.sqrt(2))) ** sign)
    return _mixture(steps_law, srw_range_pmf, stretch=1, tol=tol)


def stopped_bridge_range_pmf(lam_prime: float, tol: float = 1e-12) -> PMF:
    """Range law of a walk bridge of length 2N, N Poisson conditioned to
    equal an independent copy."""
    if lam_prime <= 0:
        raise InvalidParameter("lam_prime must be positive")
    steps_law = equality_biased_poisson(lam_prime)
    return _mixture(steps_law, bridge_range_pmf, stretch=2, tol=tol)


def _mixture(steps_law: PMF, range_pmf, stretch: int, tol: float) -> PMF:
    probs: dict[int, float] = {}
    used = 0.0
    for k in steps_law.support():
        w = steps_law[k]
        if w < tol * 1e-3:
            continue
        used += w
        inner = range_pmf(stretch * k)
        for r, p in inner.probs.items():
            probs[r] = probs.get(r, 0.0) + w * p
    trunc = max(0.0, 1.0 - sum(probs.values()))
    return PMF(probs, trunc)


# ---------------------------------------------------------------------------
# Scaling constant
# ---------------------------------------------------------------------------

def sigma_prime_sq(d: int) -> float:
    """(lambda-2)(lambda-1) / (4 + (2d+1)(lambda-2)); the squared diffusive
    scale of the local limit."""
    return lambda_of_d(d).sigma_prime_sq


def sigma_prime(d: int) -> float:
    return math.sqrt(sigma_prime_sq(d))
