"""Structural decomposition of height functions on the torus.

The average height at ``x`` looks backwards just far enough to see three
consecutive values ``{h-1, h, h+1}`` and reports the middle one; the two
flat functions get ``h == 0``.  Jumps, chains, and fluctuation points then
work as on the line, with two twists from the cyclic topology: chain signs
must balance (the average height returns to its start after a full loop),
and the jump structure is only determined up to rotation, so the summary
invariants are necklaces (rotation classes).

The decomposition here maps a height function with jump set ``S = I`` to a
balanced sign vector (one sign per chain) plus one sign per fluctuation
point; functions with no jumps form a separate sector of size
``2^(n/2+1) - 2`` indexed by a flat level in {-1, 0, +1} and per-site signs.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .core import HeightFunction, Topology, range_size, torus_graph, validate
from .errors import (
    EmptyStructure,
    InfeasibleStructure,
    InvalidParameter,
    MalformedDecomposition,
    SignImbalance,
    WrongFluctuationCount,
)


def rho_plus(x: int, y: int, n: int) -> int:
    """Clockwise distance from ``x`` to ``y`` on the n-cycle."""
    return (y - x) % n


def rho(x: int, y: int, n: int) -> int:
    """Cyclic distance between ``x`` and ``y``."""
    d = abs(x - y) % n
    return min(d, n - d)


def _require_torus(f: HeightFunction) -> None:
    if f.graph.topology is not Topology.TORUS:
        raise InvalidParameter("torus decomposition needs a torus height function")


# ---------------------------------------------------------------------------
# Average height
# ---------------------------------------------------------------------------

def average_height_torus(f: HeightFunction):
    """Average height, its increments, and the signed jump structure.

    Returns ``(h, delta, structure)`` where ``h`` and ``delta`` are tuples of
    length ``n`` (``delta[x] = h(x) - h(x-1)``, indices mod n).

    Runs in O(n): as ``x`` advances, the start of the minimal backward
    window showing three values can only move forward, so a sliding window
    with monotone deques covers all vertices in one pass over the doubled
    value array.
    """
    _require_torus(f)
    n = f.graph.n
    if range_size(f) < 3:
        zeros = (0,) * n
        return zeros, zeros, TorusJumpStructure(n, f.graph.d, (), ())

    ext = [f.values[i % n] for i in range(2 * n)]
    h = [0] * n
    maxq: deque[int] = deque()
    minq: deque[int] = deque()

    def push(j: int) -> None:
        while maxq and ext[maxq[-1]] <= ext[j]:
            maxq.pop()
        maxq.append(j)
        while minq and ext[minq[-1]] >= ext[j]:
            minq.pop()
        minq.append(j)

    left = 1
    for j in range(1, n):
        push(j)
    for x in range(n, 2 * n):
        push(x)
        if left < x - n + 1:
            left = x - n + 1
            while maxq[0] < left:
                maxq.popleft()
            while minq[0] < left:
                minq.popleft()
        while x - left >= 3:
            mxi = maxq[0] if maxq[0] != left else maxq[1]
            mni = minq[0] if minq[0] != left else minq[1]
            if ext[mxi] - ext[mni] >= 2:
                left += 1
                if maxq[0] < left:
                    maxq.popleft()
                if minq[0] < left:
                    minq.popleft()
            else:
                break
        h[x - n] = ext[minq[0]] + 1

    delta = tuple(h[x] - h[x - 1] for x in range(n))
    positions = tuple(x for x in range(n) if delta[x] != 0)
    signs = tuple(delta[x] for x in positions)
    return tuple(h), delta, TorusJumpStructure(n, f.graph.d, positions, signs)


# ---------------------------------------------------------------------------
# Jump structures
# ---------------------------------------------------------------------------

def _chains_from_positions(positions: Sequence[int], n: int, d: int) -> tuple[tuple[int, int], ...]:
    """Cyclic chain grouping (end vertex, length), sorted by end vertex."""
    pos = list(positions)
    m = len(pos)
    if m == 0:
        return ()
    span = 2 * d + 1
    starts = [i for i in range(m) if (pos[i] - pos[i - 1]) % n > span]
    if not starts:
        raise InfeasibleStructure("jump set forms a single cyclic chain")
    chains = []
    for idx, b in enumerate(starts):
        nxt = starts[(idx + 1) % len(starts)]
        t = (nxt - b) % m or m
        chains.append((pos[(b + t - 1) % m], t))
    return tuple(sorted(chains))


@dataclass(frozen=True)
class TorusJumpStructure:
    """Signed jump positions on the torus; feasibility checked eagerly.

    Every cyclic gap must be odd and at least ``2d+1``; signs are constant
    within each chain and balance to zero overall.
    """

    n: int
    d: int
    positions: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        if self.d < 1 or self.n < 4 or self.n % 2:
            raise InvalidParameter("torus structures need even n >= 4 and d >= 1")
        pos, signs = self.positions, self.signs
        if len(pos) != len(signs):
            raise MalformedDecomposition("one sign per jump position required")
        if any(s not in (-1, 1) for s in signs):
            raise MalformedDecomposition("signs must be +1/-1")
        if any(not 0 <= p < self.n for p in pos):
            raise InfeasibleStructure(f"positions must lie in 0..{self.n - 1}")
        if list(pos) != sorted(set(pos)):
            raise InfeasibleStructure("positions must be strictly increasing")
        if not pos:
            return
        span = 2 * self.d + 1
        for i in range(len(pos)):
            gap = (pos[i] - pos[i - 1]) % self.n
            if gap % 2 == 0 or gap < span:
                raise InfeasibleStructure(
                    f"cyclic gap {gap} into {pos[i]} must be odd and >= {span}"
                )
        by_pos = dict(zip(pos, signs))
        for k, t in _chains_from_positions(pos, self.n, self.d):
            members = [(k - j * span) % self.n for j in range(t)]
            if len({by_pos[p] for p in members}) != 1:
                raise InfeasibleStructure("signs must agree within a chain")
        if sum(signs):
            raise SignImbalance(f"signs sum to {sum(signs)}, not 0")

    def __len__(self) -> int:
        return len(self.positions)

    @property
    def chains(self) -> tuple[tuple[int, int], ...]:
        return _chains_from_positions(self.positions, self.n, self.d)

    @property
    def chain_signs(self) -> tuple[int, ...]:
        by_pos = dict(zip(self.positions, self.signs))
        return tuple(by_pos[k] for k, _ in self.chains)


def fluctuation_points_torus(structure: TorusJumpStructure) -> tuple[int, ...]:
    """Vertices whose clockwise distance to the next jump is odd and > 2d+1."""
    n, d = structure.n, structure.d
    if not structure.positions:
        raise EmptyStructure("fluctuation points need a nonempty jump set")
    nxt = [0] * n  # clockwise distance to the nearest jump
    posset = set(structure.positions)
    dist = None
    for x in range(2 * n - 1, -1, -1):
        if x % n in posset:
            dist = 0
        elif dist is not None:
            dist += 1
        if x < n:
            nxt[x] = dist
    return tuple(x for x in range(n) if nxt[x] >= 2 * d + 3 and nxt[x] % 2 == 1)


def fluctuation_count_torus(structure: TorusJumpStructure) -> int:
    """Closed formula ``n/2 - (d + 1/2)|I| - #chains`` for nonempty ``I``."""
    size = len(structure.positions)
    if size == 0:
        raise EmptyStructure("fluctuation count needs a nonempty jump set")
    return structure.n // 2 - (2 * structure.d + 1) * size // 2 - len(structure.chains)


# ---------------------------------------------------------------------------
# Decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TorusDecomposition:
    """Jump structure with signs, fluctuation signs, and (for the jump-free
    sector only) the flat level of the average height."""

    structure: TorusJumpStructure
    fluctuation_signs: tuple[int, ...]
    flat_level: int = 0


def _pattern(m: int, span: int) -> int:
    return m // span + (m % span) % 2


def decode_torus(dec: TorusDecomposition) -> HeightFunction:
    """Rebuild the unique height function realizing a torus decomposition."""
    structure = dec.structure
    n, d = structure.n, structure.d
    graph = torus_graph(n, d)
    y = dec.fluctuation_signs
    if any(s not in (-1, 1) for s in y):
        raise MalformedDecomposition("fluctuation signs must be +1/-1")

    if not structure.positions:
        if dec.flat_level not in (-1, 0, 1):
            raise MalformedDecomposition("flat level must be -1, 0, or +1")
        if dec.flat_level == 0:
            if len(y) != n // 2:
                raise WrongFluctuationCount(f"expected {n // 2} signs, got {len(y)}")
            vals = [0] * n
            for i, x in enumerate(range(1, n, 2)):
                vals[x] = y[i]
        else:
            if len(y) != n // 2 - 1:
                raise WrongFluctuationCount(f"expected {n // 2 - 1} signs, got {len(y)}")
            if all(s == -dec.flat_level for s in y):
                raise MalformedDecomposition(
                    "flat function: its canonical decomposition has flat level 0"
                )
            vals = [dec.flat_level if x % 2 else 0 for x in range(n)]
            for i, x in enumerate(range(2, n, 2)):
                vals[x] = dec.flat_level + y[i]
        return validate(vals, graph)

    if dec.flat_level != 0:
        raise MalformedDecomposition("flat level applies only to the jump-free sector")
    fps = fluctuation_points_torus(structure)
    if len(y) != len(fps):
        raise WrongFluctuationCount(f"expected {len(fps)} signs, got {len(y)}")
    fp_sign = dict(zip(fps, y))
    span = 2 * d + 1

    chains = structure.chains
    chain_signs = structure.chain_signs
    rel = [0] * n
    level = 0
    cursor = (chains[-1][0] + 1) % n
    for (k, t), sign in zip(chains, chain_signs):
        start = (k - span * t - 1) % n
        while cursor != start:
            rel[cursor] = level + fp_sign.get(cursor, 0)
            cursor = (cursor + 1) % n
        for m in range(span * t + 2):
            rel[(start + m) % n] = level + sign * _pattern(m, span)
        cursor = (k + 1) % n
        level += sign * t
    base = rel[0]
    return validate([v - base for v in rel], graph)


def encode_torus(f: HeightFunction) -> TorusDecomposition:
    """Decompose a torus height function; exact inverse of :func:`decode_torus`."""
    _require_torus(f)
    h, _, structure = average_height_torus(f)
    n = f.graph.n
    if not structure.positions:
        level = h[0]
        if level == 0:
            sites = range(1, n, 2)
        else:
            sites = range(2, n, 2)
        y = tuple(f.values[x] - level for x in sites)
        return TorusDecomposition(structure, y, flat_level=level)
    fps = fluctuation_points_torus(structure)
    y = tuple(f.values[x] - f.values[x - 1] for x in fps)
    return TorusDecomposition(structure, y)


# ---------------------------------------------------------------------------
# Necklace summaries and the range identity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SignedChainStructure:
    """Chain end vertices with signed lengths, ordered around the circle."""

    entries: tuple[tuple[int, int], ...]

    def signed_lengths(self) -> tuple[int, ...]:
        return tuple(w for _, w in self.entries)


@dataclass(frozen=True)
class NecklaceClass:
    """A rotation equivalence class: least rotation plus its period."""

    representative: tuple
    period: int


def least_rotation(seq: Sequence) -> tuple:
    tup = tuple(seq)
    return min(tup[i:] + tup[:i] for i in range(len(tup))) if tup else ()


def rotation_period(seq: Sequence) -> int:
    tup = tuple(seq)
    for k in range(1, len(tup) + 1):
        if tup[k:] + tup[:k] == tup:
            return k
    return 0


def necklace_of(seq: Sequence) -> NecklaceClass:
    return NecklaceClass(least_rotation(seq), rotation_period(seq))


def signed_chains(f: HeightFunction) -> SignedChainStructure:
    """Chain ends with signed lengths; raises on a jump-free function."""
    _, _, structure = average_height_torus(f)
    if not structure.positions:
        raise EmptyStructure("no chains: the jump set is empty")
    entries = tuple(
        (k, sign * t) for (k, t), sign in zip(structure.chains, structure.chain_signs)
    )
    return SignedChainStructure(entries)


def necklace_W(f: HeightFunction) -> NecklaceClass:
    """Rotation class of the signed chain lengths in circular order."""
    return necklace_of(signed_chains(f).signed_lengths())


def necklace_Z(f: HeightFunction) -> NecklaceClass:
    """Rotation class of (half gap before chain, signed length) pairs."""
    sc = signed_chains(f).entries
    n, d = f.graph.n, f.graph.d
    span = 2 * d + 1
    pairs = []
    for i, (k, w) in enumerate(sc):
        prev_k = sc[i - 1][0]
        gap = rho_plus(prev_k, (k - span * abs(w) - 2) % n, n)
        pairs.append((gap // 2, w))
    return necklace_of(pairs)


def necklace_D(f: HeightFunction) -> NecklaceClass:
    """Rotation class of the half gaps alone."""
    return necklace_of(tuple(x for x, _ in necklace_Z(f).representative))


def range_of_signed_lengths(w: Sequence[int]) -> int:
    """Size of the smallest interval containing all partial sums of ``w``."""
    acc = 0
    lo = hi = 0
    for step in w:
        acc += step
        lo = min(lo, acc)
        hi = max(hi, acc)
    return 1 + hi - lo


def range_from_W(f: HeightFunction) -> int:
    """Range of the function from its chain necklace: ``2 + range(W)``."""
    return 2 + range_of_signed_lengths(necklace_W(f).representative)


# ---------------------------------------------------------------------------
# Structure counting and generation
# ---------------------------------------------------------------------------

def count_one_chains(n: int, d: int, r: int) -> int:
    """Feasible jump structures whose 2r jumps are all singleton chains."""
    if r < 1:
        raise InvalidParameter("r must be at least 1")
    if n % 2:
        raise InvalidParameter("n must be even")
    top = n // 2 - (2 * d + 1) * r - 1
    if top < 2 * r - 1:
        return 0
    num = n * math.comb(top, 2 * r - 1)
    assert num % (2 * r) == 0
    return num // (2 * r)


def feasible_position_sets(n: int, d: int) -> Iterator[tuple[int, ...]]:
    """All nonempty jump position sets with legal cyclic gaps and at least
    one chain boundary (so that a chain structure exists)."""
    span = 2 * d + 1

    def rec(first: int, prefix: list[int]) -> Iterator[tuple[int, ...]]:
        wrap = first + n - prefix[-1]
        if wrap >= span and wrap % 2 == 1:
            yield tuple(prefix)
        nxt = prefix[-1] + span
        while nxt < n:
            if (nxt - prefix[-1]) % 2 == 1:
                prefix.append(nxt)
                yield from rec(first, prefix)
                prefix.pop()
            nxt += 1

    for first in range(n):
        yield from rec(first, [first])


def feasible_sign_vectors(chains: Sequence[tuple[int, int]]) -> Iterator[tuple[int, ...]]:
    """All chain sign assignments whose signed lengths sum to zero."""
    m = len(chains)

    def rec(i: int, total: int, prefix: list[int]) -> Iterator[tuple[int, ...]]:
        if i == m:
            if total == 0:
                yield tuple(prefix)
            return
        rest = sum(t for _, t in chains[i:])
        if abs(total) > rest:
            return
        for sign in (-1, 1):
            prefix.append(sign)
            yield from rec(i + 1, total + sign * chains[i][1], prefix)
            prefix.pop()

    yield from rec(0, 0, [])


def all_feasible_structures(n: int, d: int) -> Iterator[TorusJumpStructure]:
    """Every feasible signed jump structure (excluding the empty one)."""
    span = 2 * d + 1
    for pos in feasible_position_sets(n, d):
        try:
            chains = _chains_from_positions(pos, n, d)
        except InfeasibleStructure:
            continue
        for chain_signs in feasible_sign_vectors(chains):
            by_pos = {}
            for (k, t), sign in zip(chains, chain_signs):
                for j in range(t):
                    by_pos[(k - j * span) % n] = sign
            yield TorusJumpStructure(n, d, tuple(pos), tuple(by_pos[p] for p in pos))
