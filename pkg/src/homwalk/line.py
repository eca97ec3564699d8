"""Structural decomposition of height functions on the line.

The *average height* ``h`` lazily follows the function: ``h(0) = 0`` and
``h(k)`` stays put unless the function moves more than one away, in which
case ``h(k) = f(k-1)``.  Vertices where ``h`` moves are *jumps*; maximal runs
of jumps at the minimal spacing ``2d+1`` form *chains*; vertices sitting off
the average height between chains are *fluctuation points*, each carrying one
free sign.  Fixing the jump positions, a height function is equivalent to one
sign per chain plus one sign per fluctuation point, and both directions of
that equivalence are implemented here.

Closed-form counts: with ``r`` the number of jumps after vertex ``2d+1`` and
``2i = min(S u {2d+2})``, the number of feasible jump position sets is a
binomial ``c_i(r)`` and each contributes ``b_i(r)`` (a power of two) height
functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .core import HeightFunction, Topology, line_graph, validate
from .errors import (
    IndexOutOfRange,
    InfeasibleStructure,
    InvalidParameter,
    MalformedDecomposition,
)


def _require_line(f: HeightFunction, min_d: int = 1) -> None:
    if f.graph.topology is not Topology.LINE:
        raise InvalidParameter("line decomposition needs a line height function")
    if f.graph.d < min_d:
        raise InvalidParameter(f"operation needs d >= {min_d}")


# ---------------------------------------------------------------------------
# Average height and jumps
# ---------------------------------------------------------------------------

def average_height(f: HeightFunction) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The average height ``h[0..n]`` and its increments ``delta[1..n]``.

    ``delta`` is returned as a tuple of length ``n`` with ``delta[k-1]``
    holding ``h(k) - h(k-1)``; every entry is in {-1, 0, 1}.
    """
    _require_line(f)
    vals = f.values
    h = [0]
    for k in range(1, len(vals)):
        prev = h[-1]
        h.append(prev if abs(vals[k] - prev) <= 1 else vals[k - 1])
    delta = tuple(h[k] - h[k - 1] for k in range(1, len(vals)))
    return tuple(h), delta


@dataclass(frozen=True)
class LineJumpStructure:
    """A feasible set of jump positions on the line.

    Feasibility: the smallest position is even and consecutive gaps are odd
    and at least ``2d+1``; infeasible inputs are rejected eagerly.
    """

    n: int
    d: int
    positions: tuple[int, ...]

    def __post_init__(self):
        if self.d < 1:
            raise InvalidParameter("jump structures need d >= 1")
        pos = self.positions
        if any(not 1 <= s <= self.n for s in pos):
            raise InfeasibleStructure(f"positions must lie in 1..{self.n}")
        if list(pos) != sorted(set(pos)):
            raise InfeasibleStructure("positions must be strictly increasing")
        if pos:
            if pos[0] % 2:
                raise InfeasibleStructure(f"smallest jump {pos[0]} must be even")
            for a, b in zip(pos, pos[1:]):
                gap = b - a
                if gap % 2 == 0 or gap < 2 * self.d + 1:
                    raise InfeasibleStructure(
                        f"gap {gap} between {a} and {b} must be odd and >= {2 * self.d + 1}"
                    )

    def __len__(self) -> int:
        return len(self.positions)


def is_feasible(positions, n: int, d: int) -> bool:
    try:
        LineJumpStructure(n, d, tuple(positions))
        return True
    except InfeasibleStructure:
        return False


@dataclass(frozen=True)
class ChainStructure:
    """Chains ``(k, t)``: a run of ``t`` jumps at spacing ``2d+1`` ending at ``k``."""

    chains: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.chains)


def jump_structure(f: HeightFunction) -> LineJumpStructure:
    """Positions where the average height moves."""
    _, delta = average_height(f)
    pos = tuple(k for k in range(1, len(f.values)) if delta[k - 1] != 0)
    return LineJumpStructure(f.graph.n, f.graph.d, pos)


def chain_structure(structure: LineJumpStructure) -> ChainStructure:
    """Group jump positions into maximal runs at spacing exactly ``2d+1``."""
    span = 2 * structure.d + 1
    chains: list[tuple[int, int]] = []
    run_len = 0
    prev = None
    for s in structure.positions:
        if prev is not None and s - prev == span:
            run_len += 1
        else:
            if prev is not None:
                chains.append((prev, run_len))
            run_len = 1
        prev = s
    if prev is not None:
        chains.append((prev, run_len))
    return ChainStructure(tuple(chains))


def chain_points(structure: LineJumpStructure) -> list[int]:
    """All vertices covered by chains, including virtual negative indices.

    For a chain ``(k, t)`` this is the interval ``k - (2d+1)t - 1 .. k``; its
    left end may stick out below 0 for chains starting near the root.
    """
    span = 2 * structure.d + 1
    pts: list[int] = []
    for k, t in chain_structure(structure).chains:
        pts.extend(range(k - span * t - 1, k + 1))
    return pts


def fluctuation_points(structure: LineJumpStructure) -> tuple[int, ...]:
    """Vertices whose distance to the nearest chain point (or -1) on the left
    is even; each carries one free sign."""
    cp = set(chain_points(structure))
    out = []
    last = -1
    for k in range(0, structure.n + 1):
        if k >= 1 and (k - last) % 2 == 0:
            out.append(k)
        if k in cp:
            last = k
    return tuple(out)


def fluctuation_count(structure: LineJumpStructure) -> int:
    """Closed formula for the number of fluctuation points."""
    n, d = structure.n, structure.d
    size = len(structure.positions)
    if size == 0:
        return (n + 1) // 2
    m = len(chain_structure(structure).chains)
    head = max(0, d + 1 - structure.positions[0] // 2)
    return head + -((n - size) // -2) - d * size - m


# ---------------------------------------------------------------------------
# The decomposition and its inverse
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LineDecomposition:
    """(jump structure, one sign per chain, one sign per fluctuation point).

    Sign tuples are aligned with :func:`chain_structure` order and with
    sorted fluctuation points.
    """

    structure: LineJumpStructure
    chain_signs: tuple[int, ...]
    fluctuation_signs: tuple[int, ...]

    def __post_init__(self):
        chains = chain_structure(self.structure).chains
        if len(self.chain_signs) != len(chains):
            raise MalformedDecomposition(
                f"expected {len(chains)} chain signs, got {len(self.chain_signs)}"
            )
        fps = fluctuation_points(self.structure)
        if len(self.fluctuation_signs) != len(fps):
            raise MalformedDecomposition(
                f"expected {len(fps)} fluctuation signs, got {len(self.fluctuation_signs)}"
            )
        if any(s not in (-1, 1) for s in self.chain_signs + self.fluctuation_signs):
            raise MalformedDecomposition("signs must be +1/-1")


def _pattern(m: int, span: int) -> int:
    # the climb pattern 0,1,0,...,0 | 1,2,1,...,1 | 2,3,... in blocks of span
    return m // span + (m % span) % 2


def decode(dec: LineDecomposition) -> HeightFunction:
    """Rebuild the unique height function realizing a decomposition."""
    structure = dec.structure
    n, d = structure.n, structure.d
    span = 2 * d + 1
    chains = chain_structure(structure).chains
    fps = fluctuation_points(structure)
    y = dict(zip(fps, dec.fluctuation_signs))

    vals = [0] * (n + 1)
    cum = 0       # average height accumulated by finished chains
    last = -1     # most recent chain point below the cursor
    i = 0
    for (k, t), sign in zip(chains, dec.chain_signs):
        start = k - span * t - 1
        while i < start:
            vals[i] = cum + (y[i] if (i - last) % 2 == 0 else 0)
            i += 1
        while i <= k:
            vals[i] = cum + sign * _pattern(i - start, span)
            i += 1
        last = k
        cum += sign * t
    while i <= n:
        vals[i] = cum + (y[i] if (i - last) % 2 == 0 else 0)
        i += 1
    return validate(vals, line_graph(n, d))


def encode(f: HeightFunction) -> LineDecomposition:
    """Decompose a height function into jump structure plus free signs."""
    _require_line(f)
    structure = jump_structure(f)
    chains = chain_structure(structure).chains
    chain_signs = tuple(f.values[k] - f.values[k - 1] for k, _ in chains)
    fps = fluctuation_points(structure)
    fluct_signs = tuple(f.values[k] - f.values[k - 1] for k in fps)
    return LineDecomposition(structure, chain_signs, fluct_signs)


# ---------------------------------------------------------------------------
# Closed-form structure counts
# ---------------------------------------------------------------------------

def _comb(top: int, r: int) -> int:
    return math.comb(top, r) if top >= 0 else 0


def count_structures(n: int, d: int, r: int, i: int) -> int:
    """Number of feasible jump structures with ``r`` jumps after ``2d+1``
    and smallest jump ``2i`` (``i = d+1`` meaning no jump in the first window)."""
    if not 1 <= i <= d + 1:
        raise IndexOutOfRange(f"window index i must be in 1..{d + 1}")
    if r < 0:
        raise InvalidParameter("r must be nonnegative")
    if i == d + 1:
        return _comb((n - r - 1) // 2 - (d - 1) * r, r)
    return _comb((n - r) // 2 - (d - 1) * r - i, r)


def count_fluct_words(n: int, d: int, r: int, i: int) -> int:
    """Height functions per structure in the ``(r, i)`` class: a power of two."""
    if not 1 <= i <= d + 1:
        raise IndexOutOfRange(f"window index i must be in 1..{d + 1}")
    if r < 0:
        raise InvalidParameter("r must be nonnegative")
    if i == d + 1:
        e = -((n - r) // -2) - d * r
    else:
        e = -((n - r - 1) // -2) - d * r - i + 1
    return 2 ** e if e >= 0 else 0


def feasible_structures(n: int, d: int) -> Iterator[LineJumpStructure]:
    """Exhaustive generation of feasible jump structures (oracle for the
    closed-form counts); exponential in ``n / (2d+1)``."""
    span = 2 * d + 1

    def rec(prefix: list[int]) -> Iterator[LineJumpStructure]:
        yield LineJumpStructure(n, d, tuple(prefix))
        lo = prefix[-1] + span if prefix else 2
        for s in range(lo, n + 1):
            if prefix and (s - prefix[-1]) % 2 == 0:
                continue
            if not prefix and s % 2:
                continue
            prefix.append(s)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])
