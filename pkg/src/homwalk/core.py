"""Graphs, height functions, and their elementary operations.

Two graph families are supported.  The *line* graph on vertices ``0..n``
connects every pair of vertices at odd distance ``1, 3, ..., 2d+1``.  The
*torus* graph on vertices ``0..n-1`` (``n`` even) uses the same rule with
cyclic distance.  A height function is an integer labelling with ``f(0) = 0``
that changes by exactly one along every edge; ``d = 0`` on the line
degenerates to a simple random walk and is allowed there only.

All types are immutable values; operations are pure functions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

from .errors import (
    EdgeViolation,
    InvalidParameter,
    RootNotZero,
    WrongLength,
)


class Topology(str, Enum):
    LINE = "line"
    TORUS = "torus"


@dataclass(frozen=True)
class GraphSpec:
    """Which graph: topology, size ``n``, and constraint radius ``d``.

    ``n`` counts the non-root vertices on the line (vertices ``0..n``) and
    all vertices on the torus (``0..n-1``).  Edges join vertices at odd
    distance up to ``2d+1``.
    """

    topology: Topology
    n: int
    d: int

    def __post_init__(self):
        object.__setattr__(self, "topology", Topology(self.topology))
        if self.d < 0:
            raise InvalidParameter(f"d must be nonnegative, got {self.d}")
        if self.topology is Topology.LINE:
            if self.n < 1:
                raise InvalidParameter(f"line graph needs n >= 1, got {self.n}")
        else:
            if self.n < 4 or self.n % 2:
                raise InvalidParameter(f"torus needs even n >= 4, got {self.n}")
            if self.d < 1:
                raise InvalidParameter("torus needs d >= 1")

    @property
    def num_vertices(self) -> int:
        return self.n + 1 if self.topology is Topology.LINE else self.n

    @property
    def update_sites(self) -> range:
        """Vertices that may be resampled while keeping the root pinned."""
        return range(1, self.num_vertices)

    def neighbors(self, v: int) -> Iterator[int]:
        offs = range(1, 2 * self.d + 2, 2)
        if self.topology is Topology.LINE:
            for off in offs:
                if v - off >= 0:
                    yield v - off
                if v + off <= self.n:
                    yield v + off
        else:
            for off in offs:
                yield (v - off) % self.n
                yield (v + off) % self.n

    def edges(self) -> Iterator[tuple[int, int]]:
        """All edges ``(i, j)`` with ``i < j``, in lexicographic order."""
        if self.topology is Topology.LINE:
            for i in range(self.n + 1):
                for off in range(1, 2 * self.d + 2, 2):
                    if i + off <= self.n:
                        yield (i, i + off)
        else:
            for i in range(self.n):
                for j in range(i + 1, self.n):
                    dist = min(j - i, self.n - (j - i))
                    if dist % 2 == 1 and dist <= 2 * self.d + 1:
                        yield (i, j)


def line_graph(n: int, d: int) -> GraphSpec:
    return GraphSpec(Topology.LINE, n, d)


def torus_graph(n: int, d: int) -> GraphSpec:
    return GraphSpec(Topology.TORUS, n, d)


@dataclass(frozen=True)
class HeightFunction:
    """A validated height function on a :class:`GraphSpec`.

    Construct through :func:`validate` (or the enumeration/samplers, which
    produce only valid functions).
    """

    graph: GraphSpec
    values: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> int:
        if self.graph.topology is Topology.TORUS:
            return self.values[k % self.graph.n]
        return self.values[k]

    def to_json(self) -> str:
        return json.dumps(
            {
                "topology": self.graph.topology.value,
                "n": self.graph.n,
                "d": self.graph.d,
                "values": list(self.values),
            },
            separators=(",", ":"),
        )

    @staticmethod
    def from_json(line: str) -> "HeightFunction":
        obj = json.loads(line)
        graph = GraphSpec(Topology(obj["topology"]), obj["n"], obj["d"])
        return validate(obj["values"], graph)


def validate(values: Sequence[int], graph: GraphSpec) -> HeightFunction:
    """Check a value sequence against the graph and wrap it.

    Raises :class:`WrongLength`, :class:`RootNotZero`, or
    :class:`EdgeViolation` naming the lexicographically smallest offending
    edge.
    """
    vals = tuple(int(v) for v in values)
    if len(vals) != graph.num_vertices:
        raise WrongLength(
            f"expected {graph.num_vertices} values for {graph.topology.value} "
            f"n={graph.n}, got {len(vals)}"
        )
    if vals[0] != 0:
        raise RootNotZero(f"root value must be 0, got {vals[0]}")
    for i, j in graph.edges():
        if abs(vals[i] - vals[j]) != 1:
            raise EdgeViolation(i, j)
    return HeightFunction(graph, vals)


def is_valid(values: Sequence[int], graph: GraphSpec) -> bool:
    try:
        validate(values, graph)
        return True
    except (WrongLength, RootNotZero, EdgeViolation):
        return False


def range_size(f: HeightFunction) -> int:
    """Number of distinct values taken; always at least 2."""
    return len(set(f.values))


def derivative(f: HeightFunction) -> tuple[int, ...]:
    """Successive differences ``f(k) - f(k-1)``, each in {-1, +1}.

    On the torus the wrap-around step ``f(0) - f(n-1)`` is excluded, so the
    result has length ``n`` on the line and ``n - 1`` on the torus.
    """
    return tuple(b - a for a, b in zip(f.values, f.values[1:]))


def from_derivative(steps: Sequence[int], graph: GraphSpec) -> HeightFunction:
    """Rebuild a height function from its steps and re-validate."""
    if any(s not in (-1, 1) for s in steps):
        raise InvalidParameter("steps must be +1/-1")
    vals = [0]
    for s in steps:
        vals.append(vals[-1] + s)
    return validate(vals, graph)


def zigzag(graph: GraphSpec, sign: int = 1) -> HeightFunction:
    """The flat function alternating 0, sign, 0, sign, ..."""
    if sign not in (-1, 1):
        raise InvalidParameter("sign must be +1 or -1")
    vals = tuple(sign * (k % 2) for k in range(graph.num_vertices))
    return HeightFunction(graph, vals)


def write_jsonl(path, functions) -> None:
    with open(path, "w") as fh:
        for f in functions:
            fh.write(f.to_json() + "\n")


def read_jsonl(path) -> list[HeightFunction]:
    out = []
    with open(path) as fh:
        for raw in fh:
            raw = raw.strip()
            if raw:
                out.append(HeightFunction.from_json(raw))
    return out
