"""Samplers: exact sequential, exhaustive-table, Glauber, and perfect CFTP.

Exact line sampling walks the word encoding letter by letter, choosing each
letter with probability (completions after) / (completions before) from the
exact big-integer count table; equivalently it unranks a uniform index, so
the output law is exactly uniform.

The Markov chain used everywhere is single-site heat bath: resample one
height from the values consistent with all its neighbors (one or two
choices).  With a shared (site, coin) update, writing mn/mx for the min/max
over neighbor heights, the new height is mn+1 on an up coin and mx-1 on a
down coin; this coincides with heat bath and is monotone, which makes the
coupling-from-the-past sandwich work: run the chain from the pointwise
maximal and minimal states (the graph-distance function and its negation)
from epochs -1, -2, -4, ... with the same randomness per time step, and
return the common state upon coalescence.

Per-timestep randomness is counter-based (a 64-bit mixer keyed by
replication and time), so epochs reuse past randomness exactly without
storing it.  A numba kernel runs replications in parallel; a pure-Python
mirror of the same arithmetic serves as reference.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from . import words
from .core import (
    GraphSpec,
    HeightFunction,
    Topology,
    line_graph,
    validate,
    zigzag,
)
from .counting import _table, enumerate_homomorphisms, hom_count_line
from .errors import InvalidParameter, NonCoalescence

_MASK = (1 << 64) - 1
_C1 = 0x9E3779B97F4A7C15
_C2 = 0xBF58476D1CE4E5B9


class Method(str, Enum):
    EXACT_DP = "dp"
    EXACT_TABLE = "table"
    GLAUBER = "glauber"
    CFTP = "cftp"
    LIPSCHITZ = "lipschitz"


@dataclass(frozen=True)
class SamplerConfig:
    graph: GraphSpec
    method: Method
    seed: int
    steps: int = 0

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if self.method is Method.EXACT_DP:
            if self.graph.topology is not Topology.LINE or self.graph.d < 1:
                raise InvalidParameter("the sequential exact sampler needs a line with d >= 1")
        if self.method is Method.GLAUBER and self.steps < 1:
            raise InvalidParameter("Glauber sampling needs steps >= 1")


def replication_seed(seed: int, rep: int) -> np.random.SeedSequence:
    """Splittable per-replication randomness: same stream regardless of how
    replications are scheduled."""
    return np.random.SeedSequence(entropy=seed, spawn_key=(rep,))


def _python_rng(seed: int, rep: int = 0) -> random.Random:
    state = replication_seed(seed, rep).generate_state(2, np.uint64)
    return random.Random(int(state[0]) << 64 | int(state[1]))


def _keys(seed: int, rep: int) -> tuple[int, int]:
    state = replication_seed(seed, rep).generate_state(2, np.uint64)
    return int(state[0]), int(state[1])


# ---------------------------------------------------------------------------
# Exact sequential sampler on the line (also an unranking)
# ---------------------------------------------------------------------------

class LineSampler:
    """Uniform sampling of line height functions via the word encoding.

    ``unrank`` is a bijection from 0..count-1 to the functions, so feeding
    it uniform indices gives exactly uniform samples.
    """

    def __init__(self, n: int, d: int):
        if d < 1 or n < 1:
            raise InvalidParameter("exact sampling needs n >= 1 and d >= 1")
        self.n = n
        self.d = d
        self.count = hom_count_line(n, d)
        self._graph = line_graph(n, d)
        self._ctable = _table(d)
        self._options: dict[tuple, list] = {}

    def _letter_options(self, state, rem: int) -> list:
        key = (state, rem)
        cached = self._options.get(key)
        if cached is not None:
            return cached
        opts = []
        for letter in words.ALPHABET:
            nxt = words.step_state(state, letter, self.d)
            if nxt is None:
                continue
            m = rem - words.LETTER_WEIGHT[letter]
            cnt = self._ctable.c(m, self.d - words.streak_level(nxt) - 1)
            if cnt:
                opts.append((letter, nxt, cnt))
        self._options[key] = opts
        return opts

    def unrank(self, index: int) -> HeightFunction:
        if not 0 <= index < self.count:
            raise InvalidParameter(f"index must be in 0..{self.count - 1}")
        x = index
        state = words.START
        letters = []
        w = 0
        while w < self.n:
            for letter, nxt, cnt in self._letter_options(state, self.n - w):
                if x < cnt:
                    letters.append(letter)
                    state = nxt
                    w += words.LETTER_WEIGHT[letter]
                    break
                x -= cnt
            else:
                raise AssertionError("count table inconsistent with options")
        steps = words.expand("".join(letters))[: self.n]
        vals = [0]
        for s in steps:
            vals.append(vals[-1] + s)
        return HeightFunction(self._graph, tuple(vals))

    def sample(self, rng: random.Random) -> HeightFunction:
        return self.unrank(rng.randrange(self.count))


@lru_cache(maxsize=None)
def line_sampler(n: int, d: int) -> LineSampler:
    return LineSampler(n, d)


def exact_sample_line(n: int, d: int, rng: random.Random) -> HeightFunction:
    """One exactly uniform height function on the line.

    ``d = 0`` is the unconstrained walk: independent uniform steps.
    """
    if d == 0:
        vals = [0]
        for _ in range(n):
            vals.append(vals[-1] + (1 if rng.random() < 0.5 else -1))
        return HeightFunction(line_graph(n, 0), tuple(vals))
    return line_sampler(n, d).sample(rng)


def exact_samples_line(n: int, d: int, reps: int, seed: int) -> list[HeightFunction]:
    rng = _python_rng(seed)
    if d == 0:
        return [exact_sample_line(n, 0, rng) for _ in range(reps)]
    sampler = line_sampler(n, d)
    return [sampler.sample(rng) for _ in range(reps)]


# ---------------------------------------------------------------------------
# Exhaustive-table sampler (small graphs, both topologies)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _enumeration(graph: GraphSpec) -> tuple[HeightFunction, ...]:
    return tuple(enumerate_homomorphisms(graph))

def exact_sample_table(graph: GraphSpec, rng: random.Random) -> HeightFunction:
    """Uniform sample by indexing into the cached full enumeration."""
    table = _enumeration(graph)
    return table[rng.randrange(len(table))]


# ---------------------------------------------------------------------------
# Heat-bath updates
# ---------------------------------------------------------------------------

def _neighbor_extremes(values, graph: GraphSpec, site: int) -> tuple[int, int]:
    mn = None
    mx = None
    for j in graph.neighbors(site):
        v = values[j]
        mn = v if mn is None or v < mn else mn
        mx = v if mx is None or v > mx else mx
    return mn, mx


def glauber_step(f: HeightFunction, site: int, rng: random.Random) -> HeightFunction:
    """Heat-bath resampling of one site: uniform over the one or two heights
    consistent with all neighbors."""
    if site not in f.graph.update_sites:
        raise InvalidParameter(f"site must be in 1..{f.graph.num_vertices - 1}")
    mn, mx = _neighbor_extremes(f.values, f.graph, site)
    new = mn + 1 if rng.random() < 0.5 else mx - 1
    if new == f.values[site]:
        return f
    vals = list(f.values)
    vals[site] = new
    return HeightFunction(f.graph, tuple(vals))


@lru_cache(maxsize=None)
def _neighbor_table(graph: GraphSpec) -> tuple[np.ndarray, np.ndarray]:
    """(sites x degree) neighbor indices plus per-site degree, for the
    compiled kernels; row ``site - 1`` lists the neighbors of ``site``."""
    nsites = graph.num_vertices - 1
    rows = [sorted(set(graph.neighbors(v))) for v in range(1, nsites + 1)]
    width = max(len(r) for r in rows)
    nbr = np.zeros((nsites, width), dtype=np.int64)
    deg = np.zeros(nsites, dtype=np.int64)
    for i, r in enumerate(rows):
        deg[i] = len(r)
        nbr[i, : len(r)] = r
    return nbr, deg


def run_glauber(config: SamplerConfig) -> HeightFunction:
    """Run heat bath from the flat start for ``config.steps`` updates."""
    if config.method is not Method.GLAUBER:
        raise InvalidParameter("config.method must be glauber")
    graph = config.graph
    vals = np.array(zigzag(graph).values, dtype=np.int64)
    nbr, deg = _neighbor_table(graph)
    key1, key2 = _keys(config.seed, 0)
    _kernels().glauber_run(
        vals, np.int64(config.steps), np.uint64(key1), np.uint64(key2), nbr, deg,
    )
    return validate(vals.tolist(), graph)


def glauber_histogram(graph: GraphSpec, sweeps: int, seed: int) -> np.ndarray:
    """Occupation counts over all states from a long heat-bath run,
    recording once per sweep; states indexed by their step-sequence bits."""
    num_steps = graph.num_vertices - 1
    if num_steps > 24:
        raise InvalidParameter("histogram only for small graphs")
    vals = np.array(zigzag(graph).values, dtype=np.int64)
    nbr, deg = _neighbor_table(graph)
    key1, key2 = _keys(seed, 0)
    counts = np.zeros(2 ** num_steps, dtype=np.int64)
    _kernels().glauber_hist(
        vals, np.int64(sweeps), np.uint64(key1), np.uint64(key2), nbr, deg, counts,
    )
    return counts


def pointwise_max(f: HeightFunction, g: HeightFunction) -> HeightFunction:
    """Sitewise maximum; valid again because same-parity heights differ by
    even amounts."""
    if f.graph != g.graph:
        raise InvalidParameter("functions must share a graph")
    return validate([max(a, b) for a, b in zip(f.values, g.values)], f.graph)


def pointwise_min(f: HeightFunction, g: HeightFunction) -> HeightFunction:
    if f.graph != g.graph:
        raise InvalidParameter("functions must share a graph")
    return validate([min(a, b) for a, b in zip(f.values, g.values)], f.graph)


def extreme_states(graph: GraphSpec) -> tuple[HeightFunction, HeightFunction]:
    """The pointwise maximal and minimal height functions.

    The breadth-first distance from the root changes by exactly one along
    every edge (the graph is bipartite by parity), so it is itself a height
    function and dominates all others; its negation is minimal.
    """
    size = graph.num_vertices
    dist = [-1] * size
    dist[0] = 0
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for j in graph.neighbors(v):
            if dist[j] < 0:
                dist[j] = dist[v] + 1
                queue.append(j)
    top = validate(dist, graph)
    bot = validate([-x for x in dist], graph)
    return top, bot


# ---------------------------------------------------------------------------
# Counter-based randomness shared by the python and numba engines
# ---------------------------------------------------------------------------

def _splitmix64_py(x: int) -> int:
    x &= _MASK
    z = (x + _C1) & _MASK
    z = ((z ^ (z >> 30)) * _C2) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def _site_coin_py(key1: int, key2: int, t: int, nsites: int) -> tuple[int, int]:
    span = _MASK - _MASK % nsites
    attempt = 0
    while True:
        x = _splitmix64_py(key1 + t * _C1 + attempt * _C2)
        if x < span:
            break
        attempt += 1
    coin = _splitmix64_py(key2 + t * _C1) >> 63
    return 1 + x % nsites, coin


def _sandwich_update(top, bot, graph: GraphSpec, site: int, coin: int) -> None:
    tmn, tmx = _neighbor_extremes(top, graph, site)
    bmn, bmx = _neighbor_extremes(bot, graph, site)
    if coin:
        top[site] = tmn + 1
        bot[site] = bmn + 1
    else:
        top[site] = tmx - 1
        bot[site] = bmx - 1


def _cftp_one_py(graph: GraphSpec, key1: int, key2: int, max_epoch: int):
    """Reference implementation; identical arithmetic to the numba kernel."""
    top0, bot0 = extreme_states(graph)
    nsites = graph.num_vertices - 1
    epoch = 1
    while True:
        top = list(top0.values)
        bot = list(bot0.values)
        for t in range(epoch, 0, -1):
            site, coin = _site_coin_py(key1, key2, t, nsites)
            _sandwich_update(top, bot, graph, site, coin)
        if top == bot:
            return top, epoch
        if epoch >= max_epoch:
            return None, epoch
        epoch *= 2


# ---------------------------------------------------------------------------
# numba kernels (compiled lazily; import cost only when first used)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1)
def _kernels():
    from . import _kernels as kernels
    return kernels


# ---------------------------------------------------------------------------
# Coupling from the past
# ---------------------------------------------------------------------------

#: largest epoch attempted before reporting non-coalescence
CFTP_MAX_EPOCH = 2 ** 30


def cftp_sample(config: SamplerConfig, rep: int = 0,
                max_epoch: int = CFTP_MAX_EPOCH,
                start_epoch: int = 1) -> HeightFunction:
    """One perfect sample by monotone coupling from the past.

    ``start_epoch`` is the first epoch tried (any value is correct; a guess
    near the typical coalescence epoch skips useless short epochs).  Raises
    :class:`NonCoalescence` instead of ever returning a biased state.
    """
    if config.method is not Method.CFTP:
        raise InvalidParameter("config.method must be cftp")
    graph = config.graph
    if graph.d < 1:
        raise InvalidParameter("coupling from the past needs d >= 1")
    key1, key2 = _keys(config.seed, rep)
    top, _ = extreme_states(graph)
    dist = np.array(top.values, dtype=np.int64)
    nbr, deg = _neighbor_table(graph)
    out = np.empty_like(dist)
    bot = np.empty_like(dist)
    e = _kernels().cftp_one(
        dist, np.uint64(key1), np.uint64(key2), nbr, deg,
        np.int64(start_epoch), np.int64(max_epoch), out, bot,
    )
    if e < 0:
        raise NonCoalescence(max_epoch)
    return validate(out.tolist(), graph)


def cftp_samples(graph: GraphSpec, reps: int, seed: int,
                 max_epoch: int = CFTP_MAX_EPOCH,
                 start_epoch: int = 1,
                 return_epochs: bool = False):
    """Independent perfect samples, replications in parallel."""
    if graph.d < 1:
        raise InvalidParameter("coupling from the past needs d >= 1")
    top, _ = extreme_states(graph)
    dist = np.array(top.values, dtype=np.int64)
    nbr, deg = _neighbor_table(graph)
    keys = np.array([_keys(seed, r) for r in range(reps)], dtype=np.uint64)
    out = np.empty((reps, dist.shape[0]), dtype=np.int64)
    epochs = np.empty(reps, dtype=np.int64)
    _kernels().cftp_batch(
        dist, keys[:, 0], keys[:, 1], nbr, deg,
        np.int64(start_epoch), np.int64(max_epoch), out, epochs,
    )
    if np.any(epochs < 0):
        raise NonCoalescence(max_epoch)
    samples = [HeightFunction(graph, tuple(int(v) for v in row)) for row in out]
    if return_epochs:
        return samples, epochs
    return samples


# ---------------------------------------------------------------------------
# Continuous Lipschitz model
# ---------------------------------------------------------------------------

def _lipschitz_offsets(d: int, all_distances: bool) -> np.ndarray:
    if all_distances:
        return np.arange(1, d + 2, dtype=np.int64)
    return np.arange(1, 2 * d + 2, 2, dtype=np.int64)


def lipschitz_glauber(n: int, d: int, steps: int, rng: np.random.Generator,
                      all_distances: bool = False,
                      start: np.ndarray | None = None) -> np.ndarray:
    """Heat bath for real-valued 1-Lipschitz functions on the line.

    Each update redraws one height uniformly on the interval allowed by its
    neighbors (intersection of [height-1, height+1] over neighbors), which
    preserves normalized Lebesgue measure on the constraint polytope.  With
    ``all_distances`` the graph connects all pairs at distance up to d+1
    regardless of parity.
    """
    offs = _lipschitz_offsets(d, all_distances)
    if start is None:
        f = np.zeros(n + 1)
    else:
        f = np.array(start, dtype=float)
        if f.shape != (n + 1,) or f[0] != 0.0:
            raise InvalidParameter("start must have length n+1 and root 0")
    sites = rng.integers(1, n + 1, size=steps)
    coins = rng.random(steps)
    for site, u in zip(sites, coins):
        lo, hi = _lipschitz_interval(f, site, offs, n)
        f[site] = lo + u * (hi - lo)
    return f


def _lipschitz_interval(f: np.ndarray, site: int, offs: np.ndarray, n: int):
    lo, hi = -np.inf, np.inf
    for off in offs:
        for j in (site - off, site + off):
            if 0 <= j <= n:
                v = f[j]
                lo = max(lo, v - 1.0)
                hi = min(hi, v + 1.0)
    return lo, hi


def lipschitz_glauber_batch(n: int, d: int, sweeps: int, reps: int, seed: int,
                            all_distances: bool = False,
                            start: np.ndarray | None = None) -> np.ndarray:
    """Many independent Lipschitz chains advanced in lockstep (vectorized
    across replications); returns the (reps, n+1) final states."""
    offs = _lipschitz_offsets(d, all_distances)
    rng = np.random.default_rng(replication_seed(seed, 0))
    if start is None:
        f = np.zeros((reps, n + 1))
    else:
        f = np.array(start, dtype=float)
        if f.shape != (reps, n + 1):
            raise InvalidParameter("start must have shape (reps, n+1)")
        f = f.copy()
    rows = np.arange(reps)
    for _ in range(sweeps * n):
        sites = rng.integers(1, n + 1, size=reps)
        idx = sites[:, None] + np.concatenate([offs, -offs])[None, :]
        valid = (idx >= 0) & (idx <= n)
        vals = f[rows[:, None], np.clip(idx, 0, n)]
        lo = np.where(valid, vals - 1.0, -np.inf).max(axis=1)
        hi = np.where(valid, vals + 1.0, np.inf).min(axis=1)
        f[rows, sites] = lo + rng.random(reps) * (hi - lo)
    return f
