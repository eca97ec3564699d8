"""Compiled inner loops for the Markov chain samplers.

Randomness is counter-based: a 64-bit finalizer keyed by (replication key,
absolute time step) yields the update site and coin, so coupling from the
past can revisit old time steps without storing anything.  The pure-Python
mirrors in :mod:`homwalk.sampling` reproduce this arithmetic bit for bit.

Neighborhoods are passed as a precomputed (sites x degree) index table with
a per-site degree, which keeps the hot loop free of bounds and modulo
arithmetic.  Import of this module triggers numba compilation (cached on
disk).
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

_C1 = np.uint64(0x9E3779B97F4A7C15)
_C2 = np.uint64(0xBF58476D1CE4E5B9)
_C3 = np.uint64(0x94D049BB133111EB)
_FULL = np.uint64(0xFFFFFFFFFFFFFFFF)


@njit(cache=True, inline="always")
def _splitmix(x):
    z = x + _C1
    z = (z ^ (z >> np.uint64(30))) * _C2
    z = (z ^ (z >> np.uint64(27))) * _C3
    return z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def _site_coin(key1, key2, t, nsites):
    span = _FULL - _FULL % np.uint64(nsites)
    attempt = np.uint64(0)
    x = _splitmix(key1 + np.uint64(t) * _C1)
    while x >= span:
        attempt += np.uint64(1)
        x = _splitmix(key1 + np.uint64(t) * _C1 + attempt * _C2)
    coin = _splitmix(key2 + np.uint64(t) * _C1) >> np.uint64(63)
    return np.int64(x % np.uint64(nsites)) + 1, np.int64(coin)


@njit(cache=True, inline="always")
def _heat_bath(vals, site, coin, nbr, deg):
    row = site - 1
    if coin:
        mn = vals[nbr[row, 0]]
        for k in range(1, deg[row]):
            v = vals[nbr[row, k]]
            if v < mn:
                mn = v
        vals[site] = mn + 1
    else:
        mx = vals[nbr[row, 0]]
        for k in range(1, deg[row]):
            v = vals[nbr[row, k]]
            if v > mx:
                mx = v
        vals[site] = mx - 1


@njit(cache=True)
def cftp_one(dist, key1, key2, nbr, deg, start_epoch, max_epoch, top, bot):
    """Monotone sandwich from one replication key; returns the coalescence
    epoch or -1, leaving the sample in ``top``."""
    length = dist.shape[0]
    nsites = length - 1
    epoch = start_epoch
    while True:
        for i in range(length):
            top[i] = dist[i]
            bot[i] = -dist[i]
        for t in range(epoch, 0, -1):
            site, coin = _site_coin(key1, key2, t, nsites)
            row = site - 1
            if coin:
                tmn = top[nbr[row, 0]]
                bmn = bot[nbr[row, 0]]
                for k in range(1, deg[row]):
                    j = nbr[row, k]
                    v = top[j]
                    if v < tmn:
                        tmn = v
                    v = bot[j]
                    if v < bmn:
                        bmn = v
                top[site] = tmn + 1
                bot[site] = bmn + 1
            else:
                tmx = top[nbr[row, 0]]
                bmx = bot[nbr[row, 0]]
                for k in range(1, deg[row]):
                    j = nbr[row, k]
                    v = top[j]
                    if v > tmx:
                        tmx = v
                    v = bot[j]
                    if v > bmx:
                        bmx = v
                top[site] = tmx - 1
                bot[site] = bmx - 1
        same = True
        for i in range(length):
            if top[i] != bot[i]:
                same = False
                break
        if same:
            return epoch
        if epoch >= max_epoch:
            return np.int64(-1)
        epoch *= 2


@njit(cache=True, parallel=True)
def cftp_batch(dist, keys1, keys2, nbr, deg, start_epoch, max_epoch, out, epochs):
    reps = keys1.shape[0]
    length = dist.shape[0]
    for r in prange(reps):
        top = np.empty(length, np.int64)
        bot = np.empty(length, np.int64)
        e = cftp_one(dist, keys1[r], keys2[r], nbr, deg, start_epoch, max_epoch, top, bot)
        epochs[r] = e
        for i in range(length):
            out[r, i] = top[i]


@njit(cache=True)
def glauber_run(vals, steps, key1, key2, nbr, deg):
    nsites = vals.shape[0] - 1
    for t in range(1, steps + 1):
        site, coin = _site_coin(key1, key2, t, nsites)
        _heat_bath(vals, site, coin, nbr, deg)


@njit(cache=True)
def glauber_hist(vals, sweeps, key1, key2, nbr, deg, counts):
    """Advance one sweep at a time, recording the visited state (encoded by
    its step bits) once per sweep."""
    length = vals.shape[0]
    nsites = length - 1
    t = np.int64(0)
    for _ in range(sweeps):
        for _ in range(nsites):
            t += 1
            site, coin = _site_coin(key1, key2, t, nsites)
            _heat_bath(vals, site, coin, nbr, deg)
        code = np.int64(0)
        for i in range(1, length):
            code = (code << 1) | np.int64(vals[i] > vals[i - 1])
        counts[code] += 1
