"""Counter-based random streams.

Every random source owns a 64-bit key derived from ``(seed, stream id)``; its
``t``-th draw is ``mix64(key + (t + 1) * GAMMA)`` (the SplitMix64 output
function).  Draws therefore depend only on the seed, the stream id and the
time index, never on the order in which sources are evaluated.
"""
from __future__ import annotations

import numba as nb
import numpy as np

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_STREAM = np.uint64(0xD1B54A32D192ED03)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)

TWO53 = float(2**53)


@nb.njit(cache=True)
def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@nb.njit(cache=True)
def stream_key(seed, stream):
    return mix64(mix64(seed + GAMMA) ^ ((stream + _ONE) * _STREAM))


@nb.njit(cache=True)
def draw53(key, counter):
    """53 uniform bits for time index ``counter``."""
    return mix64(key + (counter + _ONE) * GAMMA) >> _S11


@nb.njit(cache=True)
def thresholds(mass, out):
    """Cumulative thresholds on the 53-bit draw for a mass over ``len(mass)`` symbols."""
    acc = 0.0
    for k in range(mass.shape[0] - 1):
        acc += mass[k]
        out[k] = np.uint64(min(acc, 1.0) * TWO53)


@nb.njit(cache=True)
def pick(u, thr, q):
    s = 0
    for k in range(q - 1):
        if u >= thr[k]:
            s += 1
    return s


def derive_seed(*parts: int) -> int:
    """A 64-bit seed derived from a tuple of non-negative integers."""
    seq = np.random.SeedSequence([int(p) for p in parts])
    return int(seq.generate_state(1, np.uint64)[0])


def key_for(seed: int, stream: int) -> np.uint64:
    # numba hands uint64 results back as Python ints; keep the type for later calls
    return np.uint64(stream_key(np.uint64(seed), np.uint64(stream)))
