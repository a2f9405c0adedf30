"""Deterministic split-stream Gaussian random numbers.

Substream ``i`` of master seed ``s`` is a xoshiro256** generator whose state is
derived from ``(s, i)`` through splitmix64 mixing. Standard normals come from
the 128-layer ziggurat (Marsaglia & Tsang, with Doornik's independent
layer index), which is an exact transform.

The generator is written as numba ``inline`` functions whose state lives in
four scalar ``uint64`` locals. Kernels that need random numbers (the
ensemble integrator) call :func:`seed_state` and :func:`next_normal`
directly, so a path simulated there consumes exactly the sequence that
:func:`gaussian_samples` returns for the same substream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba as nb
import numpy as np

_U64 = nb.uint64
_MASK64 = (1 << 64) - 1

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_STREAM_SALT = np.uint64(0xD1B54A32D192ED03)
_TWO_M53 = 1.0 / 9007199254740992.0


def _ziggurat_tables(layers=128, r=3.442619855899, v=9.91256303526217e-3):
    x = np.zeros(layers + 1)
    f = math.exp(-0.5 * r * r)
    x[0] = v / f
    x[1] = r
    for i in range(2, layers):
        x[i] = math.sqrt(-2.0 * math.log(v / x[i - 1] + f))
        f = math.exp(-0.5 * x[i] * x[i])
    ratio = x[1:] / x[:-1]
    return x, ratio, r


ZIG_X, ZIG_RATIO, ZIG_R = _ziggurat_tables()


@nb.njit(inline="always")
def _mix64(z):
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


@nb.njit(inline="always")
def seed_state(master_seed, index):
    """xoshiro256** state for substream ``index`` of ``master_seed`` (both uint64)."""
    key = _mix64(master_seed ^ _GOLDEN)
    key = _mix64(key ^ ((index + _U64(1)) * _STREAM_SALT))
    x = key + _GOLDEN
    s0 = _mix64(x)
    x += _GOLDEN
    s1 = _mix64(x)
    x += _GOLDEN
    s2 = _mix64(x)
    x += _GOLDEN
    s3 = _mix64(x)
    if (s0 | s1 | s2 | s3) == _U64(0):
        s0 = _GOLDEN
    return s0, s1, s2, s3


@nb.njit(inline="always")
def next_u64(s0, s1, s2, s3):
    m = s1 * _U64(5)
    out = ((m << _U64(7)) | (m >> _U64(57))) * _U64(9)
    t = s1 << _U64(17)
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = (s3 << _U64(45)) | (s3 >> _U64(19))
    return out, s0, s1, s2, s3


@nb.njit(inline="always")
def next_uniform(s0, s1, s2, s3):
    """Uniform on (0, 1]."""
    b, s0, s1, s2, s3 = next_u64(s0, s1, s2, s3)
    return (np.float64(b >> _U64(11)) + 1.0) * _TWO_M53, s0, s1, s2, s3


@nb.njit(inline="always")
def next_normal(s0, s1, s2, s3):
    while True:
        b, s0, s1, s2, s3 = next_u64(s0, s1, s2, s3)
        u = np.float64(b >> _U64(11)) * (2.0 * _TWO_M53) - 1.0
        i = np.intp(b & _U64(127))
        if abs(u) < ZIG_RATIO[i]:
            return u * ZIG_X[i], s0, s1, s2, s3
        if i == 0:
            # tail beyond ZIG_R
            while True:
                ua, s0, s1, s2, s3 = next_uniform(s0, s1, s2, s3)
                ub, s0, s1, s2, s3 = next_uniform(s0, s1, s2, s3)
                x = math.log(ua) / ZIG_R
                y = math.log(ub)
                if -2.0 * y >= x * x:
                    break
            if u < 0.0:
                return x - ZIG_R, s0, s1, s2, s3
            return ZIG_R - x, s0, s1, s2, s3
        x = u * ZIG_X[i]
        f0 = math.exp(-0.5 * (ZIG_X[i] * ZIG_X[i] - x * x))
        f1 = math.exp(-0.5 * (ZIG_X[i + 1] * ZIG_X[i + 1] - x * x))
        uc, s0, s1, s2, s3 = next_uniform(s0, s1, s2, s3)
        if f1 + uc * (f0 - f1) < 1.0:
            return x, s0, s1, s2, s3


@nb.njit(nogil=True, cache=True)
def _fill_normals(master_seed, index, out):
    s0, s1, s2, s3 = seed_state(master_seed, index)
    for k in range(out.shape[0]):
        z, s0, s1, s2, s3 = next_normal(s0, s1, s2, s3)
        out[k] = z


@nb.njit(nogil=True, cache=True)
def _fill_uniforms(master_seed, index, out):
    s0, s1, s2, s3 = seed_state(master_seed, index)
    for k in range(out.shape[0]):
        u, s0, s1, s2, s3 = next_uniform(s0, s1, s2, s3)
        out[k] = u


def as_seed(value) -> np.uint64:
    """Map any Python integer onto the 64-bit seed space (two's complement)."""
    return np.uint64(int(value) & _MASK64)


@dataclass(frozen=True)
class RandomStream:
    master_seed: int
    substream_index: int = 0

    def __post_init__(self):
        if self.substream_index < 0:
            raise ValueError("substream_index must be >= 0")


def gaussian_samples(stream: RandomStream, n: int) -> np.ndarray:
    """First ``n`` standard normals of ``stream``; reproducible per (seed, index)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = np.empty(n)
    _fill_normals(as_seed(stream.master_seed), np.uint64(stream.substream_index), out)
    return out


def uniform_samples(stream: RandomStream, n: int) -> np.ndarray:
    """First ``n`` uniforms on (0, 1] of ``stream``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = np.empty(n)
    _fill_uniforms(as_seed(stream.master_seed), np.uint64(stream.substream_index), out)
    return out


def gaussian_block(master_seed: int, indices, n: int) -> np.ndarray:
    """Rows of ``n`` normals, one row per substream index, in the given order."""
    indices = list(indices)
    out = np.empty((len(indices), n))
    for row, index in enumerate(indices):
        out[row] = gaussian_samples(RandomStream(master_seed, index), n)
    return out
