"""Counter-based splittable random streams.

Every draw is a pure function of (seed, step, stream, path index): a chain of
splitmix64-style finalizers over the tuple, so results never depend on call
order, chunking, or thread count.  Scalar key derivation runs in masked
Python integers (numpy scalar uint64 ops warn on wraparound); the per-path
stage is vectorised over uint64 arrays.  The numba kernels reimplement the
same chain on uint64 and agree bit-for-bit.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

__all__ = [
    "stream_key",
    "uniforms",
    "uniforms_open",
    "signs",
    "derive_seed",
    "normal_inv_cdf",
    "STREAM_START",
    "STREAM_STEP",
    "STREAM_SIGN",
    "STREAM_MAG",
    "STREAM_NORM",
]

# stream ids, one per independent draw purpose
STREAM_START = 0
STREAM_STEP = 1
STREAM_SIGN = 2
STREAM_MAG = 3
STREAM_NORM = 4

_MASK = 0xFFFFFFFFFFFFFFFF
MIX_GOLD = 0x9E3779B97F4A7C15
MIX_M1 = 0xBF58476D1CE4E5B9
MIX_M2 = 0x94D049BB133111EB
MIX_STEP = 0x27D4EB2F165667C5
MIX_STREAM = 0xD6E8FEB86659FD93
MIX_PATH = 0xC2B2AE3D27D4EB4F

_U64_M1 = np.uint64(MIX_M1)
_U64_M2 = np.uint64(MIX_M2)
_U64_PATH = np.uint64(MIX_PATH)
_SH30 = np.uint64(30)
_SH27 = np.uint64(27)
_SH31 = np.uint64(31)
_SH11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


def _mix_int(z: int) -> int:
    """splitmix64 finalizer on a masked Python int."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * MIX_M1) & _MASK
    z = ((z ^ (z >> 27)) * MIX_M2) & _MASK
    return (z ^ (z >> 31)) & _MASK


def stream_key(seed: int, step: int, stream: int) -> int:
    """Fold (seed, step, stream) into one 64-bit key; the path index is mixed in later."""
    h = _mix_int(int(seed) + MIX_GOLD)
    h = _mix_int(h + int(step) * MIX_STEP)
    h = _mix_int(h + int(stream) * MIX_STREAM)
    return h


def derive_seed(seed: int, label: int) -> int:
    """A child seed for an auxiliary draw (e.g. the start-norm estimation sample)."""
    return _mix_int(_mix_int(int(seed) + MIX_GOLD) + int(label) * MIX_STREAM)


def _mix_u64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _SH30)) * _U64_M1
    z = (z ^ (z >> _SH27)) * _U64_M2
    return z ^ (z >> _SH31)


def _hash_paths(seed: int, step: int, stream: int, paths: np.ndarray) -> np.ndarray:
    key = np.uint64(stream_key(seed, step, stream))
    return _mix_u64(key + paths.astype(np.uint64, copy=False) * _U64_PATH)


def uniforms(seed: int, step: int, stream: int, paths: np.ndarray) -> np.ndarray:
    """Uniform [0, 1) per path index, 53-bit resolution."""
    h = _hash_paths(seed, step, stream, paths)
    return (h >> _SH11).astype(np.float64) * _INV53


def uniforms_open(seed: int, step: int, stream: int, paths: np.ndarray) -> np.ndarray:
    """Uniform on the open interval (0, 1); safe input for inverse CDFs."""
    h = _hash_paths(seed, step, stream, paths)
    return ((h >> _SH11).astype(np.float64) + 0.5) * _INV53


def signs(seed: int, step: int, stream: int, paths: np.ndarray) -> np.ndarray:
    """Independent +-1 per path index."""
    u = uniforms(seed, step, stream, paths)
    return np.where(u >= 0.5, 1.0, -1.0)


def normal_inv_cdf(u: np.ndarray) -> np.ndarray:
    """Standard normal quantile; rational approximation accurate to ~1e-16 relative."""
    return ndtri(u)
