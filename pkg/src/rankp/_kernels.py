"""Hot Monte Carlo kernels: numba-compiled with a pure-numpy fallback.

The backend is chosen once at import: numba when importable, unless the
environment variable ``RANKP_NO_NUMBA`` is set to anything but ``0``/empty.
Both backends consume the same counter-based streams (:mod:`rankp.rng`), so
endpoints are identical bit-for-bit for the sign-driven increment laws and
agree to a rounding error of ``sin`` for the state-dependent law.

Walk drivers split the path range into fixed-size chunks; chunks write
disjoint output slices, so results do not depend on the thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import rng as _rng

__all__ = [
    "LAW_UNIFORM",
    "LAW_RADEMACHER",
    "LAW_ADAPTIVE",
    "LAW_CODES",
    "HAVE_NUMBA",
    "NUMBA_ENABLED",
    "active_backend",
    "walk_endpoints",
    "walk_trajectories",
]

LAW_UNIFORM = 0
LAW_RADEMACHER = 1
LAW_ADAPTIVE = 2
LAW_CODES = {
    "uniform_signed": LAW_UNIFORM,
    "rademacher": LAW_RADEMACHER,
    "adaptive_dependent": LAW_ADAPTIVE,
}

_CHUNK = 16384


def _have_numba() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def _numba_disabled_by_env() -> bool:
    return os.environ.get("RANKP_NO_NUMBA", "").strip() not in ("", "0")


HAVE_NUMBA = _have_numba()
NUMBA_ENABLED = HAVE_NUMBA and not _numba_disabled_by_env()


def active_backend() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


# ---------------------------------------------------------------------------
# numpy backend: loop over steps, vectorised over the paths of one chunk
# ---------------------------------------------------------------------------


def _walk_chunk_numpy(seed: int, path_lo: int, d: np.ndarray, law: int, xi0: np.ndarray) -> np.ndarray:
    paths = np.arange(path_lo, path_lo + xi0.shape[0], dtype=np.uint64)
    x = xi0.astype(np.float64, copy=True)
    for k in range(1, d.shape[0] + 1):
        if law == LAW_ADAPTIVE:
            # past-measurable magnitude in [0, 1] times an independent sign:
            # conditional mean zero and |step| <= d_k hold by construction
            sign = _rng.signs(seed, k, _rng.STREAM_SIGN, paths)
            x += d[k - 1] * sign * np.abs(np.sin(x))
        elif law == LAW_RADEMACHER:
            sign = _rng.signs(seed, k, _rng.STREAM_STEP, paths)
            x += d[k - 1] * sign
        else:
            u = _rng.uniforms(seed, k, _rng.STREAM_STEP, paths)
            x += d[k - 1] * (2.0 * u - 1.0)
    return x


# ---------------------------------------------------------------------------
# numba backend: scalar loop per path; same stream values, same update order
# ---------------------------------------------------------------------------

if NUMBA_ENABLED:
    from numba import njit

    @njit(cache=True, nogil=True, inline="always")
    def _mix_u64_nb(z):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))

    @njit(cache=True, nogil=True, inline="always")
    def _u01_nb(key, path):
        h = _mix_u64_nb(key + path * np.uint64(0xC2B2AE3D27D4EB4F))
        return np.float64(h >> np.uint64(11)) * (1.0 / 9007199254740992.0)

    @njit(cache=True, nogil=True)
    def _walk_chunk_nb(keys, path_lo, d, law, xi0, out):
        n = d.shape[0]
        for i in range(xi0.shape[0]):
            path = np.uint64(path_lo + i)
            x = xi0[i]
            for k in range(1, n + 1):
                u = _u01_nb(keys[k - 1], path)
                if law == LAW_ADAPTIVE:
                    sign = 1.0 if u >= 0.5 else -1.0
                    x += d[k - 1] * sign * abs(np.sin(x))
                elif law == LAW_RADEMACHER:
                    x += d[k - 1] if u >= 0.5 else -d[k - 1]
                else:
                    x += d[k - 1] * (2.0 * u - 1.0)
            out[i] = x

    def _walk_chunk_numba(seed: int, path_lo: int, d: np.ndarray, law: int, xi0: np.ndarray) -> np.ndarray:
        stream = _rng.STREAM_SIGN if law == LAW_ADAPTIVE else _rng.STREAM_STEP
        keys = np.array(
            [_rng.stream_key(seed, k, stream) for k in range(1, d.shape[0] + 1)],
            dtype=np.uint64,
        )
        out = np.empty(xi0.shape[0], dtype=np.float64)
        _walk_chunk_nb(keys, np.uint64(path_lo), d, law, xi0, out)
        return out


def _walk_chunk(seed: int, path_lo: int, d: np.ndarray, law: int, xi0: np.ndarray, backend: str) -> np.ndarray:
    if backend == "numba":
        return _walk_chunk_numba(seed, path_lo, d, law, xi0)
    return _walk_chunk_numpy(seed, path_lo, d, law, xi0)


def walk_endpoints(
    seed: int,
    d: np.ndarray,
    law: int,
    xi0: np.ndarray,
    threads: int = 1,
    backend: str | None = None,
) -> np.ndarray:
    """Endpoints of the bounded-increment walk started at xi0[i], path index i.

    Deterministic in (seed, xi0, d, law) regardless of ``threads`` or chunking.
    """
    if backend is None:
        backend = active_backend()
    if backend == "numba" and not NUMBA_ENABLED:
        raise RuntimeError("numba backend requested but unavailable (RANKP_NO_NUMBA or missing numba)")
    d = np.ascontiguousarray(d, dtype=np.float64)
    xi0 = np.ascontiguousarray(xi0, dtype=np.float64)
    n_paths = xi0.shape[0]
    out = np.empty(n_paths, dtype=np.float64)
    spans = [(lo, min(lo + _CHUNK, n_paths)) for lo in range(0, n_paths, _CHUNK)]

    def run(span):
        lo, hi = span
        out[lo:hi] = _walk_chunk(seed, lo, d, law, xi0[lo:hi], backend)

    if threads <= 1 or len(spans) <= 1:
        for span in spans:
            run(span)
    else:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            list(pool.map(run, spans))
    return out


def walk_trajectories(seed: int, d: np.ndarray, law: int, xi0: np.ndarray) -> np.ndarray:
    """Full (n_paths, n+1) trajectory matrix; numpy reference used for
    diagnostics and as the oracle for the endpoint kernels."""
    d = np.ascontiguousarray(d, dtype=np.float64)
    xi0 = np.ascontiguousarray(xi0, dtype=np.float64)
    n_paths = xi0.shape[0]
    paths = np.arange(n_paths, dtype=np.uint64)
    traj = np.empty((n_paths, d.shape[0] + 1), dtype=np.float64)
    traj[:, 0] = xi0
    x = xi0.copy()
    for k in range(1, d.shape[0] + 1):
        if law == LAW_ADAPTIVE:
            sign = _rng.signs(seed, k, _rng.STREAM_SIGN, paths)
            x = x + d[k - 1] * sign * np.abs(np.sin(x))
        elif law == LAW_RADEMACHER:
            sign = _rng.signs(seed, k, _rng.STREAM_STEP, paths)
            x = x + d[k - 1] * sign
        else:
            u = _rng.uniforms(seed, k, _rng.STREAM_STEP, paths)
            x = x + d[k - 1] * (2.0 * u - 1.0)
        traj[:, k] = x
    return traj
