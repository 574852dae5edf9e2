"""Batch kernels for integer length vectors.

Each candidate row is an int64 length vector. For every row the kernel
reports whether it is generic and nondegenerate, plus the shortness of every
subset containing the last index (encoded by the mask of the other indices).

Set ``POLYTC_DISABLE_NUMBA=1`` to force the pure-numpy path.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("POLYTC_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError("disabled by POLYTC_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def _scan_python(cands, ok, short):
    m, n = cands.shape
    half = 1 << (n - 1)
    sums = np.zeros(half, dtype=np.int64)
    for row in range(m):
        w = cands[row]
        total = 0
        big = 0
        for i in range(n):
            total += w[i]
            if w[i] > big:
                big = w[i]
        generic = True
        sums[0] = 0
        if 2 * w[n - 1] == total:
            generic = False
        short[row, 0] = 2 * w[n - 1] < total
        for mask in range(1, half):
            low = mask & -mask
            i = 0
            while (low >> i) != 1:
                i += 1
            s = sums[mask ^ low] + w[i]
            sums[mask] = s
            # complements cover the masks containing n
            if 2 * s == total or 2 * (s + w[n - 1]) == total:
                generic = False
            short[row, mask] = 2 * (s + w[n - 1]) < total
        ok[row] = generic and 2 * big < total


if HAVE_NUMBA:
    _scan_numba = njit(cache=True)(_scan_python)


def _scan_numpy(cands, ok, short):
    m, n = cands.shape
    half = 1 << (n - 1)
    masks = np.arange(half, dtype=np.int64)
    member = ((masks[:, None] >> np.arange(n - 1)) & 1).astype(np.int64)
    sums = cands[:, : n - 1] @ member.T
    total = cands.sum(axis=1)[:, None]
    with_n = sums + cands[:, n - 1 : n]
    generic = ~np.any((2 * sums == total) | (2 * with_n == total), axis=1)
    nondeg = 2 * cands.max(axis=1) < total[:, 0]
    ok[:] = generic & nondeg
    short[:, :] = 2 * with_n < total


def scan(cands: np.ndarray, backend: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Classify a batch of integer length vectors.

    Returns ``ok`` (generic and nondegenerate, shape ``(m,)``) and
    ``short`` (shape ``(m, 2**(n-1))``) where ``short[k, mask]`` says whether
    ``mask`` plus the last index is short for row ``k``.
    """
    cands = np.ascontiguousarray(cands, dtype=np.int64)
    m, n = cands.shape
    ok = np.zeros(m, dtype=np.bool_)
    short = np.zeros((m, 1 << (n - 1)), dtype=np.bool_)
    backend = backend or BACKEND
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but unavailable")
        _scan_numba(cands, ok, short)
    elif backend == "numpy":
        _scan_numpy(cands, ok, short)
    elif backend == "python":
        _scan_python(cands, ok, short)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return ok, short


def candidates(n: int, bound: int, start: int, stop: int) -> np.ndarray:
    """Rows ``start..stop`` of the lexicographic product ``[1, bound]^n``."""
    idx = np.arange(start, stop, dtype=np.int64)
    place = bound ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // place) % bound + 1
