"""Hot elimination and product kernels for prime-field matrices.

Two interchangeable backends are provided: numba-compiled loops and a pure
numpy fallback.  The backend is chosen once at import time; set the
environment variable ``SKEWALG_DISABLE_NUMBA=1`` to force the numpy path
(useful for debugging and for the benchmark in ``benchmarks/``).

All kernels operate on ``int64`` arrays whose entries lie in ``[0, p)`` and
require ``p < 2**31`` so that a single product fits in 62 bits.
"""
import os

import numpy as np

INT64_PRIME_LIMIT = 2**31

_DISABLED = os.environ.get("SKEWALG_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False


def _inv_mod(a, p):
    return pow(int(a), p - 2, p)


# ---------------------------------------------------------------- numpy path

def rref_modp_numpy(m, p):
    a = np.array(m, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = _inv_mod(a[r, c], p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r]) % p) % p
        pivots.append(c)
        r += 1
    return a, np.array(pivots, dtype=np.int64), r


def _chunk(p):
    """Products summable before a reduction is needed to stay inside int64."""
    return max(1, (2**63 - 1) // max(1, (p - 1) ** 2) - 1)


def matmul_modp_numpy(a, b, p):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    n = a.shape[1]
    # chunk the inner dimension so partial sums never overflow int64
    step = _chunk(p)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(0, n, step):
        out = (out + (a[:, k:k + step] @ b[k:k + step]) % p) % p
    return out


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True)
    def _powmod(a, e, p):
        result = 1
        a = a % p
        while e > 0:
            if e & 1:
                result = (result * a) % p
            a = (a * a) % p
            e >>= 1
        return result

    @njit(cache=True)
    def _rref_modp_jit(a, p):
        rows, cols = a.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            k = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != r:
                for j in range(cols):
                    t = a[r, j]
                    a[r, j] = a[k, j]
                    a[k, j] = t
            inv = _powmod(a[r, c], p - 2, p)
            for j in range(c, cols):
                a[r, j] = (a[r, j] * inv) % p
            for i in range(rows):
                if i == r:
                    continue
                f = a[i, c]
                if f == 0:
                    continue
                for j in range(c, cols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
            pivots[r] = c
            r += 1
        return a, pivots[:r], r

    @njit(cache=True)
    def _matmul_modp_jit(a, b, p, step):
        n, m = a.shape
        q = b.shape[1]
        out = np.zeros((n, q), dtype=np.int64)
        acc = np.zeros(q, dtype=np.int64)
        for i in range(n):
            acc[:] = 0
            pending = 0
            for k in range(m):
                x = a[i, k]
                if x == 0:
                    continue
                for j in range(q):
                    acc[j] += x * b[k, j]
                pending += 1
                if pending == step:
                    for j in range(q):
                        acc[j] %= p
                    pending = 0
            for j in range(q):
                out[i, j] = acc[j] % p
        return out

    def rref_modp_numba(m, p):
        a = np.ascontiguousarray(np.array(m, dtype=np.int64) % p)
        return _rref_modp_jit(a, np.int64(p))

    def matmul_modp_numba(a, b, p):
        return _matmul_modp_jit(np.ascontiguousarray(a, dtype=np.int64),
                                np.ascontiguousarray(b, dtype=np.int64), np.int64(p),
                                np.int64(_chunk(p)))

    rref_modp = rref_modp_numba
    matmul_modp = matmul_modp_numba
else:
    rref_modp = rref_modp_numpy
    matmul_modp = matmul_modp_numpy


def backend():
    return "numba" if HAVE_NUMBA else "numpy"
