"""Integer kernels behind the exact layers.

Every kernel here works on int64/bool arrays and is exact: modular
elimination for F_p, boolean reachability for posets, sign evaluation of
integer points against integer hyperplanes, and up-closure violations on a
boolean relation.  Rational arithmetic never enters this module.

Each kernel exists twice, a numba ``@njit`` version and a pure-numpy
version.  The numba path is used when numba imports and the environment
variable ``TAMEPL_DISABLE_NUMBA`` is unset or ``0``; both paths return
identical results (see tests/test_kernels.py and benchmarks/).
"""
import os

import numpy as np

try:
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

_DISABLED = os.environ.get("TAMEPL_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")
USE_NUMBA = HAS_NUMBA and not _DISABLED
BACKEND = "numba" if USE_NUMBA else "numpy"

# |entry| bound under which sign_vectors may run in int64 without overflow.
INT64_SAFE = 2 ** 62


# ---------------------------------------------------------------------------
# numpy implementations

def _rref_mod_numpy(a, p):
    r = np.array(a, dtype=np.int64) % p
    rows, cols = r.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(r[rank:, c])[0]
        if nz.size == 0:
            continue
        k = rank + nz[0]
        if k != rank:
            r[[rank, k]] = r[[k, rank]]
        inv = pow(int(r[rank, c]), p - 2, p)
        r[rank] = (r[rank] * inv) % p
        for i in range(rows):
            if i != rank and r[i, c] != 0:
                f = r[i, c]
                r[i] = (r[i] - (f * r[rank]) % p) % p
        pivots[rank] = c
        rank += 1
    return r, pivots[:rank]


def _matmul_mod_numpy(a, b, p):
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out = (out + (a[:, k, None] * b[None, k, :]) % p) % p
    return out


def _transitive_closure_numpy(adj):
    reach = np.array(adj, dtype=bool) | np.eye(len(adj), dtype=bool)
    while True:
        nxt = reach | ((reach.astype(np.int64) @ reach.astype(np.int64)) > 0)
        if (nxt == reach).all():
            return reach
        reach = nxt


def _sign_vectors_numpy(normals, offsets, points, dens):
    vals = points @ normals.T - dens[:, None] * offsets[None, :]
    return np.sign(vals).astype(np.int8)


def _upclosed_violations_numpy(rel, member):
    mask = rel & member[:, None] & ~member[None, :]
    return np.argwhere(mask).astype(np.int64)


# ---------------------------------------------------------------------------
# numba implementations

if HAS_NUMBA:

    @njit(cache=True)
    def _inv_mod(a, p):
        # Fermat inverse; p < 2**31 keeps every product below 2**62.
        result = 1
        base = a % p
        e = p - 2
        while e > 0:
            if e & 1:
                result = (result * base) % p
            base = (base * base) % p
            e >>= 1
        return result

    @njit(cache=True)
    def _rref_mod_numba(a, p):
        rows, cols = a.shape
        r = np.empty((rows, cols), dtype=np.int64)
        for i in range(rows):
            for j in range(cols):
                r[i, j] = a[i, j] % p
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        rank = 0
        for c in range(cols):
            if rank == rows:
                break
            k = -1
            for i in range(rank, rows):
                if r[i, c] != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != rank:
                for j in range(cols):
                    t = r[rank, j]
                    r[rank, j] = r[k, j]
                    r[k, j] = t
            inv = _inv_mod(r[rank, c], p)
            for j in range(cols):
                r[rank, j] = (r[rank, j] * inv) % p
            for i in range(rows):
                if i != rank and r[i, c] != 0:
                    f = r[i, c]
                    for j in range(cols):
                        r[i, j] = (r[i, j] - (f * r[rank, j]) % p + p) % p
            pivots[rank] = c
            rank += 1
        return r, pivots[:rank].copy()

    @njit(cache=True)
    def _matmul_mod_numba(a, b, p):
        n, m = a.shape
        k = b.shape[1]
        out = np.zeros((n, k), dtype=np.int64)
        for i in range(n):
            for t in range(m):
                x = a[i, t] % p
                if x == 0:
                    continue
                for j in range(k):
                    out[i, j] = (out[i, j] + (x * (b[t, j] % p)) % p) % p
        return out

    @njit(cache=True)
    def _transitive_closure_numba(adj):
        n = adj.shape[0]
        reach = adj.copy()
        for i in range(n):
            reach[i, i] = True
        for k in range(n):
            for i in range(n):
                if reach[i, k]:
                    for j in range(n):
                        if reach[k, j]:
                            reach[i, j] = True
        return reach

    @njit(cache=True)
    def _sign_vectors_numba(normals, offsets, points, dens):
        k = points.shape[0]
        m, n = normals.shape
        out = np.empty((k, m), dtype=np.int8)
        for i in range(k):
            for h in range(m):
                v = -dens[i] * offsets[h]
                for j in range(n):
                    v += points[i, j] * normals[h, j]
                out[i, h] = 1 if v > 0 else (-1 if v < 0 else 0)
        return out

    @njit(cache=True)
    def _upclosed_violations_numba(rel, member):
        n = rel.shape[0]
        count = 0
        for i in range(n):
            if member[i]:
                for j in range(n):
                    if rel[i, j] and not member[j]:
                        count += 1
        out = np.empty((count, 2), dtype=np.int64)
        c = 0
        for i in range(n):
            if member[i]:
                for j in range(n):
                    if rel[i, j] and not member[j]:
                        out[c, 0] = i
                        out[c, 1] = j
                        c += 1
        return out


# ---------------------------------------------------------------------------
# dispatch

def rref_mod(a, p):
    """Reduced row echelon form of an integer matrix over F_p.

    Returns ``(R, pivots)`` with ``R`` entries in ``[0, p)``.
    """
    a = np.ascontiguousarray(a, dtype=np.int64)
    if USE_NUMBA and a.size:
        return _rref_mod_numba(a, np.int64(p))
    return _rref_mod_numpy(a, p)


def matmul_mod(a, b, p):
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    if USE_NUMBA and a.size and b.size:
        return _matmul_mod_numba(a, b, np.int64(p))
    return _matmul_mod_numpy(a, b, p)


def transitive_closure(adj):
    """Reflexive-transitive closure of a boolean adjacency matrix."""
    adj = np.ascontiguousarray(adj, dtype=np.bool_)
    if USE_NUMBA and adj.size:
        return _transitive_closure_numba(adj)
    return _transitive_closure_numpy(adj)


def sign_vectors(normals, offsets, points, dens):
    """Signs of ``normals @ (points/dens) - offsets`` for integer data.

    ``points[i] / dens[i]`` is the i-th point (``dens > 0``).  Callers must
    keep magnitudes below :data:`INT64_SAFE`; :func:`fits_int64` checks that.
    """
    normals = np.ascontiguousarray(normals, dtype=np.int64)
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    points = np.ascontiguousarray(points, dtype=np.int64)
    dens = np.ascontiguousarray(dens, dtype=np.int64)
    if USE_NUMBA and points.size and normals.size:
        return _sign_vectors_numba(normals, offsets, points, dens)
    return _sign_vectors_numpy(normals, offsets, points, dens)


def upclosed_violations(rel, member):
    """Pairs ``(i, j)`` with ``rel[i, j]``, ``i`` a member and ``j`` not."""
    rel = np.ascontiguousarray(rel, dtype=np.bool_)
    member = np.ascontiguousarray(member, dtype=np.bool_)
    if USE_NUMBA and rel.size:
        return _upclosed_violations_numba(rel, member)
    return _upclosed_violations_numpy(rel, member)


def fits_int64(normals, offsets, points, dens):
    """True when :func:`sign_vectors` cannot overflow on these Python ints."""
    if not normals or not points:
        return True
    n_max = max(max((abs(v) for v in row), default=0) for row in normals)
    o_max = max((abs(v) for v in offsets), default=0)
    p_max = max(max((abs(v) for v in row), default=0) for row in points)
    d_max = max(abs(v) for v in dens)
    dim = len(normals[0])
    return dim * n_max * p_max + d_max * o_max < INT64_SAFE
