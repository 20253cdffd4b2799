"""Hot loops: row reduction mod p and the projective sweep.

Each kernel has a loop form compiled with numba and a vectorised numpy form.
Setting ``BRNR_DISABLE_NUMBA=1`` (or running without numba installed) selects
the numpy forms.  Both forms take and return int64 arrays with entries in
``[0, p)`` and produce identical results.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

USE_NUMBA = _HAVE_NUMBA and os.environ.get("BRNR_DISABLE_NUMBA", "") not in ("1", "true", "yes")


def _inv_mod_loop(a, p):
    # extended Euclid; a != 0 mod p
    t, new_t = 0, 1
    r, new_r = p, a % p
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    if t < 0:
        t += p
    return t


def _rref_inplace_loop(a, p):
    m, n = a.shape
    pivots = np.empty(min(m, n), dtype=np.int64)
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(n):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        inv = _inv_mod_loop(a[r, c], p)
        if inv != 1:
            for j in range(c, n):
                a[r, j] = (a[r, j] * inv) % p
        for i in range(m):
            if i == r:
                continue
            f = a[i, c]
            if f == 0:
                continue
            for j in range(c, n):
                a[i, j] = (a[i, j] - f * a[r, j]) % p
        pivots[r] = c
        r += 1
    return r, pivots[:r]


def _sweep_loop(P, p):
    # P[k] is the (R x r) matrix of s_i ^ e_k; returns the RREF basis (in
    # coefficient space F_p^r) of all c with (sum c_i s_i) ^ u = 0 for some u != 0.
    n, R, r = P.shape
    acc = np.zeros((r + 1, r), dtype=np.int64)
    acc_rank = 0
    u = np.zeros(n, dtype=np.int64)
    M = np.empty((R, r), dtype=np.int64)
    vec = np.empty(r, dtype=np.int64)
    for lead in range(n):
        total = 1
        for _ in range(n - lead - 1):
            total *= p
        for code in range(total):
            u[:] = 0
            u[lead] = 1
            x = code
            for k in range(n - 1, lead, -1):
                u[k] = x % p
                x //= p
            for a in range(R):
                for b in range(r):
                    s = 0
                    for k in range(lead, n):
                        if u[k] != 0:
                            s = (s + u[k] * P[k, a, b]) % p
                    M[a, b] = s
            rank, piv = _rref_inplace_loop(M, p)
            if rank == r:
                continue
            # walk the free columns; each gives one kernel vector
            pi = 0
            for f in range(r):
                if pi < rank and piv[pi] == f:
                    pi += 1
                    continue
                vec[:] = 0
                vec[f] = 1
                for i in range(rank):
                    if piv[i] < f:
                        vec[piv[i]] = (p - M[i, f]) % p
                # reduce against the accumulated basis
                for i in range(acc_rank):
                    c0 = -1
                    for j in range(r):
                        if acc[i, j] != 0:
                            c0 = j
                            break
                    coef = vec[c0]
                    if coef != 0:
                        for j in range(r):
                            vec[j] = (vec[j] - coef * acc[i, j]) % p
                nonzero = False
                for j in range(r):
                    if vec[j] != 0:
                        nonzero = True
                        break
                if nonzero:
                    acc[acc_rank, :] = vec
                    acc_rank += 1
                    _rref_inplace_loop(acc[:acc_rank], p)
                    if acc_rank == r:
                        return acc[:r].copy()
    return acc[:acc_rank].copy()


def _rref_inplace_numpy(a, p):
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r] = a[r] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            a[rows] = (a[rows] - np.outer(col[rows], a[r])) % p
        pivots.append(c)
        r += 1
    return r, np.asarray(pivots, dtype=np.int64)


def _sweep_numpy(P, p):
    n, R, r = P.shape
    acc = np.zeros((0, r), dtype=np.int64)
    for lead in range(n):
        tail = n - lead - 1
        for code in range(p**tail):
            u = np.zeros(n, dtype=np.int64)
            u[lead] = 1
            if tail:
                u[lead + 1 :] = np.asarray(np.unravel_index(code, (p,) * tail), dtype=np.int64)
            # reduce after every term: p**2 fits in int64, n * p**2 may not
            M = np.zeros((R, r), dtype=np.int64)
            for k in np.flatnonzero(u):
                M = (M + u[k] * P[k]) % p
            rank, piv = _rref_inplace_numpy(M, p)
            if rank == r:
                continue
            free = np.setdiff1d(np.arange(r), piv)
            ker = np.zeros((free.size, r), dtype=np.int64)
            ker[np.arange(free.size), free] = 1
            ker[:, piv] = (-M[:rank, free].T) % p
            stacked = np.vstack([acc, ker])
            rank, _ = _rref_inplace_numpy(stacked, p)
            acc = stacked[:rank]
            if rank == r:
                return acc
    return acc


if USE_NUMBA:
    _inv_mod_loop = numba.njit(cache=True)(_inv_mod_loop)
    _rref_inplace_loop = numba.njit(cache=True)(_rref_inplace_loop)
    _sweep_loop = numba.njit(cache=True)(_sweep_loop)
    rref_inplace = _rref_inplace_loop
    sweep = _sweep_loop
else:
    rref_inplace = _rref_inplace_numpy
    sweep = _sweep_numpy

# both forms stay importable for the benchmark and the cross-check tests
rref_inplace_numpy = _rref_inplace_numpy
sweep_numpy = _sweep_numpy
rref_inplace_loop = _rref_inplace_loop
sweep_loop = _sweep_loop
