"""Compiled inner loops for brute-force vertex enumeration."""

import numpy as np
from numba import njit


@njit(cache=True)
def _solve_subset(A, b, idx, M, rhs, x, det_tol):
    n = idx.size
    for r in range(n):
        for c in range(n):
            M[r, c] = A[idx[r], c]
        rhs[r] = b[idx[r]]
    det = 1.0
    for c in range(n):
        p = c
        best = abs(M[c, c])
        for r in range(c + 1, n):
            if abs(M[r, c]) > best:
                best = abs(M[r, c])
                p = r
        if best == 0.0:
            return False
        if p != c:
            for q in range(n):
                t = M[c, q]
                M[c, q] = M[p, q]
                M[p, q] = t
            t = rhs[c]
            rhs[c] = rhs[p]
            rhs[p] = t
        det *= M[c, c]
        for r in range(c + 1, n):
            f = M[r, c] / M[c, c]
            if f != 0.0:
                for q in range(c, n):
                    M[r, q] -= f * M[c, q]
                rhs[r] -= f * rhs[c]
    if abs(det) <= det_tol:
        return False
    for r in range(n - 1, -1, -1):
        s = rhs[r]
        for q in range(r + 1, n):
            s -= M[r, q] * x[q]
        x[r] = s / M[r, r]
    return True


@njit(cache=True)
def brute_force_vertices(A, b, det_tol, feas_tol):
    """Feasible solutions of every nonsingular n-subset of Ax = b."""
    m, n = A.shape
    idx = np.arange(n)
    M = np.empty((n, n))
    rhs = np.empty(n)
    x = np.empty(n)
    cap = 1024
    out = np.empty((cap, n))
    count = 0
    while True:
        if _solve_subset(A, b, idx, M, rhs, x, det_tol):
            ok = True
            for j in range(m):
                s = -b[j]
                for c in range(n):
                    s += A[j, c] * x[c]
                if s > feas_tol:
                    ok = False
                    break
            if ok:
                if count == cap:
                    bigger = np.empty((2 * cap, n))
                    bigger[:cap] = out
                    out = bigger
                    cap *= 2
                out[count] = x
                count += 1
        # next combination in lexicographic order
        i = n - 1
        while i >= 0 and idx[i] == m - n + i:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        for r in range(i + 1, n):
            idx[r] = idx[r - 1] + 1
    return out[:count].copy()
