# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled float64 twins of the kernels in pykern.py.

Same algorithms, same sweep order; results agree with the fallback to
rounding.  Only float64 C-contiguous inputs are accepted; dispatch happens
in the package __init__.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, hypot, sqrt

cnp.import_array()


def tridiagonalize(cnp.ndarray[double, ndim=2] a, bint vectors=False):
    cdef cnp.ndarray[double, ndim=2] A = np.array(a, copy=True)
    cdef Py_ssize_t n = A.shape[0]
    cdef cnp.ndarray[double, ndim=2] V
    cdef cnp.ndarray[double, ndim=1] vn2s
    cdef cnp.ndarray[double, ndim=1] w
    cdef Py_ssize_t k, i, j, m
    cdef double nx, alpha, vn2, tau, s, wi, vi
    if vectors:
        V = np.zeros((n, n), dtype=np.float64)
        vn2s = np.zeros(n, dtype=np.float64)
    w = np.zeros(n, dtype=np.float64)
    for k in range(n - 2):
        m = n - k - 1          # size of trailing block
        nx = 0.0
        for i in range(k + 1, n):
            nx += A[i, k] * A[i, k]
        nx = sqrt(nx)
        if nx == 0.0:
            continue
        alpha = -nx if A[k + 1, k] >= 0.0 else nx
        A[k + 1, k] -= alpha
        vn2 = 0.0
        for i in range(k + 1, n):
            vn2 += A[i, k] * A[i, k]
        if vn2 == 0.0:
            A[k + 1, k] += alpha
            continue
        # w = 2 S v / vn2, then w -= (w.v / vn2) v
        tau = 0.0
        for i in range(k + 1, n):
            s = 0.0
            for j in range(k + 1, n):
                s += A[i, j] * A[j, k]
            w[i] = 2.0 * s / vn2
            tau += w[i] * A[i, k]
        tau /= vn2
        for i in range(k + 1, n):
            w[i] -= tau * A[i, k]
        for i in range(k + 1, n):
            wi = w[i]
            vi = A[i, k]
            for j in range(k + 1, n):
                A[i, j] -= wi * A[j, k] + vi * w[j]
        if vectors:
            for i in range(k + 1, n):
                V[k, i] = A[i, k]
            vn2s[k] = vn2
        A[k + 1, k] = alpha
        A[k, k + 1] = alpha
    cdef cnp.ndarray[double, ndim=1] d = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] e = np.zeros(n - 1 if n > 1 else 0, dtype=np.float64)
    for i in range(n):
        d[i] = A[i, i]
    for i in range(n - 1):
        e[i] = A[i, i + 1]
    if not vectors:
        return d, e
    cdef cnp.ndarray[double, ndim=2] Q = np.eye(n, dtype=np.float64)
    for k in range(n - 3, -1, -1):
        vn2 = vn2s[k]
        if vn2 == 0.0:
            continue
        for j in range(n):
            s = 0.0
            for i in range(k + 1, n):
                s += V[k, i] * Q[i, j]
            s *= 2.0 / vn2
            for i in range(k + 1, n):
                Q[i, j] -= V[k, i] * s
    return d, e, Q


cdef int _ql(double[::1] d, double[::1] e, double[:, ::1] z, Py_ssize_t zrows,
             int max_sweeps) except -1:
    cdef Py_ssize_t n = d.shape[0]
    cdef double eps = np.finfo(np.float64).eps
    cdef Py_ssize_t l, m, i, r_
    cdef int sweeps
    cdef double dd, g, r, s, c, p, f, b, col
    cdef bint underflow
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise RuntimeError("QL iteration failed to converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if zrows > 0:
                    for r_ in range(zrows):
                        col = z[r_, i + 1]
                        z[r_, i + 1] = s * z[r_, i] + c * col
                        z[r_, i] = c * z[r_, i] - s * col
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return 0


def tridiag_eigenvalues(cnp.ndarray[double, ndim=1] d,
                        cnp.ndarray[double, ndim=1] e, int max_sweeps=64):
    cdef cnp.ndarray[double, ndim=1] dw = np.array(d, copy=True)
    cdef cnp.ndarray[double, ndim=1] ew = np.zeros(d.shape[0], dtype=np.float64)
    ew[: e.shape[0]] = e
    cdef double[:, ::1] dummy = np.zeros((1, 1), dtype=np.float64)
    _ql(dw, ew, dummy, 0, max_sweeps)
    dw.sort()
    return dw


def tridiag_eigh(cnp.ndarray[double, ndim=1] d, cnp.ndarray[double, ndim=1] e,
                 cnp.ndarray[double, ndim=2] q, int max_sweeps=64):
    cdef cnp.ndarray[double, ndim=1] dw = np.array(d, copy=True)
    cdef cnp.ndarray[double, ndim=1] ew = np.zeros(d.shape[0], dtype=np.float64)
    ew[: e.shape[0]] = e
    cdef cnp.ndarray[double, ndim=2] z = np.array(q, copy=True)
    _ql(dw, ew, z, z.shape[0], max_sweeps)
    order = np.argsort(dw, kind="stable")
    return dw[order], z[:, order]


def sturm_lowest(cnp.ndarray[double, ndim=1] d, cnp.ndarray[double, ndim=1] e,
                 int k):
    cdef Py_ssize_t n = d.shape[0]
    cdef cnp.ndarray[double, ndim=1] e2 = np.zeros(n - 1 if n > 1 else 0,
                                                   dtype=np.float64)
    cdef Py_ssize_t i
    cdef double lo, hi, rad_lo, rad_hi, ae_prev, ae_next
    for i in range(n - 1):
        e2[i] = e[i] * e[i]
    lo = d[0]
    hi = d[0]
    for i in range(n):
        ae_prev = fabs(e[i - 1]) if i > 0 else 0.0
        ae_next = fabs(e[i]) if i < n - 1 else 0.0
        rad_lo = d[i] - ae_prev - ae_next
        rad_hi = d[i] + ae_prev + ae_next
        if rad_lo < lo:
            lo = rad_lo
        if rad_hi > hi:
            hi = rad_hi
    cdef cnp.ndarray[double, ndim=1] out = np.empty(k, dtype=np.float64)
    cdef double a, b, m, qv
    cdef double tiny = np.finfo(np.float64).tiny * 1e4
    cdef Py_ssize_t j, cnt
    for j in range(1, k + 1):
        a = lo
        b = hi
        while True:
            m = 0.5 * (a + b)
            if m <= a or m >= b:
                break
            cnt = 0
            qv = d[0] - m
            if qv == 0.0:
                qv = -tiny
            if qv < 0.0:
                cnt += 1
            for i in range(1, n):
                qv = d[i] - m - e2[i - 1] / qv
                if qv == 0.0:
                    qv = -tiny
                if qv < 0.0:
                    cnt += 1
            if cnt >= j:
                b = m
            else:
                a = m
        out[j - 1] = b
    return out


def pivoted_cholesky(cnp.ndarray[double, ndim=2] g, double tol_abs):
    cdef Py_ssize_t m = g.shape[0]
    cdef cnp.ndarray[double, ndim=1] dvec = np.diag(g).copy()
    cdef cnp.ndarray[double, ndim=2] R = np.zeros((m, m), dtype=np.float64)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] piv = np.arange(m, dtype=np.intp)
    cdef Py_ssize_t rank = m
    cdef Py_ssize_t j, jj, i, t, p, pi
    cdef double best, rjj, acc, v, tmp, min_rem
    for j in range(m):
        jj = j
        best = dvec[piv[j]]
        for i in range(j + 1, m):
            if dvec[piv[i]] > best:
                best = dvec[piv[i]]
                jj = i
        if best <= tol_abs:
            rank = j
            break
        if jj != j:
            t = piv[j]
            piv[j] = piv[jj]
            piv[jj] = t
            for i in range(j):
                tmp = R[i, j]
                R[i, j] = R[i, jj]
                R[i, jj] = tmp
        p = piv[j]
        rjj = sqrt(dvec[p])
        R[j, j] = rjj
        for i in range(j + 1, m):
            pi = piv[i]
            acc = 0.0
            for t in range(j):
                acc += R[t, j] * R[t, i]
            v = (g[p, pi] - acc) / rjj
            R[j, i] = v
            dvec[pi] -= v * v
    min_rem = 0.0
    for i in range(rank, m):
        if dvec[piv[i]] < min_rem:
            min_rem = dvec[piv[i]]
    return np.ascontiguousarray(R[:rank, :]), piv, rank, min_rem
