"""Pure numpy implementations of the dense symmetric kernels.

These are the fallback twins of the compiled routines in ``_ckern``.  Unlike
the compiled versions they are dtype-generic: passing ``numpy.longdouble``
arrays runs the whole computation in extended precision, which the gap
refinement uses when an avoided crossing closes below float64 resolution.

All routines assume a symmetric input and only read/update what they need;
validation lives one layer up in :mod:`aqogap.numkit`.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "tridiagonalize",
    "tridiag_eigenvalues",
    "tridiag_eigh",
    "sturm_lowest",
    "pivoted_cholesky",
]


def tridiagonalize(a, vectors=False):
    """Householder reduction of a symmetric matrix to tridiagonal form.

    Returns ``(d, e)`` with the diagonal and subdiagonal, or ``(d, e, q)``
    with the accumulated orthogonal transform (``a = q @ T @ q.T``) when
    ``vectors`` is true.
    """
    A = np.array(a, copy=True)
    n = A.shape[0]
    dtype = A.dtype
    reflectors = [] if vectors else None
    for k in range(n - 2):
        x = A[k + 1 :, k].copy()
        nx = np.sqrt(x @ x)
        if nx == 0:
            continue
        alpha = -np.copysign(nx, x[0])
        v = x
        v[0] -= alpha
        vn2 = v @ v
        if vn2 == 0:
            continue
        # Similarity update A <- P A P with P = 1 - 2 v v^T / (v^T v),
        # restricted to the trailing block.
        S = A[k + 1 :, k + 1 :]
        w = S @ v * (dtype.type(2) / vn2)
        tau = (w @ v) / (2 * vn2)
        w -= (2 * tau) * v
        S -= np.outer(w, v) + np.outer(v, w)
        A[k + 1, k] = alpha
        A[k, k + 1] = alpha
        if vectors:
            reflectors.append((k, v, vn2))
    d = np.diag(A).copy()
    e = np.diag(A, 1).copy() if n > 1 else np.zeros(0, dtype=dtype)
    if not vectors:
        return d, e
    q = np.eye(n, dtype=dtype)
    for k, v, vn2 in reversed(reflectors):
        block = q[k + 1 :, :]
        block -= np.outer(v, (v @ block) * (dtype.type(2) / vn2))
    return d, e, q


def _ql_sweep(d, e, z, max_sweeps):
    """Implicit-shift QL iteration on a tridiagonal matrix (in place).

    ``d`` and ``e`` are modified; ``e`` must have length ``len(d)`` with a
    zero sentinel in the last slot.  When ``z`` is given its columns are
    rotated along, so eigenvectors of the original matrix come out as
    ``z`` columns.
    """
    n = d.shape[0]
    eps = np.finfo(d.dtype).eps
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise RuntimeError("QL iteration failed to converge")
            g = (d[l + 1] - d[l]) / (2 * e[l])
            r = np.hypot(g, d.dtype.type(1))
            g = d[m] - d[l] + e[l] / (g + np.copysign(r, g))
            s = d.dtype.type(1)
            c = d.dtype.type(1)
            p = d.dtype.type(0)
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0:
                    d[i + 1] -= p
                    e[m] = 0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if z is not None:
                    col = z[:, i + 1].copy()
                    z[:, i + 1] = s * z[:, i] + c * col
                    z[:, i] = c * z[:, i] - s * col
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0


def tridiag_eigenvalues(d, e, max_sweeps=64):
    """Eigenvalues (ascending) of the symmetric tridiagonal matrix (d, e)."""
    d = np.array(d, copy=True)
    work_e = np.zeros(d.shape[0], dtype=d.dtype)
    work_e[: len(e)] = e
    _ql_sweep(d, work_e, None, max_sweeps)
    d.sort()
    return d


def tridiag_eigh(d, e, q, max_sweeps=64):
    """Eigenvalues and vectors of tridiag(d, e); q is rotated in place."""
    d = np.array(d, copy=True)
    work_e = np.zeros(d.shape[0], dtype=d.dtype)
    work_e[: len(e)] = e
    _ql_sweep(d, work_e, q, max_sweeps)
    order = np.argsort(d, kind="stable")
    return d[order], q[:, order]


def sturm_count(d, e2, x):
    """Number of eigenvalues of tridiag(d, e) below x (e2 = e**2).

    A zero pivot (x exactly an eigenvalue of a leading submatrix) is
    perturbed to a tiny negative value and counted, the usual pivmin
    treatment; leaving it uncounted loses an eigenvalue when x hits the
    midpoint of a symmetric pair.
    """
    n = d.shape[0]
    tiny = np.finfo(d.dtype).tiny * 1e4
    count = 0
    qv = d[0] - x
    if qv == 0:
        qv = -tiny
    if qv < 0:
        count += 1
    for i in range(1, n):
        qv = d[i] - x - e2[i - 1] / qv
        if qv == 0:
            qv = -tiny
        if qv < 0:
            count += 1
    return count


def sturm_lowest(d, e, k):
    """k lowest eigenvalues of tridiag(d, e) by Sturm-sequence bisection.

    Converges each eigenvalue to the resolution of the dtype; degenerate
    eigenvalues come out repeated.
    """
    d = np.asarray(d)
    e = np.asarray(e)
    e2 = e * e
    ae = np.abs(e)
    rad = np.zeros_like(d)
    if len(e):
        rad[:-1] += ae
        rad[1:] += ae
    lo = np.min(d - rad)
    hi = np.max(d + rad)
    out = np.empty(k, dtype=d.dtype)
    for j in range(1, k + 1):
        a, b = lo, hi
        while True:
            m = (a + b) / 2
            if m <= a or m >= b:
                break
            if sturm_count(d, e2, m) >= j:
                b = m
            else:
                a = m
        out[j - 1] = b
    return out


def pivoted_cholesky(g, tol_abs):
    """Diagonally pivoted Cholesky of a PSD matrix, with rank detection.

    Pivots on the largest remaining diagonal; stops when it drops to
    ``tol_abs`` or below.  Returns ``(r, piv, rank, min_remainder)`` where
    ``r`` is the ``rank x m`` upper factor with columns in pivot order
    (``r.T @ r`` reproduces ``g[piv][:, piv]`` up to the dropped rank) and
    ``min_remainder`` is the most negative diagonal left behind, for the
    caller's PSD check.
    """
    g = np.asarray(g)
    m = g.shape[0]
    dtype = g.dtype
    d = np.diag(g).astype(dtype, copy=True)
    R = np.zeros((m, m), dtype=dtype)
    piv = np.arange(m)
    rank = m
    for j in range(m):
        jj = j + int(np.argmax(d[piv[j:]]))
        if d[piv[jj]] <= tol_abs:
            rank = j
            break
        if jj != j:
            piv[[j, jj]] = piv[[jj, j]]
            R[:j, [j, jj]] = R[:j, [jj, j]]
        p = piv[j]
        rjj = np.sqrt(d[p])
        R[j, j] = rjj
        if j + 1 < m:
            cols = piv[j + 1 :]
            row = (g[p, cols] - R[:j, j] @ R[:j, j + 1 :]) / rjj
            R[j, j + 1 :] = row
            d[cols] -= row * row
    if rank < m:
        min_rem = np.min(d[piv[rank:]])
    else:
        min_rem = dtype.type(0)
    return R[:rank, :], piv, rank, min_rem
