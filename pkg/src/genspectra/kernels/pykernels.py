"""Pure-Python compute kernels.

These are the reference implementations of the two hot loops in the
package: dense matrix multiplication and the cyclic Jacobi eigenvalue
iteration for symmetric matrices. ``genspectra.kernels`` swaps in the
compiled Cython twins when they are available; both backends perform the
same operations in the same order, so results agree to the last bit on
IEEE-754 hardware.

The functions deliberately work on plain Python lists internally. Element
access on nested lists is several times faster than scalar indexing into
numpy arrays, which matters for O(n^3) loops.
"""

from __future__ import annotations

import math

import numpy as np


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Multiply two 2-D float arrays with an explicit triple loop.

    Shapes must already be compatible; the caller validates them.
    """
    m, inner = a.shape
    n = b.shape[1]
    al = a.tolist()
    bl = b.tolist()
    out = [[0.0] * n for _ in range(m)]
    for i in range(m):
        ai = al[i]
        oi = out[i]
        for k in range(inner):
            aik = ai[k]
            if aik != 0.0:
                bk = bl[k]
                for j in range(n):
                    oi[j] += aik * bk[j]
    return np.array(out, dtype=np.float64).reshape(m, n)


def jacobi_eigh(a: np.ndarray, rel_tol: float, max_sweeps: int):
    """Cyclic Jacobi iteration on a symmetric matrix.

    Rotations visit the strict upper triangle in row-major order and zero
    one off-diagonal pair at a time. The sweep loop stops once the
    off-diagonal Frobenius norm drops below ``rel_tol`` times the Frobenius
    norm of the input.

    Returns ``(w, v, sweeps, converged)`` where ``w`` holds the (unsorted)
    diagonal after the final sweep and the columns of ``v`` are the
    accumulated rotations, i.e. the eigenvectors in the same order.
    """
    d = a.shape[0]
    m = [row[:] for row in a.tolist()]
    v = [[1.0 if i == j else 0.0 for j in range(d)] for i in range(d)]

    acc = 0.0
    for row in m:
        for x in row:
            acc += x * x
    thresh = rel_tol * math.sqrt(acc)

    sweeps = 0
    converged = _offdiag_norm(m, d) <= thresh
    while not converged and sweeps < max_sweeps:
        sweeps += 1
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = m[p][q]
                if apq == 0.0:
                    continue
                app = m[p][p]
                aqq = m[q][q]
                tau = (aqq - app) / (2.0 * apq)
                if math.isinf(tau):
                    # apq is denormal-tiny next to the diagonal gap; the
                    # rotation degenerates to the identity.
                    t = 0.0
                elif tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                m[p][p] = app - t * apq
                m[q][q] = aqq + t * apq
                m[p][q] = 0.0
                m[q][p] = 0.0
                for i in range(d):
                    if i != p and i != q:
                        aip = m[i][p]
                        aiq = m[i][q]
                        m[i][p] = c * aip - s * aiq
                        m[p][i] = m[i][p]
                        m[i][q] = s * aip + c * aiq
                        m[q][i] = m[i][q]
                for i in range(d):
                    vip = v[i][p]
                    viq = v[i][q]
                    v[i][p] = c * vip - s * viq
                    v[i][q] = s * vip + c * viq
        converged = _offdiag_norm(m, d) <= thresh

    w = np.array([m[i][i] for i in range(d)], dtype=np.float64)
    vecs = np.array(v, dtype=np.float64).reshape(d, d)
    return w, vecs, sweeps, converged


def _offdiag_norm(m, d: int) -> float:
    acc = 0.0
    for i in range(d - 1):
        row = m[i]
        for j in range(i + 1, d):
            acc += row[j] * row[j]
    return math.sqrt(2.0 * acc)
