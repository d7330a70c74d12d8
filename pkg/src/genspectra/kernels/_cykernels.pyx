# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled compute kernels.

Cython twins of :mod:`genspectra.kernels.pykernels`. The loop structure and
the order of floating-point operations match the pure-Python backend
exactly, so the two produce identical results; only the speed differs.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, isinf, sqrt

cnp.import_array()


def matmul(a, b):
    """Multiply two 2-D float arrays with an explicit triple loop."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] aa = np.ascontiguousarray(a, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] bb = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t m = aa.shape[0]
    cdef Py_ssize_t inner = aa.shape[1]
    cdef Py_ssize_t n = bb.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((m, n), dtype=np.float64)
    cdef Py_ssize_t i, j, k
    cdef double aik
    for i in range(m):
        for k in range(inner):
            aik = aa[i, k]
            if aik != 0.0:
                for j in range(n):
                    out[i, j] += aik * bb[k, j]
    return out


def jacobi_eigh(a, double rel_tol, int max_sweeps):
    """Cyclic Jacobi iteration on a symmetric matrix.

    Same contract as the pure-Python version: returns
    ``(w, v, sweeps, converged)``.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] m = np.array(a, dtype=np.float64, copy=True, order="C")
    cdef Py_ssize_t d = m.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] v = np.eye(d, dtype=np.float64)

    cdef double acc = 0.0
    cdef Py_ssize_t i, j, p, q
    for i in range(d):
        for j in range(d):
            acc += m[i, j] * m[i, j]
    cdef double thresh = rel_tol * sqrt(acc)

    cdef int sweeps = 0
    cdef bint converged = _offdiag_norm(m, d) <= thresh
    cdef double apq, app, aqq, tau, t, c, s, aip, aiq, vip, viq
    while not converged and sweeps < max_sweeps:
        sweeps += 1
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = m[p, q]
                if apq == 0.0:
                    continue
                app = m[p, p]
                aqq = m[q, q]
                tau = (aqq - app) / (2.0 * apq)
                if isinf(tau):
                    t = 0.0
                elif tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                m[p, p] = app - t * apq
                m[q, q] = aqq + t * apq
                m[p, q] = 0.0
                m[q, p] = 0.0
                for i in range(d):
                    if i != p and i != q:
                        aip = m[i, p]
                        aiq = m[i, q]
                        m[i, p] = c * aip - s * aiq
                        m[p, i] = m[i, p]
                        m[i, q] = s * aip + c * aiq
                        m[q, i] = m[i, q]
                for i in range(d):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - s * viq
                    v[i, q] = s * vip + c * viq
        converged = _offdiag_norm(m, d) <= thresh

    w = np.empty(d, dtype=np.float64)
    for i in range(d):
        w[i] = m[i, i]
    return w, v, sweeps, converged


cdef double _offdiag_norm(cnp.ndarray[cnp.float64_t, ndim=2] m, Py_ssize_t d):
    cdef double acc = 0.0
    cdef Py_ssize_t i, j
    for i in range(d - 1):
        for j in range(i + 1, d):
            acc += m[i, j] * m[i, j]
    return sqrt(2.0 * acc)
