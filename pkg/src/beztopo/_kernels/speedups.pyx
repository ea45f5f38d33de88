# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot inner loops.

Same contract as ``pure.py``; the package falls back to that module when this
extension is unavailable.  Degrees are capped at 30 upstream, so binomial
rows fit comfortably in 64-bit integers.
"""
from libc.math cimport sin, cos, sqrt, pow

import numpy as np

BACKEND = "compiled"

DEF MAX_N = 32


cdef void _pascal_row(long long* row, int n) noexcept nogil:
    cdef int i
    row[0] = 1
    for i in range(1, n + 1):
        row[i] = row[i - 1] * (n - i + 1) // i


def bernstein_matrix(int degree, ts):
    """Basis matrix B with B[k, i] = C(degree, i) * ts[k]^i * (1-ts[k])^(degree-i)."""
    cdef const double[::1] tv = np.ascontiguousarray(ts, dtype=np.float64)
    cdef Py_ssize_t m = tv.shape[0]
    out_arr = np.empty((m, degree + 1))
    cdef double[:, ::1] out = out_arr
    cdef long long row[MAX_N + 1]
    cdef double upow[MAX_N + 1]
    cdef double t, u, tp
    cdef Py_ssize_t k
    cdef int i
    _pascal_row(row, degree)
    with nogil:
        for k in range(m):
            t = tv[k]
            u = 1.0 - t
            upow[0] = 1.0
            for i in range(1, degree + 1):
                upow[i] = upow[i - 1] * u
            tp = 1.0
            for i in range(degree + 1):
                out[k, i] = row[i] * tp * upow[degree - i]
                tp *= t
    return out_arr


def bezier_points(control, ts):
    """Evaluate a Bezier curve (any ambient dimension) at many parameters."""
    cdef const double[:, ::1] c = np.ascontiguousarray(control, dtype=np.float64)
    cdef const double[::1] tv = np.ascontiguousarray(ts, dtype=np.float64)
    cdef Py_ssize_t m = tv.shape[0]
    cdef int n = c.shape[0] - 1, dim = c.shape[1]
    out_arr = np.zeros((m, dim))
    cdef double[:, ::1] out = out_arr
    cdef long long row[MAX_N + 1]
    cdef double upow[MAX_N + 1]
    cdef double t, u, b, tp
    cdef Py_ssize_t k
    cdef int i, d
    _pascal_row(row, n)
    with nogil:
        for k in range(m):
            t = tv[k]
            u = 1.0 - t
            upow[0] = 1.0
            for i in range(1, n + 1):
                upow[i] = upow[i - 1] * u
            tp = 1.0
            for i in range(n + 1):
                b = row[i] * tp * upow[n - i]
                tp *= t
                for d in range(dim):
                    out[k, d] += b * c[i, d]
    return out_arr


cdef void _selfx(double* qx, double* qy, double* qz, int n,
                 double s, double t, double* out) noexcept nogil:
    cdef long long brow[MAX_N + 1]
    cdef long long irow[MAX_N + 1]
    cdef double w, wk
    cdef int i, j, k
    out[0] = 0.0; out[1] = 0.0; out[2] = 0.0
    for i in range(n):
        _pascal_row(irow, i)
        _pascal_row(brow, n - 1 - i)
        for j in range(n - i):
            w = brow[j] * pow(s, n - 1 - i - j) * pow(1.0 - s, j)
            for k in range(i + 1):
                wk = w * irow[k] * pow(1.0 - t, i - k) * pow(t, k)
                out[0] += wk * qx[j + k]
                out[1] += wk * qy[j + k]
                out[2] += wk * qz[j + k]
    out[0] /= n; out[1] /= n; out[2] /= n


def selfx_value(q, double s, double t):
    """Normalized difference-quotient functional of edge vectors q at (s, t)."""
    cdef const double[:, ::1] qa = np.ascontiguousarray(q, dtype=np.float64)
    cdef int n = qa.shape[0], i
    if qa.shape[1] != 3 or n > MAX_N:
        raise ValueError("edge array must be (n, 3) with n <= %d" % MAX_N)
    cdef double qx[MAX_N]
    cdef double qy[MAX_N]
    cdef double qz[MAX_N]
    cdef double out[3]
    for i in range(n):
        qx[i] = qa[i, 0]; qy[i] = qa[i, 1]; qz[i] = qa[i, 2]
    _selfx(qx, qy, qz, n, s, t, out)
    return np.array([out[0], out[1], out[2]])


def edges_from_angles(x, int n):
    """Unit edge vectors from angle pairs; last edge closes the polygon."""
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    out_arr = np.empty((n, 3))
    cdef double[:, ::1] out = out_arr
    cdef int m = n - 1, i
    cdef double sp
    cdef double sx = 0.0, sy = 0.0, sz = 0.0
    for i in range(m):
        sp = sin(xv[i])
        out[i, 0] = sp * cos(xv[m + i])
        out[i, 1] = sp * sin(xv[m + i])
        out[i, 2] = cos(xv[i])
        sx += out[i, 0]; sy += out[i, 1]; sz += out[i, 2]
    out[m, 0] = -sx; out[m, 1] = -sy; out[m, 2] = -sz
    return out_arr


def sf_value(x, int n):
    """Combined objective: ||selfx_value|| + |(len of dependent edge)^2 - 1|."""
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    if n > MAX_N or xv.shape[0] != 2 * n:
        raise ValueError("parameter vector must have length 2n with n <= %d" % MAX_N)
    cdef double qx[MAX_N]
    cdef double qy[MAX_N]
    cdef double qz[MAX_N]
    cdef double out[3]
    cdef int m = n - 1, i
    cdef double sp, sx = 0.0, sy = 0.0, sz = 0.0
    cdef double s, t, closure
    with nogil:
        for i in range(m):
            sp = sin(xv[i])
            qx[i] = sp * cos(xv[m + i])
            qy[i] = sp * sin(xv[m + i])
            qz[i] = cos(xv[i])
            sx += qx[i]; sy += qy[i]; sz += qz[i]
        qx[m] = -sx; qy[m] = -sy; qz[m] = -sz
        closure = qx[m] * qx[m] + qy[m] * qy[m] + qz[m] * qz[m] - 1.0
        if closure < 0.0:
            closure = -closure
        s = xv[2 * n - 2]
        t = xv[2 * n - 1]
        _selfx(qx, qy, qz, n, s, t, out)
    return sqrt(out[0] * out[0] + out[1] * out[1] + out[2] * out[2]) + closure
