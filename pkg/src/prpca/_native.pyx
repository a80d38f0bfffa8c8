# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: banded interpolation products and soft thresholding.

Must stay semantically identical to prpca._reference; see that module for
the contract of each function.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def interp_rows_apply(double[:, ::1] x):
    cdef Py_ssize_t n = x.shape[0], m = x.shape[1]
    out_arr = np.empty((2 * n, m), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    for j in range(m):
        out[0, j] = x[0, j]
    for i in range(n):
        for j in range(m):
            out[2 * i + 1, j] = x[i, j]
    for i in range(n - 1):
        for j in range(m):
            out[2 * i + 2, j] = 0.5 * (x[i, j] + x[i + 1, j])
    return out_arr


def interp_rows_adjoint(double[:, ::1] r):
    cdef Py_ssize_t N = r.shape[0], m = r.shape[1], n = N // 2
    out_arr = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double half
    for i in range(n):
        for j in range(m):
            out[i, j] = r[2 * i + 1, j]
    for j in range(m):
        out[0, j] += r[0, j]
    for i in range(n - 1):
        for j in range(m):
            half = 0.5 * r[2 * i + 2, j]
            out[i, j] += half
            out[i + 1, j] += half
    return out_arr


def interp_cols_apply(double[:, ::1] x):
    cdef Py_ssize_t n = x.shape[0], m = x.shape[1]
    out_arr = np.empty((n, 2 * m), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    for i in range(n):
        out[i, 0] = x[i, 0]
        for j in range(m):
            out[i, 2 * j + 1] = x[i, j]
        for j in range(m - 1):
            out[i, 2 * j + 2] = 0.5 * (x[i, j] + x[i, j + 1])
    return out_arr


def interp_cols_adjoint(double[:, ::1] r):
    cdef Py_ssize_t n = r.shape[0], M = r.shape[1], m = M // 2
    out_arr = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double half
    for i in range(n):
        for j in range(m):
            out[i, j] = r[i, 2 * j + 1]
        out[i, 0] += r[i, 0]
        for j in range(m - 1):
            half = 0.5 * r[i, 2 * j + 2]
            out[i, j] += half
            out[i, j + 1] += half
    return out_arr


def soft_threshold(double[:, ::1] m, double tau):
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    out_arr = np.empty((rows, cols), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double v
    for i in range(rows):
        for j in range(cols):
            v = m[i, j]
            if v > tau:
                out[i, j] = v - tau
            elif v < -tau:
                out[i, j] = v + tau
            else:
                out[i, j] = 0.0
    return out_arr
