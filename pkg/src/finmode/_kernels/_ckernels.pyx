# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Galerkin triad sum; same contract as the NumPy fallback."""
import numpy as np


def nonlinear_term(double[:, ::1] K, double[::1] knorm2, double complex[:, ::1] U,
                   long[::1] out, long[::1] i1, long[::1] i2):
    cdef Py_ssize_t N = U.shape[0]
    cdef Py_ssize_t T = out.shape[0]
    cdef Py_ssize_t t, a, b, o, c
    cdef double complex d12, d21, dot
    res = np.zeros((N, 3), dtype=np.complex128)
    cdef double complex[:, ::1] acc = res
    for t in range(T):
        a = i1[t]
        b = i2[t]
        o = out[t]
        d12 = U[a, 0] * K[b, 0] + U[a, 1] * K[b, 1] + U[a, 2] * K[b, 2]
        d21 = U[b, 0] * K[a, 0] + U[b, 1] * K[a, 1] + U[b, 2] * K[a, 2]
        for c in range(3):
            acc[o, c] = acc[o, c] + d12 * U[b, c] + d21 * U[a, c]
    for o in range(N):
        dot = (acc[o, 0] * K[o, 0] + acc[o, 1] * K[o, 1] + acc[o, 2] * K[o, 2]) / knorm2[o]
        for c in range(3):
            acc[o, c] = -1j * (acc[o, c] - dot * K[o, c])
    return res


def apply_linear(double[:, :, ::1] L, double complex[:, ::1] U):
    cdef Py_ssize_t N = U.shape[0]
    cdef Py_ssize_t n, i, j
    cdef double complex s
    res = np.empty((N, 3), dtype=np.complex128)
    cdef double complex[:, ::1] r = res
    for n in range(N):
        for i in range(3):
            s = 0
            for j in range(3):
                s = s + L[n, i, j] * U[n, j]
            r[n, i] = s
    return res
