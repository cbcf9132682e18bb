# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled dispersion kernels (hot loops of the forward/adjoint operator).

Signatures match _kernels_py; dispatch happens in backend.py.
"""

import numpy as np

cimport cython
cimport numpy as cnp

BACKEND = "cython"


def forward_standard(const double[:, :, ::1] masks, const double[:, :, ::1] cube,
                     double[:, :, ::1] out):
    cdef Py_ssize_t K = masks.shape[0]
    cdef Py_ssize_t M = cube.shape[0]
    cdef Py_ssize_t N = cube.shape[1]
    cdef Py_ssize_t L = cube.shape[2]
    cdef Py_ssize_t k, x, y, lam
    cdef double t
    out[:, :, :] = 0.0
    with nogil:
        for k in range(K):
            for x in range(M):
                for y in range(N):
                    t = masks[k, x, y]
                    if t == 0.0:
                        continue
                    for lam in range(L):
                        out[k, x, y + lam] += t * cube[x, y, lam]


def adjoint_standard(const double[:, :, ::1] masks, const double[:, :, ::1] g,
                     double[:, :, ::1] out):
    cdef Py_ssize_t K = masks.shape[0]
    cdef Py_ssize_t M = out.shape[0]
    cdef Py_ssize_t N = out.shape[1]
    cdef Py_ssize_t L = out.shape[2]
    cdef Py_ssize_t k, x, y, lam
    cdef double t
    out[:, :, :] = 0.0
    with nogil:
        for k in range(K):
            for x in range(M):
                for y in range(N):
                    t = masks[k, x, y]
                    if t == 0.0:
                        continue
                    for lam in range(L):
                        out[x, y, lam] += t * g[k, x, y + lam]


def forward_higher(const double[:, :, ::1] masks, const double[:, :, ::1] cube,
                   const double[::1] weights, double[:, :, ::1] out):
    cdef Py_ssize_t K = masks.shape[0]
    cdef Py_ssize_t M = cube.shape[0]
    cdef Py_ssize_t N = cube.shape[1]
    cdef Py_ssize_t L = cube.shape[2]
    cdef Py_ssize_t k, x, y, lam
    cdef double t, v
    cdef double w0 = weights[0], w1 = weights[1], w2 = weights[2]
    out[:, :, :] = 0.0
    with nogil:
        for k in range(K):
            for x in range(M):
                for y in range(N):
                    t = masks[k, x, y]
                    if t == 0.0:
                        continue
                    for lam in range(L):
                        v = t * cube[x, y, lam]
                        out[k, x, y + lam] += w0 * v
                        out[k, x, y + lam + 1] += w1 * v
                        out[k, x, y + lam + 2] += w2 * v


def adjoint_higher(const double[:, :, ::1] masks, const double[:, :, ::1] g,
                   const double[::1] weights, double[:, :, ::1] out):
    cdef Py_ssize_t K = masks.shape[0]
    cdef Py_ssize_t M = out.shape[0]
    cdef Py_ssize_t N = out.shape[1]
    cdef Py_ssize_t L = out.shape[2]
    cdef Py_ssize_t k, x, y, lam
    cdef double t
    cdef double w0 = weights[0], w1 = weights[1], w2 = weights[2]
    out[:, :, :] = 0.0
    with nogil:
        for k in range(K):
            for x in range(M):
                for y in range(N):
                    t = masks[k, x, y]
                    if t == 0.0:
                        continue
                    for lam in range(L):
                        out[x, y, lam] += t * (w0 * g[k, x, y + lam]
                                               + w1 * g[k, x, y + lam + 1]
                                               + w2 * g[k, x, y + lam + 2])
