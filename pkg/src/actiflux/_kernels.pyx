# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled reconstruction kernels; same contract as ``_kernels_py``."""
import numpy as np


cdef inline double _parabola(double avg, double left, double right, double xi) nogil:
    return (-3.0 * (2.0 * avg - left - right) * xi * xi + (right - left) * xi
            + (6.0 * avg - left - right) * 0.25)


def eval_interfaces_1d(avg_pad, pts_pad, offsets, Py_ssize_t depth):
    cdef double[:, ::1] A = np.ascontiguousarray(avg_pad, dtype=np.float64)
    cdef double[:, ::1] P = np.ascontiguousarray(pts_pad, dtype=np.float64)
    cdef double[::1] off = np.ascontiguousarray(offsets, dtype=np.float64)
    cdef Py_ssize_t m = P.shape[0]
    cdef Py_ssize_t n1 = P.shape[1] - 2 * depth
    cdef Py_ssize_t K = off.shape[0]
    out_arr = np.empty((K, m, n1))
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t k, v, p, c0
    cdef double d, xi
    with nogil:
        for k in range(K):
            d = off[k]
            if d == 0.0:
                for v in range(m):
                    for p in range(n1):
                        out[k, v, p] = P[v, depth + p]
                continue
            if d < 0.0:
                c0 = depth - 1
                xi = d + 0.5
            else:
                c0 = depth
                xi = d - 0.5
            for v in range(m):
                for p in range(n1):
                    out[k, v, p] = _parabola(A[v, c0 + p], P[v, c0 + p],
                                             P[v, c0 + p + 1], xi)
    return out_arr


def recon2d_block(avg_pad, nodes_pad, ev_pad, eh_pad, Py_ssize_t i0,
                  Py_ssize_t j0, Py_ssize_t px, Py_ssize_t py, double xi, double eta):
    cdef double[:, ::1] A = np.ascontiguousarray(avg_pad, dtype=np.float64)
    cdef double[:, ::1] Nd = np.ascontiguousarray(nodes_pad, dtype=np.float64)
    cdef double[:, ::1] Ev = np.ascontiguousarray(ev_pad, dtype=np.float64)
    cdef double[:, ::1] Eh = np.ascontiguousarray(eh_pad, dtype=np.float64)
    cdef double bx = -1.0 + 4.0 * xi * xi
    cdef double by = -1.0 + 4.0 * eta * eta
    cdef double w0 = 2.25 * bx * by
    cdef double w1 = -0.25 * (-1.0 - 4.0 * xi + 12.0 * xi * xi) * by
    cdef double w2 = -0.25 * (-1.0 + 4.0 * xi + 12.0 * xi * xi) * by
    cdef double w3 = -0.25 * bx * (-1.0 - 4.0 * eta + 12.0 * eta * eta)
    cdef double w4 = -0.25 * bx * (-1.0 + 4.0 * eta + 12.0 * eta * eta)
    cdef double w5 = 0.0625 * (-1.0 + 2.0 * xi) * (-1.0 + 2.0 * eta) * (-1.0 - 2.0 * eta + 2.0 * xi * (-1.0 + 6.0 * eta))
    cdef double w6 = 0.0625 * (1.0 + 2.0 * xi) * (-1.0 + 2.0 * eta) * (1.0 + 2.0 * eta + 2.0 * xi * (-1.0 + 6.0 * eta))
    cdef double w7 = 0.0625 * (-1.0 + 2.0 * xi) * (1.0 + 2.0 * eta) * (1.0 - 2.0 * eta + 2.0 * xi * (1.0 + 6.0 * eta))
    cdef double w8 = 0.0625 * (1.0 + 2.0 * xi) * (1.0 + 2.0 * eta) * (-1.0 + 2.0 * eta + 2.0 * xi * (1.0 + 6.0 * eta))
    out_arr = np.empty((px, py))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t a, b, i, j
    with nogil:
        for a in range(px):
            i = i0 + a
            for b in range(py):
                j = j0 + b
                out[a, b] = (w0 * A[i, j] + w1 * Ev[i, j] + w2 * Ev[i + 1, j]
                             + w3 * Eh[i, j] + w4 * Eh[i, j + 1]
                             + w5 * Nd[i, j] + w6 * Nd[i + 1, j]
                             + w7 * Nd[i, j + 1] + w8 * Nd[i + 1, j + 1])
    return out_arr
