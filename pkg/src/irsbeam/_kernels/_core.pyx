# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops; same contracts as irsbeam._kernels._pure."""

import numpy as np

from libc.math cimport sqrt

ctypedef double complex cplx


def sweep_unit_rows(cplx[:, ::1] R, cplx[:, ::1] Y, cplx[:, ::1] S):
    """One in-place Gauss-Seidel pass of row-wise maximization of tr(Y^H R Y);
    see the numpy twin for semantics. Returns the largest row movement."""
    cdef Py_ssize_t n = Y.shape[0]
    cdef Py_ssize_t k = Y.shape[1]
    cdef Py_ssize_t i, j, t
    cdef double rii, ng, move, max_move = 0.0
    cdef cplx gval, rji
    g_arr = np.empty(k, dtype=np.complex128)
    d_arr = np.empty(k, dtype=np.complex128)
    cdef cplx[::1] g = g_arr
    cdef cplx[::1] delta = d_arr
    with nogil:
        for i in range(n):
            rii = R[i, i].real
            ng = 0.0
            for t in range(k):
                gval = S[i, t] - rii * Y[i, t]
                g[t] = gval
                ng += gval.real * gval.real + gval.imag * gval.imag
            ng = sqrt(ng)
            if ng <= 0.0:
                continue  # flat direction: keep the current row
            move = 0.0
            for t in range(k):
                gval = g[t] / ng
                delta[t] = gval - Y[i, t]
                move += delta[t].real * delta[t].real + delta[t].imag * delta[t].imag
                Y[i, t] = gval
            move = sqrt(move)
            if move > max_move:
                max_move = move
            for j in range(n):
                rji = R[j, i]
                for t in range(k):
                    S[j, t] = S[j, t] + rji * delta[t]
    return max_move


def best_unit_modulus(cplx[:, ::1] L, cplx[:, ::1] raw, cplx[:, ::1] R):
    """Best entrywise unit-modulus projection of L @ r over the rows of raw;
    ties keep the first maximum. Returns (objective, row index, v)."""
    cdef Py_ssize_t n = L.shape[0]
    cdef Py_ssize_t k = L.shape[1]
    cdef Py_ssize_t count = raw.shape[0]
    cdef Py_ssize_t c, i, j
    cdef Py_ssize_t best_idx = -1
    cdef double best = -np.inf
    cdef double obj, mag
    cdef cplx acc, vi
    if raw.shape[1] != k:
        raise ValueError(
            f"raw has {raw.shape[1]} columns, factor L has {k}")
    v_arr = np.empty(n, dtype=np.complex128)
    best_arr = np.empty(n, dtype=np.complex128)
    cdef cplx[::1] v = v_arr
    cdef cplx[::1] vbest = best_arr
    with nogil:
        for c in range(count):
            for i in range(n):
                acc = 0
                for j in range(k):
                    acc = acc + L[i, j] * raw[c, j]
                mag = sqrt(acc.real * acc.real + acc.imag * acc.imag)
                if mag > 0.0:
                    v[i] = acc / mag
                else:
                    v[i] = 1.0
            obj = 0.0
            for i in range(n):
                acc = 0
                for j in range(n):
                    acc = acc + R[i, j] * v[j]
                vi = v[i]
                obj += vi.real * acc.real + vi.imag * acc.imag
            if obj > best:
                best = obj
                best_idx = c
                for i in range(n):
                    vbest[i] = v[i]
    if best_idx < 0:
        return float(best), -1, None
    return float(best), int(best_idx), best_arr


def phase_grid_scan(cplx[:, ::1] Phi, cplx[::1] hd_row, Py_ssize_t points):
    """Exhaustive scan of the uniform per-element phase grid (N <= 3);
    see the numpy twin. Returns (best gain, flat C-order index)."""
    cdef Py_ssize_t n_elts = Phi.shape[0]
    cdef Py_ssize_t m = hd_row.shape[0]
    cdef Py_ssize_t k1, k2, k3, t
    cdef Py_ssize_t best_flat = 0
    cdef double best = -np.inf
    cdef double gain
    cdef cplx z, w1, w2, w3
    if n_elts > 3:
        raise ValueError("grid scan supports at most 3 elements")
    if n_elts == 0:
        gain = 0.0
        for t in range(m):
            gain += hd_row[t].real * hd_row[t].real + hd_row[t].imag * hd_row[t].imag
        return gain, 0
    w_arr = np.exp(-2j * np.pi * np.arange(points) / points)
    p1_arr = np.empty(m, dtype=np.complex128)
    p2_arr = np.empty(m, dtype=np.complex128)
    cdef cplx[::1] w = w_arr
    cdef cplx[::1] p1 = p1_arr
    cdef cplx[::1] p2 = p2_arr
    if n_elts == 1:
        with nogil:
            for k1 in range(points):
                w1 = w[k1]
                gain = 0.0
                for t in range(m):
                    z = hd_row[t] + w1 * Phi[0, t]
                    gain += z.real * z.real + z.imag * z.imag
                if gain > best:
                    best = gain
                    best_flat = k1
        return best, int(best_flat)
    if n_elts == 2:
        with nogil:
            for k1 in range(points):
                w1 = w[k1]
                for t in range(m):
                    p1[t] = hd_row[t] + w1 * Phi[0, t]
                for k2 in range(points):
                    w2 = w[k2]
                    gain = 0.0
                    for t in range(m):
                        z = p1[t] + w2 * Phi[1, t]
                        gain += z.real * z.real + z.imag * z.imag
                    if gain > best:
                        best = gain
                        best_flat = k1 * points + k2
        return best, int(best_flat)
    with nogil:
        for k1 in range(points):
            w1 = w[k1]
            for t in range(m):
                p1[t] = hd_row[t] + w1 * Phi[0, t]
            for k2 in range(points):
                w2 = w[k2]
                for t in range(m):
                    p2[t] = p1[t] + w2 * Phi[1, t]
                for k3 in range(points):
                    w3 = w[k3]
                    gain = 0.0
                    for t in range(m):
                        z = p2[t] + w3 * Phi[2, t]
                        gain += z.real * z.real + z.imag * z.imag
                    if gain > best:
                        best = gain
                        best_flat = (k1 * points + k2) * points + k3
    return best, int(best_flat)
