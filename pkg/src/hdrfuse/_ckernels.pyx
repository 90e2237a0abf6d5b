# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in ``_pykernels``.

Same signatures and semantics; single-threaded so results do not depend
on scheduling.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, floor, fabs

cnp.import_array()

NAME = "cython"


cdef inline Py_ssize_t _clamp(Py_ssize_t i, Py_ssize_t n) noexcept nogil:
    if i < 0:
        return 0
    if i >= n:
        return n - 1
    return i


def box_mean(a, int r):
    cdef const double[:, ::1] src = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] tmp_arr = np.empty((h, w), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] tmp = tmp_arr
    cdef double[:, ::1] out = out_arr
    cdef double[::1] acc = np.empty(w, dtype=np.float64)
    cdef Py_ssize_t i, j, k, add, sub
    cdef double s
    cdef double norm = 1.0 / <double>((2 * r + 1) * (2 * r + 1))

    with nogil:
        # horizontal running sums
        for i in range(h):
            s = 0.0
            for k in range(-r, r + 1):
                s += src[i, _clamp(k, w)]
            tmp[i, 0] = s
            for j in range(1, w):
                s += src[i, _clamp(j + r, w)] - src[i, _clamp(j - r - 1, w)]
                tmp[i, j] = s
        # vertical running sums, carried as a whole row
        for j in range(w):
            acc[j] = 0.0
        for k in range(-r, r + 1):
            for j in range(w):
                acc[j] += tmp[_clamp(k, h), j]
        for j in range(w):
            out[0, j] = acc[j] * norm
        for i in range(1, h):
            add = _clamp(i + r, h)
            sub = _clamp(i - r - 1, h)
            for j in range(w):
                acc[j] += tmp[add, j] - tmp[sub, j]
                out[i, j] = acc[j] * norm
    return out_arr


cdef void _taps(Py_ssize_t n_in, Py_ssize_t n_out, Py_ssize_t[::1] i0,
                Py_ssize_t[::1] i1, double[::1] frac) noexcept nogil:
    cdef Py_ssize_t i
    cdef double pos, scale = <double>n_in / <double>n_out
    for i in range(n_out):
        pos = (i + 0.5) * scale - 0.5
        if pos < 0.0:
            pos = 0.0
        if pos > n_in - 1:
            pos = n_in - 1
        i0[i] = <Py_ssize_t>floor(pos)
        i1[i] = i0[i] + 1 if i0[i] + 1 < n_in else n_in - 1
        frac[i] = pos - i0[i]


def upsample_bilinear(a, Py_ssize_t out_h, Py_ssize_t out_w):
    cdef const double[:, ::1] src = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1]
    cdef Py_ssize_t[::1] r0 = np.empty(out_h, dtype=np.intp)
    cdef Py_ssize_t[::1] r1 = np.empty(out_h, dtype=np.intp)
    cdef double[::1] fr = np.empty(out_h, dtype=np.float64)
    cdef Py_ssize_t[::1] c0 = np.empty(out_w, dtype=np.intp)
    cdef Py_ssize_t[::1] c1 = np.empty(out_w, dtype=np.intp)
    cdef double[::1] fc = np.empty(out_w, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out_arr = np.empty((out_h, out_w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double[::1] row = np.empty(w, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double f

    with nogil:
        _taps(h, out_h, r0, r1, fr)
        _taps(w, out_w, c0, c1, fc)
        for i in range(out_h):
            f = fr[i]
            for j in range(w):
                row[j] = src[r0[i], j] * (1.0 - f) + src[r1[i], j] * f
            for j in range(out_w):
                out[i, j] = row[c0[j]] * (1.0 - fc[j]) + row[c1[j]] * fc[j]
    return out_arr


def hist_kmeans(hist, centers, int max_iter):
    cdef const double[::1] hv = np.ascontiguousarray(hist, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] c_arr = np.array(centers, dtype=np.float64)
    cdef double[::1] c = c_arr
    cdef Py_ssize_t n = hv.shape[0], k = c.shape[0]
    cdef cnp.ndarray[cnp.intp_t, ndim=1] lab_arr = np.full(n, -1, dtype=np.intp)
    cdef Py_ssize_t[::1] labels = lab_arr
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cnt_arr = np.zeros(k, dtype=np.float64)
    cdef double[::1] counts = cnt_arr
    cdef double[::1] sums = np.zeros(k, dtype=np.float64)
    cdef Py_ssize_t g, m, q, best, far, it
    cdef double d, dbest, tmp
    cdef bint changed

    with nogil:
        for it in range(max_iter):
            changed = False
            for m in range(k):
                counts[m] = 0.0
                sums[m] = 0.0
            for g in range(n):
                best = 0
                dbest = fabs(g - c[0])
                for m in range(1, k):
                    d = fabs(g - c[m])
                    if d < dbest:
                        dbest = d
                        best = m
                if labels[g] != best:
                    changed = True
                    labels[g] = best
                counts[best] += hv[g]
                sums[best] += hv[g] * g
            for m in range(k):
                if counts[m] > 0:
                    c[m] = sums[m] / counts[m]
            # all pixels in one cluster: re-seed the first empty one at the
            # occupied level farthest from that cluster's centre
            q = 0
            for m in range(k):
                if counts[m] > 0:
                    q += 1
            if q == 1:
                far = -1
                dbest = 0.0
                for g in range(n):
                    if hv[g] > 0:
                        d = fabs(g - c[labels[g]])
                        if d > dbest:
                            dbest = d
                            far = g
                if far >= 0:
                    for m in range(k):
                        if counts[m] == 0:
                            c[m] = far
                            break
                    # insertion sort keeps the centres ascending
                    for m in range(1, k):
                        tmp = c[m]
                        q = m - 1
                        while q >= 0 and c[q] > tmp:
                            c[q + 1] = c[q]
                            q -= 1
                        c[q + 1] = tmp
                    changed = True
            if not changed:
                break
    return lab_arr, c_arr, cnt_arr


def spectral_combine(fx, flh, flv, dh, dv, double lam):
    cdef const double complex[:, ::1] x = np.ascontiguousarray(fx, dtype=np.complex128)
    cdef const double complex[:, ::1] lh = np.ascontiguousarray(flh, dtype=np.complex128)
    cdef const double complex[:, ::1] lv = np.ascontiguousarray(flv, dtype=np.complex128)
    cdef const double complex[:, ::1] kh = np.ascontiguousarray(np.broadcast_to(dh, fx.shape), dtype=np.complex128)
    cdef const double complex[:, ::1] kv = np.ascontiguousarray(np.broadcast_to(dv, fx.shape), dtype=np.complex128)
    cdef Py_ssize_t h = x.shape[0], w = x.shape[1], i, j
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out_arr = np.empty((h, w), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef double complex a, b
    cdef double hr, hi, vr, vi, den

    with nogil:
        for i in range(h):
            for j in range(w):
                a = kh[i, j]
                b = kv[i, j]
                hr = a.real
                hi = a.imag
                vr = b.real
                vi = b.imag
                den = 1.0 + lam * (hr * hr + hi * hi + vr * vr + vi * vi)
                out[i, j] = (x[i, j] + lam * (a.conjugate() * lh[i, j] + b.conjugate() * lv[i, j])) / den
    return out_arr


def saturation(r, g, b):
    cdef const double[:, ::1] rv = np.ascontiguousarray(r, dtype=np.float64)
    cdef const double[:, ::1] gv = np.ascontiguousarray(g, dtype=np.float64)
    cdef const double[:, ::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t h = rv.shape[0], w = rv.shape[1], i, j
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double rho, dr, dg, db

    with nogil:
        for i in range(h):
            for j in range(w):
                rho = (rv[i, j] + gv[i, j] + bv[i, j]) / 3.0
                dr = rv[i, j] - rho
                dg = gv[i, j] - rho
                db = bv[i, j] - rho
                out[i, j] = sqrt(dr * dr + dg * dg + db * db)
    return out_arr
