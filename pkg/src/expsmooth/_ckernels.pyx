# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; same arithmetic, in the same order, as ``_pykernels``."""
import numpy as np

cdef double _SPLITTER = 134217729.0


def fold_v1(alphas, x):
    cdef const double[::1] a = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef const double[::1] xs = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xs.shape[0], k
    out_arr = np.empty(n)
    w_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double[::1] wout = w_arr
    cdef double sx, sw, ak
    if n == 0:
        return out_arr, w_arr
    sx = xs[0]
    sw = 1.0
    out[0] = sx / sw
    wout[0] = sw
    with nogil:
        for k in range(1, n):
            ak = a[k]
            sx = xs[k] + ak * sx
            sw = 1.0 + ak * sw
            out[k] = sx / sw
            wout[k] = sw
    return out_arr, w_arr


def fold_v2(alphas, x, double alpha1):
    cdef const double[::1] a = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef const double[::1] xs = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xs.shape[0], k
    out_arr = np.empty(n)
    w_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double[::1] wout = w_arr
    cdef double bx, bw, ak, c
    if n == 0:
        return out_arr, w_arr
    c = 1.0 - alpha1
    bx = c * xs[0]
    bw = c
    out[0] = bx / bw
    wout[0] = bw
    with nogil:
        for k in range(1, n):
            ak = a[k]
            c = 1.0 - ak
            bx = c * xs[k] + ak * bx
            bw = c + ak * bw
            out[k] = bx / bw
            wout[k] = bw
    return out_arr, w_arr


def fold_v2c(alphas, x, double alpha1):
    cdef const double[::1] a = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef const double[::1] xs = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xs.shape[0], k
    out_arr = np.empty(n)
    w_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double[::1] wout = w_arr
    cdef double bx, bw, ak, c, carry, prev
    if n == 0:
        return out_arr, w_arr
    prev = alpha1
    c = 1.0 - alpha1
    bx = c * xs[0]
    bw = c
    out[0] = bx / bw
    wout[0] = bw
    with nogil:
        for k in range(1, n):
            ak = a[k]
            c = 1.0 - ak
            carry = ak * (c / (1.0 - prev))
            bx = c * xs[k] + carry * bx
            bw = c + carry * bw
            out[k] = bx / bw
            wout[k] = bw
            prev = ak
    return out_arr, w_arr


cdef inline void _two_prod(double a, double b, double* p, double* e) noexcept nogil:
    cdef double c, ah, al, bh, bl
    p[0] = a * b
    c = _SPLITTER * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLITTER * b
    bh = c - (c - b)
    bl = b - bh
    e[0] = ((ah * bh - p[0]) + ah * bl + al * bh) + al * bl


cdef inline void _dd_fma(double* hi, double* lo, double a, double x) noexcept nogil:
    cdef double p, e, s, bb, h
    _two_prod(hi[0], a, &p, &e)
    e += lo[0] * a
    s = p + x
    bb = s - p
    e += (p - (s - bb)) + (x - bb)
    h = s + e
    lo[0] = e - (h - s)
    hi[0] = h


cdef inline double _dd_div(double ahi, double alo, double bhi, double blo) noexcept nogil:
    cdef double q, p, e, s, bb, r
    q = ahi / bhi
    _two_prod(q, bhi, &p, &e)
    e += q * blo
    s = ahi - p
    bb = s - ahi
    r = ((ahi - (s - bb)) + (-p - bb)) - e + alo
    return q + (s + r) / bhi


def fold_reference(alphas, x):
    cdef const double[::1] a = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef const double[::1] xs = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xs.shape[0], k
    out_arr = np.empty(n)
    w_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double[::1] wout = w_arr
    cdef double xh, xl, wh, wl
    if n == 0:
        return out_arr, w_arr
    xh = xs[0]
    xl = 0.0
    wh = 1.0
    wl = 0.0
    out[0] = xh
    wout[0] = 1.0
    with nogil:
        for k in range(1, n):
            _dd_fma(&xh, &xl, a[k], xs[k])
            _dd_fma(&wh, &wl, a[k], 1.0)
            out[k] = _dd_div(xh, xl, wh, wl)
            wout[k] = wh + wl
    return out_arr, w_arr
