"""Pure-Python kernels; mirrors ``_ckernels.pyx`` operation for operation.

Each fold takes ``alphas`` (decay factor from observation ``k-1`` to ``k``;
``alphas[0]`` is unused) and values ``x`` and returns ``(xhat, weight)``.
"""
import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def fold_v1(alphas, x):
    a = np.asarray(alphas, dtype=float).tolist()
    xs = np.asarray(x, dtype=float).tolist()
    n = len(xs)
    out = [0.0] * n
    wout = [0.0] * n
    if n == 0:
        return np.array(out), np.array(wout)
    sx = xs[0]
    sw = 1.0
    out[0] = sx / sw
    wout[0] = sw
    for k in range(1, n):
        ak = a[k]
        sx = xs[k] + ak * sx
        sw = 1.0 + ak * sw
        out[k] = sx / sw
        wout[k] = sw
    return np.array(out), np.array(wout)


def fold_v2(alphas, x, alpha1):
    a = np.asarray(alphas, dtype=float).tolist()
    xs = np.asarray(x, dtype=float).tolist()
    n = len(xs)
    out = [0.0] * n
    wout = [0.0] * n
    if n == 0:
        return np.array(out), np.array(wout)
    c = 1.0 - alpha1
    bx = c * xs[0]
    bw = c
    out[0] = bx / bw
    wout[0] = bw
    for k in range(1, n):
        ak = a[k]
        c = 1.0 - ak
        bx = c * xs[k] + ak * bx
        bw = c + ak * bw
        out[k] = bx / bw
        wout[k] = bw
    return np.array(out), np.array(wout)


def fold_v2c(alphas, x, alpha1):
    a = np.asarray(alphas, dtype=float).tolist()
    xs = np.asarray(x, dtype=float).tolist()
    n = len(xs)
    out = [0.0] * n
    wout = [0.0] * n
    if n == 0:
        return np.array(out), np.array(wout)
    prev = alpha1
    c = 1.0 - alpha1
    bx = c * xs[0]
    bw = c
    out[0] = bx / bw
    wout[0] = bw
    for k in range(1, n):
        ak = a[k]
        c = 1.0 - ak
        carry = ak * (c / (1.0 - prev))
        bx = c * xs[k] + carry * bx
        bw = c + carry * bw
        out[k] = bx / bw
        wout[k] = bw
        prev = ak
    return np.array(out), np.array(wout)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_fma(hi, lo, a, x):
    """(hi, lo) * a + x in double-double arithmetic."""
    p, e = _two_prod(hi, a)
    e += lo * a
    s = p + x
    bb = s - p
    e += (p - (s - bb)) + (x - bb)
    hi = s + e
    return hi, e - (hi - s)


def _dd_div(ahi, alo, bhi, blo):
    q = ahi / bhi
    p, e = _two_prod(q, bhi)
    e += q * blo
    s = ahi - p
    bb = s - ahi
    r = ((ahi - (s - bb)) + (-p - bb)) - e + alo
    return q + (s + r) / bhi


def fold_reference(alphas, x):
    """Version 1 recursion carried in double-double arithmetic.

    Roughly 106 bits of working precision; used as the reference when the
    direct-sum oracle would be quadratic.
    """
    a = np.asarray(alphas, dtype=float).tolist()
    xs = np.asarray(x, dtype=float).tolist()
    n = len(xs)
    out = [0.0] * n
    wout = [0.0] * n
    if n == 0:
        return np.array(out), np.array(wout)
    xh, xl = xs[0], 0.0
    wh, wl = 1.0, 0.0
    out[0] = xh
    wout[0] = 1.0
    for k in range(1, n):
        ak = a[k]
        xh, xl = _dd_fma(xh, xl, ak, xs[k])
        wh, wl = _dd_fma(wh, wl, ak, 1.0)
        out[k] = _dd_div(xh, xl, wh, wl)
        wout[k] = wh + wl
    return np.array(out), np.array(wout)
