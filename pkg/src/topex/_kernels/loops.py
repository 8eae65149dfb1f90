"""Scalar-loop kernels, compiled with numba when it is importable."""

import math

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def stretch_offsets(eps, n):
    m = 1 << (n + 1)
    left = np.zeros(m)
    right = np.zeros(m)
    for idx in range(m):
        lo = 0.0
        hi = 0.0
        for i in range(n + 1):
            if (idx >> (n - i)) & 1:
                lo = lo + eps[i]
            else:
                hi = hi + eps[i]
        left[idx] = lo
        right[idx] = hi
    return left, right


@njit(cache=True)
def simpson_prefix(y, h):
    n = y.shape[0] - 1
    out = np.zeros(n + 1)
    acc = 0.0
    for m in range(n // 2):
        y0 = y[2 * m]
        y1 = y[2 * m + 1]
        y2 = y[2 * m + 2]
        out[2 * m + 1] = acc + (h / 12.0) * ((5.0 * y0 + 8.0 * y1) - y2)
        acc = acc + (h / 3.0) * ((y0 + 4.0 * y1) + y2)
        out[2 * m + 2] = acc
    return out


@njit(cache=True)
def prefix_integral(prefix, y, a, h, xq):
    npanel = (y.shape[0] - 1) // 2
    out = np.empty(xq.shape[0])
    for k in range(xq.shape[0]):
        t = (xq[k] - a) / h
        m = int(math.floor(t / 2.0))
        if m < 0:
            m = 0
        elif m > npanel - 1:
            m = npanel - 1
        u = t - 2.0 * m
        y0 = y[2 * m]
        y1 = y[2 * m + 1]
        y2 = y[2 * m + 2]
        c1 = (-3.0 * y0 + 4.0 * y1) - y2
        c2 = (y0 - 2.0 * y1) + y2
        out[k] = prefix[2 * m] + h * ((y0 * u + c1 * u * u / 4.0) + c2 * u * u * u / 6.0)
    return out


@njit(cache=True)
def interpolate(y, a, h, xq):
    npanel = (y.shape[0] - 1) // 2
    out = np.empty(xq.shape[0])
    for k in range(xq.shape[0]):
        t = (xq[k] - a) / h
        m = int(math.floor(t / 2.0))
        if m < 0:
            m = 0
        elif m > npanel - 1:
            m = npanel - 1
        u = t - 2.0 * m
        y0 = y[2 * m]
        y1 = y[2 * m + 1]
        y2 = y[2 * m + 2]
        c1 = (-3.0 * y0 + 4.0 * y1) - y2
        c2 = (y0 - 2.0 * y1) + y2
        out[k] = (y0 + u * c1 / 2.0) + u * u * c2 / 2.0
    return out


@njit(cache=True)
def weierstrass(t, amp, freq, terms):
    out = np.zeros(t.shape[0])
    for k in range(t.shape[0]):
        s = 0.0
        a = 1.0
        w = math.pi
        for _ in range(terms):
            s = s + a * math.cos(w * t[k])
            a = a * amp
            w = w * freq
        out[k] = s
    return out


@njit(cache=True)
def fill_boxes(start, stop, nx, ny):
    mask = np.zeros((nx, ny), dtype=np.bool_)
    for b in range(start.shape[0]):
        for i in range(start[b, 0], stop[b, 0]):
            for j in range(start[b, 1], stop[b, 1]):
                mask[i, j] = True
    return mask


@njit(cache=True)
def box_counts(mask, sizes):
    nx, ny = mask.shape
    counts = np.zeros(sizes.shape[0], dtype=np.int64)
    for q in range(sizes.shape[0]):
        s = sizes[q]
        bx = (nx + s - 1) // s
        by = (ny + s - 1) // s
        coarse = np.zeros((bx, by), dtype=np.bool_)
        total = 0
        for i in range(nx):
            for j in range(ny):
                if mask[i, j] and not coarse[i // s, j // s]:
                    coarse[i // s, j // s] = True
                    total += 1
        counts[q] = total
    return counts


@njit(cache=True)
def _contains(sorted_masks, value):
    lo = 0
    hi = sorted_masks.shape[0]
    while lo < hi:
        mid = (lo + hi) // 2
        if sorted_masks[mid] < value:
            lo = mid + 1
        else:
            hi = mid
    return lo < sorted_masks.shape[0] and sorted_masks[lo] == value


@njit(cache=True)
def closure_violation(sorted_masks):
    m = sorted_masks.shape[0]
    for i in range(m):
        for j in range(i + 1, m):
            if not _contains(sorted_masks, sorted_masks[i] | sorted_masks[j]):
                return i, j, 1
            if not _contains(sorted_masks, sorted_masks[i] & sorted_masks[j]):
                return i, j, 2
    return -1, -1, 0
