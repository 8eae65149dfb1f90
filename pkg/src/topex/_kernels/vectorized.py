"""Pure-numpy counterparts of the loop kernels.

Each function returns the same values as its namesake in ``loops``; the
floating-point operations are ordered identically where exact agreement
matters (stretch offsets and prefix tables).
"""

import numpy as np


def stretch_offsets(eps, n):
    m = 1 << (n + 1)
    idx = np.arange(m)
    left = np.zeros(m)
    right = np.zeros(m)
    for i in range(n + 1):
        minus = ((idx >> (n - i)) & 1).astype(bool)
        left = left + np.where(minus, eps[i], 0.0)
        right = right + np.where(minus, 0.0, eps[i])
    return left, right


def simpson_prefix(y, h):
    y0, y1, y2 = y[0:-2:2], y[1:-1:2], y[2::2]
    out = np.zeros(y.shape[0])
    out[2::2] = np.cumsum((h / 3.0) * ((y0 + 4.0 * y1) + y2))
    out[1::2] = out[0:-1:2] + (h / 12.0) * ((5.0 * y0 + 8.0 * y1) - y2)
    return out


def _panels(y, a, h, xq):
    npanel = (y.shape[0] - 1) // 2
    t = (xq - a) / h
    m = np.clip(np.floor(t / 2.0).astype(np.int64), 0, npanel - 1)
    u = t - 2.0 * m
    y0, y1, y2 = y[2 * m], y[2 * m + 1], y[2 * m + 2]
    return m, u, y0, (-3.0 * y0 + 4.0 * y1) - y2, (y0 - 2.0 * y1) + y2


def prefix_integral(prefix, y, a, h, xq):
    m, u, y0, c1, c2 = _panels(y, a, h, xq)
    return prefix[2 * m] + h * ((y0 * u + c1 * u * u / 4.0) + c2 * u * u * u / 6.0)


def interpolate(y, a, h, xq):
    _, u, y0, c1, c2 = _panels(y, a, h, xq)
    return (y0 + u * c1 / 2.0) + u * u * c2 / 2.0


def weierstrass(t, amp, freq, terms):
    out = np.zeros(t.shape[0])
    a = 1.0
    w = np.pi
    for _ in range(terms):
        out = out + a * np.cos(w * t)
        a = a * amp
        w = w * freq
    return out


def fill_boxes(start, stop, nx, ny):
    # 2-D difference array: +1/-1 at rectangle corners, then prefix sums.
    diff = np.zeros((nx + 1, ny + 1), dtype=np.int64)
    keep = np.all(stop > start, axis=1)
    s, e = start[keep], stop[keep]
    np.add.at(diff, (s[:, 0], s[:, 1]), 1)
    np.add.at(diff, (e[:, 0], s[:, 1]), -1)
    np.add.at(diff, (s[:, 0], e[:, 1]), -1)
    np.add.at(diff, (e[:, 0], e[:, 1]), 1)
    cover = diff.cumsum(axis=0).cumsum(axis=1)
    return cover[:nx, :ny] > 0


def box_counts(mask, sizes):
    nx, ny = mask.shape
    counts = np.zeros(len(sizes), dtype=np.int64)
    for q, s in enumerate(sizes):
        s = int(s)
        px, py = -nx % s, -ny % s
        padded = np.pad(mask, ((0, px), (0, py)))
        blocks = padded.reshape(padded.shape[0] // s, s, padded.shape[1] // s, s)
        counts[q] = int(blocks.any(axis=(1, 3)).sum())
    return counts


def closure_violation(sorted_masks, chunk=256):
    m = sorted_masks.shape[0]
    cols = np.arange(m)
    for r0 in range(0, m, chunk):
        rows = np.arange(r0, min(m, r0 + chunk))
        upper = cols[None, :] > rows[:, None]
        left = sorted_masks[rows][:, None]
        bad_u = upper & ~_member(sorted_masks, left | sorted_masks[None, :])
        bad_i = upper & ~_member(sorted_masks, left & sorted_masks[None, :])
        bad = bad_u | bad_i
        if bad.any():
            flat = int(np.argmax(bad.ravel()))
            i, j = divmod(flat, m)
            return int(rows[i]), j, 1 if bad_u[i, j] else 2
    return -1, -1, 0


def _member(sorted_masks, values):
    pos = np.searchsorted(sorted_masks, values)
    pos = np.minimum(pos, sorted_masks.shape[0] - 1)
    return sorted_masks[pos] == values
