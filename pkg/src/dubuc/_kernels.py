"""Compiled inner loops shared by the distance measures."""

import numpy as np
from numba import njit

_JIT = {"cache": True, "nogil": True}


@njit(**_JIT)
def sliding_max(x, radius):
    """Running max over ``[t - radius, t + radius]`` clipped to the array, O(d)."""
    d = x.shape[0]
    out = np.empty(d, dtype=np.float64)
    # monotone deque of indices, values strictly decreasing front to back
    dq = np.empty(d, dtype=np.int64)
    head = 0
    tail = 0
    nxt = 0
    for t in range(d):
        hi = min(t + radius, d - 1)
        while nxt <= hi:
            v = x[nxt]
            while tail > head and x[dq[tail - 1]] <= v:
                tail -= 1
            dq[tail] = nxt
            tail += 1
            nxt += 1
        while dq[head] < t - radius:
            head += 1
        out[t] = x[dq[head]]
    return out


@njit(**_JIT)
def sliding_min(x, radius):
    d = x.shape[0]
    out = np.empty(d, dtype=np.float64)
    dq = np.empty(d, dtype=np.int64)
    head = 0
    tail = 0
    nxt = 0
    for t in range(d):
        hi = min(t + radius, d - 1)
        while nxt <= hi:
            v = x[nxt]
            while tail > head and x[dq[tail - 1]] >= v:
                tail -= 1
            dq[tail] = nxt
            tail += 1
            nxt += 1
        while dq[head] < t - radius:
            head += 1
        out[t] = x[dq[head]]
    return out


@njit(**_JIT)
def envelope_stack(x, radii):
    """Upper/lower bounds for each radius in ``radii`` (ascending).

    Each level is built from the previous one by dilating with the radius
    increment, so the total cost stays O(len(radii) * d).
    """
    k = radii.shape[0]
    d = x.shape[0]
    upper = np.empty((k, d), dtype=np.float64)
    lower = np.empty((k, d), dtype=np.float64)
    cur_u = x.copy()
    cur_l = x.copy()
    prev = 0
    for i in range(k):
        step = radii[i] - prev
        if step > 0:
            cur_u = sliding_max(cur_u, step)
            cur_l = sliding_min(cur_l, step)
        upper[i] = cur_u
        lower[i] = cur_l
        prev = radii[i]
    return upper, lower


@njit(**_JIT)
def overlap(ux, lx, uy, ly):
    inter = 0.0
    union = 0.0
    for t in range(ux.shape[0]):
        a = min(ux[t], uy[t]) - max(lx[t], ly[t])
        if a > 0.0:
            inter += a
        b = max(ux[t], uy[t]) - min(lx[t], ly[t])
        if b > 0.0:
            union += b
    return inter, union


@njit(**_JIT)
def ratio(inter, union):
    if union == 0.0:
        return 1.0
    return inter / union


@njit(**_JIT)
def ratio_matrix(ua, la, ub, lb, symmetric):
    """Intersection ratios between every row of (ua, la) and every row of (ub, lb)."""
    na = ua.shape[0]
    nb = ub.shape[0]
    out = np.empty((na, nb), dtype=np.float64)
    for i in range(na):
        j0 = i if symmetric else 0
        for j in range(j0, nb):
            inter, union = overlap(ua[i], la[i], ub[j], lb[j])
            out[i, j] = ratio(inter, union)
            if symmetric:
                out[j, i] = out[i, j]
    return out


@njit(**_JIT)
def sq_euclidean(x, y):
    acc = 0.0
    for t in range(x.shape[0]):
        diff = x[t] - y[t]
        acc += diff * diff
    return acc


@njit(**_JIT)
def dtw_banded(x, y, window, squared):
    """Accumulated DTW cost inside a Sakoe-Chiba band of half-width ``window``."""
    n = x.shape[0]
    m = y.shape[0]
    inf = np.inf
    prev = np.full(m, inf)
    cur = np.full(m, inf)
    for i in range(n):
        lo = max(0, i - window)
        hi = min(m - 1, i + window)
        for j in range(m):
            cur[j] = inf
        for j in range(lo, hi + 1):
            diff = x[i] - y[j]
            c = diff * diff if squared else abs(diff)
            if i == 0 and j == 0:
                cur[j] = c
                continue
            best = inf
            if i > 0:
                best = prev[j]
                if j > 0 and prev[j - 1] < best:
                    best = prev[j - 1]
            if j > 0 and cur[j - 1] < best:
                best = cur[j - 1]
            cur[j] = best + c
        prev, cur = cur, prev
    return prev[m - 1]


@njit(**_JIT)
def dtw_matrix(a, b, window, squared, symmetric):
    na = a.shape[0]
    nb = b.shape[0]
    out = np.empty((na, nb), dtype=np.float64)
    for i in range(na):
        j0 = i if symmetric else 0
        for j in range(j0, nb):
            v = dtw_banded(a[i], b[j], window, squared)
            out[i, j] = np.sqrt(v) if squared else v
            if symmetric:
                out[j, i] = out[i, j]
    return out


@njit(**_JIT)
def eud_matrix(a, b, symmetric):
    na = a.shape[0]
    nb = b.shape[0]
    out = np.empty((na, nb), dtype=np.float64)
    for i in range(na):
        j0 = i if symmetric else 0
        for j in range(j0, nb):
            out[i, j] = np.sqrt(sq_euclidean(a[i], b[j]))
            if symmetric:
                out[j, i] = out[i, j]
    return out
