"""Slow, obviously-correct reference implementations used only by the tests."""

import math


def naive_envelope(x, radius):
    d = len(x)
    upper, lower = [], []
    for t in range(d):
        window = [x[s] for s in range(d) if abs(t - s) <= radius]
        upper.append(max(window))
        lower.append(min(window))
    return upper, lower


def naive_intersection_union(x, y, radius):
    ux, lx = naive_envelope(x, radius)
    uy, ly = naive_envelope(y, radius)
    inter = sum(max(min(a, b) - max(c, e), 0.0) for a, b, c, e in zip(ux, uy, lx, ly))
    union = sum(max(max(a, b) - min(c, e), 0.0) for a, b, c, e in zip(ux, uy, lx, ly))
    return inter, union


def naive_mds(x, y, scales):
    ratios = []
    for e in scales:
        inter, union = naive_intersection_union(x, y, e)
        ratios.append(1.0 if union == 0 else inter / union)
    if len(ratios) == 1:
        return ratios[0]
    area = sum((ratios[i - 1] + ratios[i]) / 2 for i in range(1, len(ratios)))
    return area / (len(ratios) - 1)


def naive_eud(x, y):
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(x, y)))


def naive_1nn(train_x, train_y, query, dist):
    best, label = math.inf, None
    for s, lab in zip(train_x, train_y):
        v = dist(query, s)
        if v < best:
            best, label = v, lab
    return label
