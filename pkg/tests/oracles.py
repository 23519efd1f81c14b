"""Slow, obviously-correct reference implementations used as test oracles."""

import itertools
import math

import numpy as np

from emoframe.dominance import Outcome, pareto_compare


def peel_fronts(points, space):
    left = list(range(len(points)))
    fronts = []
    while left:
        layer = [i for i in left
                 if not any(pareto_compare(points[j], points[i], space) is Outcome.DOMINATES for j in left)]
        fronts.append(sorted(layer))
        left = [i for i in left if i not in layer]
    return fronts


def naive_crowding(points):
    """Textbook crowding on one front; duplicates share the value of their first copy."""
    uniq = []
    for p in points:
        if p not in uniq:
            uniq.append(p)
    m = len(uniq)
    if m <= 2:
        return [math.inf] * len(points)
    dist = [0.0] * m
    n_obj = len(uniq[0])
    for j in range(n_obj):
        # ties in objective j broken by the following objectives, cyclically
        key = lambda i: tuple(uniq[i][(j + s) % n_obj] for s in range(n_obj))
        order = sorted(range(m), key=key)
        lo, hi = uniq[order[0]][j], uniq[order[-1]][j]
        dist[order[0]] = dist[order[-1]] = math.inf
        for a in range(1, m - 1):
            if hi > lo:
                dist[order[a]] += (uniq[order[a + 1]][j] - uniq[order[a - 1]][j]) / (hi - lo)
    return [dist[uniq.index(p)] for p in points]


def depth_crowding_keys(points, space):
    """(fitness, diversity) of every point under dominance depth + crowding."""
    keys = [None] * len(points)
    for k, front in enumerate(peel_fronts(points, space)):
        for i, d in zip(front, naive_crowding([points[i] for i in front])):
            keys[i] = (-float(k), d)
    return keys


def iterative_survivors(points, space, n):
    """Indices kept by deleting the worst point and rescoring, until ``n`` remain."""
    alive = list(range(len(points)))
    while len(alive) > n:
        keys = depth_crowding_keys([points[i] for i in alive], space)
        worst = min(range(len(alive)), key=lambda a: (keys[a][0], keys[a][1], -a))
        del alive[worst]
    return alive


def brute_nondominated(points, space):
    """Deduplicated nondominated subset, in first-seen order."""
    out = []
    for p in points:
        if p in out:
            continue
        if any(pareto_compare(q, p, space) is Outcome.DOMINATES for q in points):
            continue
        out.append(p)
    return out


def grid_hypervolume_2d(points, ref):
    """Inclusion-exclusion over all subsets; exact for small fronts."""
    total = 0.0
    pts = [tuple(p) for p in points]
    for r in range(1, len(pts) + 1):
        for subset in itertools.combinations(pts, r):
            corner = np.max(np.array(subset), axis=0)
            vol = float(np.prod(np.clip(np.asarray(ref) - corner, 0, None)))
            total += (-1) ** (r + 1) * vol
    return total
