"""Exact integer predicates for straight-line drawings.

Everything here works on integer coordinates only; no floating point is
involved, so orientation and intersection tests are exact.
"""

from __future__ import annotations

from functools import cmp_to_key
from itertools import combinations

import numpy as np


def orient(p, q, r) -> int:
    """Sign of the cross product (q - p) x (r - p): +1 ccw, -1 cw, 0 collinear."""
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (d > 0) - (d < 0)


def segments_cross(p1, p2, q1, q2) -> bool:
    """Proper crossing of two segments with four distinct endpoints in general position."""
    return (orient(p1, p2, q1) * orient(p1, p2, q2) < 0
            and orient(q1, q2, p1) * orient(q1, q2, p2) < 0)


def in_triangle(a, b, c, d) -> bool:
    """Whether d lies strictly inside triangle abc (general position assumed)."""
    o1, o2, o3 = orient(a, b, d), orient(b, c, d), orient(c, a, d)
    return o1 == o2 == o3


def check_general_position(points) -> None:
    """Raise ValueError on duplicate points or collinear triples."""
    pts = [tuple(int(x) for x in p) for p in points]
    if len(set(pts)) != len(pts):
        raise ValueError("duplicate point")
    n = len(pts)
    if n < 3:
        return
    if n <= 60:
        for p, q, r in combinations(pts, 3):
            if orient(p, q, r) == 0:
                raise ValueError(f"collinear triple {p}, {q}, {r}")
        return
    # vectorized for larger inputs; int64 is exact for |coords| < 2**30
    arr = np.asarray(pts, dtype=np.int64)
    if np.abs(arr).max() >= 2**30:
        raise ValueError("coordinates too large for the exact vectorized test")
    for i in range(n - 2):
        d = arr[i + 1:] - arr[i]
        cross = np.outer(d[:, 0], d[:, 1]) - np.outer(d[:, 1], d[:, 0])
        iu = np.triu_indices(len(d), k=1)
        if np.any(cross[iu] == 0):
            raise ValueError(f"collinear triple involving point {pts[i]}")


def _angular_key(center):
    cx, cy = center

    def half(p):
        dx, dy = p[0] - cx, p[1] - cy
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    def cmp(p, q):
        hp, hq = half(p), half(q)
        if hp != hq:
            return hp - hq
        return -orient(center, p, q)

    return cmp_to_key(cmp)


def angular_order(points, v: int) -> list[int]:
    """Indices of all points other than v, sorted counterclockwise around points[v]."""
    center = points[v]
    others = [i for i in range(len(points)) if i != v]
    key = _angular_key(center)
    return sorted(others, key=lambda i: key(points[i]))


def segment_crossings(points) -> set:
    """All crossing pairs of independent segments, labels 1-based, as frozensets of edges."""
    n = len(points)
    out = set()
    for a, b, c, d in combinations(range(n), 4):
        for (p, q), (r, s) in (((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))):
            if segments_cross(points[p], points[q], points[r], points[s]):
                out.add(frozenset({(p + 1, q + 1), (r + 1, s + 1)}))
    return out


def random_points(n: int, rng=None, bound: int = 10**6) -> list[tuple[int, int]]:
    """n random integer points in general position."""
    rng = np.random.default_rng(rng)
    while True:
        arr = rng.integers(-bound, bound, size=(n, 2))
        pts = [(int(x), int(y)) for x, y in arr]
        try:
            check_general_position(pts)
        except ValueError:
            continue
        return pts


def convex_position(n: int, radius: int = 10**6) -> list[tuple[int, int]]:
    """n integer points in convex position, labelled counterclockwise.

    Points on the parabola y = x^2 are in convex position; ordered by x they
    run counterclockwise along the lower hull.
    """
    return [(i, i * i) for i in range(n)]
