"""Small 2-D computational geometry kit for utility regions.

Polygons are (M, 2) float arrays of counter-clockwise vertices with
collinear points dropped; degenerate hulls (a segment or a point) are
returned with 2 or 1 rows and handled by the other routines.
"""

from __future__ import annotations

import numpy as np


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> np.ndarray:
    """Monotone-chain convex hull; strictly extreme vertices only, CCW."""
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if pts.shape[0] <= 2:
        return pts
    lower: list[np.ndarray] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[np.ndarray] = []
    for p in pts[::-1]:
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = np.array(lower[:-1] + upper[:-1])
    if hull.shape[0] == 2 and np.allclose(hull[0], hull[1]):
        return hull[:1]
    return hull


def minkowski_sum(poly_a, poly_b) -> np.ndarray:
    """Minkowski sum of two convex polygons (brute-force pair sums + hull).

    Vertex counts here are tiny, so the O(|A| |B|) pair enumeration is
    simpler than the rotating edge merge and just as exact.
    """
    a = np.asarray(poly_a, dtype=float).reshape(-1, 2)
    b = np.asarray(poly_b, dtype=float).reshape(-1, 2)
    sums = (a[:, None, :] + b[None, :, :]).reshape(-1, 2)
    return convex_hull(sums)


def weighted_minkowski_sum(polys, weights) -> np.ndarray:
    """Hull of sum_j w_j P_j for convex polygons P_j and weights w_j."""
    polys = list(polys)
    weights = np.asarray(weights, dtype=float)
    if len(polys) != weights.size or not polys:
        raise ValueError("need one weight per polygon")
    acc = np.asarray(polys[0], dtype=float) * weights[0]
    for poly, w in zip(polys[1:], weights[1:]):
        acc = minkowski_sum(acc, np.asarray(poly, dtype=float) * w)
    return convex_hull(acc)


def clip_to_lower_bounds(poly, bounds) -> np.ndarray:
    """Intersect a convex polygon with {x >= bounds[0]} and {y >= bounds[1]}."""
    verts = np.asarray(poly, dtype=float).reshape(-1, 2)
    for dim, bound in enumerate(bounds):
        if verts.shape[0] == 0:
            return verts
        clipped: list[np.ndarray] = []
        m = verts.shape[0]
        for j in range(m):
            cur, nxt = verts[j], verts[(j + 1) % m]
            cur_in = cur[dim] >= bound
            nxt_in = nxt[dim] >= bound
            if cur_in:
                clipped.append(cur)
            if cur_in != nxt_in and m > 1:
                span = nxt[dim] - cur[dim]
                if span != 0:
                    frac = (bound - cur[dim]) / span
                    clipped.append(cur + frac * (nxt - cur))
        verts = convex_hull(clipped) if clipped else np.empty((0, 2))
    return verts


def point_in_convex_polygon(point, poly, tol: float = 1e-9) -> bool:
    """Membership test allowing ``tol`` of slack outside each edge."""
    p = np.asarray(point, dtype=float)
    verts = np.asarray(poly, dtype=float).reshape(-1, 2)
    if verts.shape[0] == 0:
        return False
    if verts.shape[0] == 1:
        return bool(np.all(np.abs(p - verts[0]) <= tol))
    if verts.shape[0] == 2:
        d = verts[1] - verts[0]
        t = np.dot(p - verts[0], d) / np.dot(d, d)
        t = min(max(t, 0.0), 1.0)
        return bool(np.linalg.norm(p - (verts[0] + t * d)) <= tol)
    m = verts.shape[0]
    scale = max(1.0, float(np.abs(verts).max()))
    for j in range(m):
        edge = verts[(j + 1) % m] - verts[j]
        norm = np.linalg.norm(edge)
        if _cross(verts[j], verts[(j + 1) % m], p) < -tol * scale * max(norm, 1.0):
            return False
    return True
