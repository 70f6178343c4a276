"""Convex hull helpers built on Qhull (scipy.spatial).

Used for hull edge adjacency when mesh faces are absent, for centroid
inradius bounds of vertex shapes, and for extreme-point validation.
"""

import numpy as np
from scipy.spatial import ConvexHull

from .shapes import CenterSpec


def convex_hull(points: np.ndarray) -> ConvexHull:
    return ConvexHull(np.asarray(points, dtype=float))


def extreme_indices(points) -> np.ndarray:
    """Indices of the points that are vertices of the convex hull, sorted."""
    return np.sort(convex_hull(points).vertices)


def hull_edge_adjacency(vertices) -> list:
    """Symmetric neighbor lists over the hull edge graph of ``vertices``.

    All input points must be hull vertices (interior points would end up
    with empty neighbor lists and break hill climbing).
    """
    vertices = np.asarray(vertices, dtype=float)
    hull = convex_hull(vertices)
    n = vertices.shape[0]
    neighbors = [set() for _ in range(n)]
    for simplex in hull.simplices:
        k = len(simplex)
        for a in range(k):
            for b in range(a + 1, k):
                i, j = int(simplex[a]), int(simplex[b])
                neighbors[i].add(j)
                neighbors[j].add(i)
    return [sorted(s) for s in neighbors]


def inradius_at(vertices, point) -> float:
    """Exact inradius of the hull of ``vertices`` at an interior ``point``.

    Qhull facet normals are unit length, so the smallest signed facet
    distance is the radius of the largest inscribed ball centered there.
    Nonpositive values mean the point is on or outside the hull.
    """
    hull = convex_hull(vertices)
    point = np.asarray(point, dtype=float)
    return float(-(hull.equations[:, :-1] @ point + hull.equations[:, -1]).max())


def polytope_center(vertices) -> CenterSpec:
    """CenterSpec at the vertex centroid with its exact hull inradius."""
    vertices = np.asarray(vertices, dtype=float)
    centroid = vertices.mean(axis=0)
    r = inradius_at(vertices, centroid)
    if r <= 0.0:
        raise ValueError("vertex centroid is not strictly inside the hull")
    return CenterSpec(centroid, r)
