"""Mesh input: a small OFF subset and an equivalent JSON form.

Both formats carry a vertex array and an optional face list.  When faces
are present the mesh adjacency comes from the face edges; otherwise it is
rebuilt from the hull edge graph (which also drops interior vertices,
since hill climbing requires every vertex to be extreme).
"""

import json
from pathlib import Path

import numpy as np

from . import hull
from .shapes import HILL_CLIMB_THRESHOLD, MeshHull, Polytope, Shape


def _adjacency_from_faces(n_vertices: int, faces) -> list:
    neighbors = [set() for _ in range(n_vertices)]
    for face in faces:
        k = len(face)
        if k < 2:
            raise ValueError("faces need at least two vertex indices")
        for a in range(k):
            i, j = int(face[a]), int(face[(a + 1) % k])
            if not (0 <= i < n_vertices and 0 <= j < n_vertices):
                raise ValueError("face index out of range")
            neighbors[i].add(j)
            neighbors[j].add(i)
    return [sorted(s) for s in neighbors]


def mesh_from_vertices(vertices, faces=None, hill_climb_threshold: int = HILL_CLIMB_THRESHOLD) -> Shape:
    """Build a support-ready shape from raw vertices.

    Small vertex sets become a :class:`Polytope` (exhaustive scan beats the
    climb below roughly ``hill_climb_threshold`` vertices); larger ones
    become a :class:`MeshHull`, reduced to hull vertices when no faces are
    given.
    """
    vertices = np.asarray(vertices, dtype=float)
    if faces is not None:
        if vertices.shape[0] <= hill_climb_threshold:
            return Polytope(vertices)
        return MeshHull(vertices, _adjacency_from_faces(vertices.shape[0], faces))
    if vertices.shape[0] <= hill_climb_threshold:
        return Polytope(vertices)
    keep = hull.extreme_indices(vertices)
    reduced = vertices[keep]
    if reduced.shape[0] <= hill_climb_threshold:
        return Polytope(reduced)
    return MeshHull(reduced, hull.hull_edge_adjacency(reduced))


def load_off(path) -> MeshHull:
    """Read an OFF file (header, counts, vertex lines, face lines)."""
    lines = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines or lines[0] != "OFF":
        raise ValueError(f"{path}: missing OFF header")
    n_vert, n_face, _ = (int(tok) for tok in lines[1].split()[:3])
    if len(lines) < 2 + n_vert + n_face:
        raise ValueError(f"{path}: truncated OFF file")
    vertices = np.array(
        [[float(tok) for tok in lines[2 + i].split()] for i in range(n_vert)]
    )
    faces = []
    for i in range(n_face):
        toks = lines[2 + n_vert + i].split()
        count = int(toks[0])
        faces.append([int(t) for t in toks[1 : 1 + count]])
    if faces:
        return MeshHull(vertices, _adjacency_from_faces(n_vert, faces))
    return MeshHull(vertices, hull.hull_edge_adjacency(vertices))


def load_mesh_json(path) -> MeshHull:
    """Read ``{"vertices": [[...], ...], "faces": [[...], ...]}``; faces optional."""
    data = json.loads(Path(path).read_text())
    vertices = np.asarray(data["vertices"], dtype=float)
    faces = data.get("faces")
    if faces:
        return MeshHull(vertices, _adjacency_from_faces(vertices.shape[0], faces))
    return MeshHull(vertices, hull.hull_edge_adjacency(vertices))
