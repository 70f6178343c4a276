"""Convex shape primitives and support-function evaluation.

Every shape is defined in its own body frame and exposes ``support``,
returning the farthest point along a query direction together with the
attained inner product.  Rigid placement is handled by :func:`support_posed`
so that all solver-side vectors stay in world frame.

Shapes, poses, and center specs are immutable after construction and safe
to share between concurrent queries.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import DisconnectedAdjacency, MissingInradius, ZeroDirection

# Vertex count above which hull factories prefer hill climbing over an
# exhaustive scan (see mesh_from_vertices in meshio).
HILL_CLIMB_THRESHOLD = 50

_CYLINDER_LATERAL_EPS = 1e-12


class SupportEval(NamedTuple):
    value: float
    point: np.ndarray


class HillClimbEval(NamedTuple):
    value: float
    point: np.ndarray
    index: int
    visits: int


def _as_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise ValueError("vector has non-finite components")
    return v


def _check_direction(direction: np.ndarray) -> None:
    if not direction.any():
        raise ZeroDirection("support direction must be nonzero")


@dataclass(frozen=True)
class Pose:
    """Rigid placement: x_world = rotation @ x_body + translation."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=float)
        t = _as_vector(self.translation)
        if r.shape != (t.size, t.size):
            raise ValueError("rotation/translation dimension mismatch")
        if np.abs(r.T @ r - np.eye(t.size)).max() > 1e-12:
            raise ValueError("rotation is not orthogonal within 1e-12")
        if abs(np.linalg.det(r) - 1.0) > 1e-12:
            raise ValueError("rotation determinant is not +1 within 1e-12")
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", t)
        object.__setattr__(self, "_rotation_t", np.ascontiguousarray(r.T))

    @property
    def dim(self) -> int:
        return self.translation.size

    @classmethod
    def identity(cls, dim: int) -> "Pose":
        return cls(np.eye(dim), np.zeros(dim))

    def transform(self, x: np.ndarray) -> np.ndarray:
        return self.rotation @ x + self.translation

    def rotate(self, v: np.ndarray) -> np.ndarray:
        return self.rotation @ v

    def inverse_transform(self, x: np.ndarray) -> np.ndarray:
        return self._rotation_t @ (x - self.translation)


@dataclass(frozen=True)
class CenterSpec:
    """Body-frame scaling center with a lower bound on the inradius there."""

    center: np.ndarray
    inradius_lb: float

    def __post_init__(self):
        object.__setattr__(self, "center", _as_vector(self.center))
        if not (self.inradius_lb >= 0.0):
            raise ValueError("inradius_lb must be nonnegative")


class Shape:
    """Base class; subclasses implement the body-frame ``_support`` kernel."""

    #: Spatial dimension, or None when the shape works in any dimension.
    dim: Optional[int] = None

    def support(self, direction) -> SupportEval:
        """Support value and an attaining point along ``direction``."""
        direction = _as_vector(direction)
        _check_direction(direction)
        return self._support(direction)

    def _support(self, direction: np.ndarray) -> SupportEval:
        raise NotImplementedError


class Sphere(Shape):
    def __init__(self, radius: float):
        if not radius > 0.0:
            raise ValueError("radius must be positive")
        self.radius = float(radius)

    def _support(self, direction):
        point = (self.radius / math.sqrt(float(direction @ direction))) * direction
        return SupportEval(float(direction @ point), point)

    def __repr__(self):
        return f"Sphere(radius={self.radius!r})"


class Ellipsoid(Shape):
    def __init__(self, semi_axes):
        a = _as_vector(semi_axes)
        if not (a > 0.0).all():
            raise ValueError("semi-axes must be positive")
        self.semi_axes = a
        self.dim = a.size

    def _support(self, direction):
        w = self.semi_axes * direction
        point = self.semi_axes * w / math.sqrt(float(w @ w))
        return SupportEval(float(direction @ point), point)

    def __repr__(self):
        return f"Ellipsoid(semi_axes={self.semi_axes.tolist()!r})"


class Capsule(Shape):
    """Segment of half-length along the last axis, inflated by a radius."""

    def __init__(self, half_length: float, radius: float):
        if half_length < 0.0:
            raise ValueError("half_length must be nonnegative")
        if not radius > 0.0:
            raise ValueError("radius must be positive")
        self.half_length = float(half_length)
        self.radius = float(radius)

    def _support(self, direction):
        point = (self.radius / math.sqrt(float(direction @ direction))) * direction
        point[-1] += self.half_length if direction[-1] >= 0.0 else -self.half_length
        return SupportEval(float(direction @ point), point)

    def __repr__(self):
        return f"Capsule(half_length={self.half_length!r}, radius={self.radius!r})"


class Cylinder(Shape):
    """Disk cross-section extruded along the last axis."""

    def __init__(self, half_height: float, radius: float):
        if not half_height > 0.0:
            raise ValueError("half_height must be positive")
        if not radius > 0.0:
            raise ValueError("radius must be positive")
        self.half_height = float(half_height)
        self.radius = float(radius)

    def _support(self, direction):
        point = np.zeros_like(direction)
        lateral = direction[:-1]
        n = math.sqrt(float(lateral @ lateral))
        # Below the lateral threshold any cap point is optimal; use the center.
        if n > _CYLINDER_LATERAL_EPS:
            point[:-1] = (self.radius / n) * lateral
        point[-1] = self.half_height if direction[-1] >= 0.0 else -self.half_height
        return SupportEval(float(direction @ point), point)

    def __repr__(self):
        return f"Cylinder(half_height={self.half_height!r}, radius={self.radius!r})"


class Box(Shape):
    def __init__(self, half_extents):
        h = _as_vector(half_extents)
        if not (h > 0.0).all():
            raise ValueError("half-extents must be positive")
        self.half_extents = h
        self.dim = h.size

    def _support(self, direction):
        point = np.where(direction >= 0.0, self.half_extents, -self.half_extents)
        return SupportEval(float(direction @ point), point)

    def __repr__(self):
        return f"Box(half_extents={self.half_extents.tolist()!r})"


class Polytope(Shape):
    """Convex hull of an explicit vertex list; support by exhaustive scan.

    Ties in the scan resolve to the lowest vertex index, which keeps all
    downstream results reproducible.
    """

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] < 1:
            raise ValueError("vertices must be a nonempty (N, dim) array")
        if not np.isfinite(v).all():
            raise ValueError("vertices have non-finite components")
        self.vertices = v
        self.dim = v.shape[1]

    def _support(self, direction):
        dots = self.vertices @ direction
        i = int(np.argmax(dots))
        return SupportEval(float(dots[i]), self.vertices[i])

    def __repr__(self):
        return f"Polytope(<{self.vertices.shape[0]} vertices, dim {self.dim}>)"


class MeshHull(Shape):
    """Large vertex hull with per-vertex neighbor lists for hill climbing.

    The vertices are expected to be in convex position and the adjacency to
    be the symmetric edge graph of their hull; both are caller contracts
    (checkable with :func:`growthdist.oracle.mesh_is_extreme`).
    """

    def __init__(self, vertices, adjacency: Sequence[Sequence[int]]):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] < 1:
            raise ValueError("vertices must be a nonempty (N, dim) array")
        if len(adjacency) != v.shape[0]:
            raise ValueError("adjacency length must match the vertex count")
        self.vertices = v
        self.adjacency = [np.asarray(nbrs, dtype=np.intp) for nbrs in adjacency]
        self.dim = v.shape[1]

    def _support(self, direction):
        value, point, _, _ = _climb(self, direction, 0)
        return SupportEval(value, point)

    def __repr__(self):
        return f"MeshHull(<{self.vertices.shape[0]} vertices, dim {self.dim}>)"


def support(shape: Shape, direction) -> SupportEval:
    """Support value and an attaining point of ``shape`` along ``direction``."""
    return shape.support(direction)


def support_posed(shape: Shape, pose: Pose, direction) -> SupportEval:
    """Support of the rigidly placed shape, evaluated in world frame."""
    direction = _as_vector(direction)
    _check_direction(direction)
    body = shape._support(pose._rotation_t @ direction)
    value = body.value + float(direction @ pose.translation)
    return SupportEval(value, pose.rotation @ body.point + pose.translation)


def _support_posed_hint(shape: Shape, pose: Pose, direction: np.ndarray, hint):
    """World-frame support that threads a hill-climbing hint for meshes.

    Skips input validation; callers guarantee a finite nonzero direction.
    """
    body_dir = pose._rotation_t @ direction
    if isinstance(shape, MeshHull):
        value, point, hint, _ = _climb(shape, body_dir, 0 if hint is None else hint)
    else:
        value, point = shape._support(body_dir)
    value += float(direction @ pose.translation)
    return value, pose.rotation @ point + pose.translation, hint


def _climb(mesh: MeshHull, direction: np.ndarray, start: int):
    verts = mesh.vertices
    adj = mesh.adjacency
    i = start
    best = float(verts[i] @ direction)
    visits = 1
    moved = True
    while moved:
        moved = False
        for j in adj[i]:
            val = float(verts[j] @ direction)
            visits += 1
            if val > best:
                best = val
                i = int(j)
                moved = True
    return best, verts[i], i, visits


def hill_climb_support(mesh: MeshHull, direction, start_hint: int = 0, *, debug: bool = False) -> HillClimbEval:
    """Greedy walk over the hull edge graph to the support vertex.

    On a connected edge graph of vertices in convex position a strict local
    maximum of the linear objective is global, so the climb returns the same
    value as an exhaustive scan while visiting far fewer vertices.  The
    attained index is returned for reuse as the next call's hint.

    With ``debug=True`` the result is checked against the exhaustive scan
    and a stalled climb raises :class:`DisconnectedAdjacency`.
    """
    direction = _as_vector(direction)
    _check_direction(direction)
    if not 0 <= int(start_hint) < mesh.vertices.shape[0]:
        raise ValueError("start hint out of range")
    best, point, i, visits = _climb(mesh, direction, int(start_hint))
    if debug:
        exhaustive = float((mesh.vertices @ direction).max())
        if best < exhaustive - 1e-12 * max(1.0, abs(exhaustive)):
            raise DisconnectedAdjacency(
                f"hill climb reached {best!r} but the exhaustive maximum is {exhaustive!r}"
            )
    return HillClimbEval(best, point, i, visits)


def inradius_bound(shape: Shape, center) -> float:
    """Positive lower bound on the inradius at the canonical centroid.

    Only primitive shapes have closed forms; polytope-family shapes must
    carry a caller-supplied bound in their :class:`CenterSpec`.
    """
    if isinstance(shape, Sphere):
        return shape.radius
    if isinstance(shape, Box):
        return float(shape.half_extents.min())
    if isinstance(shape, Ellipsoid):
        return float(shape.semi_axes.min())
    if isinstance(shape, Capsule):
        return shape.radius
    if isinstance(shape, Cylinder):
        return min(shape.radius, shape.half_height)
    raise MissingInradius(
        f"no closed-form inradius for {type(shape).__name__}; supply one via CenterSpec"
    )


def center_at_origin(shape: Shape, dim: int = 3) -> CenterSpec:
    """CenterSpec at the canonical centroid of a primitive shape.

    ``dim`` applies only to shapes without an intrinsic dimension
    (spheres, capsules, cylinders).
    """
    d = shape.dim if shape.dim is not None else dim
    return CenterSpec(np.zeros(d), inradius_bound(shape, np.zeros(d)))


def sample_directions(dim: int, n: int, seed: int = 0) -> np.ndarray:
    """Deterministic unit directions: uniform angles in 2D, a Fibonacci
    spiral in 3D, seeded Gaussians above."""
    if n < 1:
        raise ValueError("need at least one direction")
    if dim == 2:
        ang = 2.0 * np.pi * np.arange(n) / n
        return np.column_stack([np.cos(ang), np.sin(ang)])
    if dim == 3:
        i = np.arange(n) + 0.5
        z = 1.0 - 2.0 * i / n
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        theta = np.pi * (3.0 - np.sqrt(5.0)) * i
        return np.column_stack([r * np.cos(theta), r * np.sin(theta), z])
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((n, dim))
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def rotation_2d(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def random_rotation(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Uniformly random rotation matrix (Shoemake quaternions in 3D)."""
    if dim == 2:
        return rotation_2d(rng.uniform(0.0, 2.0 * np.pi))
    if dim == 3:
        u1, u2, u3 = rng.uniform(size=3)
        q = np.array(
            [
                math.sqrt(1.0 - u1) * math.sin(2.0 * math.pi * u2),
                math.sqrt(1.0 - u1) * math.cos(2.0 * math.pi * u2),
                math.sqrt(u1) * math.sin(2.0 * math.pi * u3),
                math.sqrt(u1) * math.cos(2.0 * math.pi * u3),
            ]
        )
        x, y, z, w = q
        return np.array(
            [
                [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
                [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
                [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
            ]
        )
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    q *= np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
