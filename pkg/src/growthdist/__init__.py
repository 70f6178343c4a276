"""Growth distance between convex shapes from their support functions.

The growth distance of two bodies with chosen interior centers is the
mutual scaling factor at which they first intersect: values at or below 1
mean collision, larger values mean separation.  The solver works for any
convex shape exposing a support function (primitives, polytopes, vertex
meshes) and returns certified witness points and normals, supports warm
starting across small rigid displacements, and offers an early-exit
boolean collision query.

Basic use::

    import numpy as np
    from growthdist import (Sphere, Pose, center_at_origin,
                            DifferencePair, growth_distance)

    a = Sphere(1.0)
    pair = DifferencePair(
        a, Pose.identity(3), center_at_origin(a),
        a, Pose(np.eye(3), np.array([4.0, 0.0, 0.0])), center_at_origin(a),
    )
    result = growth_distance(pair)   # result.alpha == 2.0
"""

from .errors import (
    CycleLimit,
    DegenerateCenters,
    DisconnectedAdjacency,
    GrowthDistanceError,
    InvalidInradius,
    MissingInradius,
    NoFeasibleBasis,
    NoPositivePivot,
    SimplexError,
    SingularBasis,
    ZeroDirection,
)
from .meshio import load_mesh_json, load_off, mesh_from_vertices
from .minkowski import DifferencePair, DiffSupportEval, contains_origin_ball_check, support_diff
from .shapes import (
    Box,
    Capsule,
    CenterSpec,
    Cylinder,
    Ellipsoid,
    MeshHull,
    Polytope,
    Pose,
    Shape,
    Sphere,
    SupportEval,
    center_at_origin,
    hill_climb_support,
    inradius_bound,
    random_rotation,
    rotation_2d,
    sample_directions,
    support,
    support_posed,
)
from .solver import (
    CollisionResult,
    Config,
    GrowthResult,
    Status,
    Verdict,
    WarmStartData,
    collide,
    growth_distance,
    initialize,
    inject_warm_start,
    iterate,
    primal_infeasibility,
    prune,
)

__all__ = [
    "Box",
    "Capsule",
    "CenterSpec",
    "CollisionResult",
    "Config",
    "CycleLimit",
    "DegenerateCenters",
    "DifferencePair",
    "DiffSupportEval",
    "DisconnectedAdjacency",
    "Ellipsoid",
    "GrowthDistanceError",
    "GrowthResult",
    "InvalidInradius",
    "MeshHull",
    "MissingInradius",
    "NoFeasibleBasis",
    "NoPositivePivot",
    "Polytope",
    "Pose",
    "Shape",
    "SimplexError",
    "SingularBasis",
    "Sphere",
    "Status",
    "SupportEval",
    "Verdict",
    "WarmStartData",
    "ZeroDirection",
    "center_at_origin",
    "collide",
    "contains_origin_ball_check",
    "growth_distance",
    "hill_climb_support",
    "initialize",
    "inject_warm_start",
    "inradius_bound",
    "iterate",
    "load_mesh_json",
    "load_off",
    "mesh_from_vertices",
    "primal_infeasibility",
    "prune",
    "random_rotation",
    "rotation_2d",
    "sample_directions",
    "support",
    "support_diff",
    "support_posed",
]

__version__ = "0.1.0"
