"""The translated Minkowski difference of two posed shapes.

For bodies with world-frame scaling centers w1 and w2, the set
``C = C1 - C2 + {p}`` with ``p = w2 - w1`` turns the growth query into a
ray intersection problem: the sought scaling equals ``1/beta`` where
``beta`` is the largest value with ``beta * p`` inside C.  This module
exposes C purely through its support function.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import ZeroDirection
from .shapes import CenterSpec, Pose, Shape, _support_posed_hint, sample_directions


class DiffSupportEval(NamedTuple):
    value: float
    point: np.ndarray
    witness1: np.ndarray
    witness2: np.ndarray
    hint1: Optional[int]
    hint2: Optional[int]


@dataclass(frozen=True)
class DifferencePair:
    """Two posed shapes with centers, assembled into the difference set.

    The relative center ``p`` and the inradius bound ``r_lb`` are derived at
    construction and stay fixed for the lifetime of the pair; moving a body
    means building a new pair (or reusing witnesses via warm start).
    """

    shape1: Shape
    pose1: Pose
    center1: CenterSpec
    shape2: Shape
    pose2: Pose
    center2: CenterSpec
    p: np.ndarray = field(init=False)
    r_lb: float = field(init=False)
    world_center1: np.ndarray = field(init=False)
    world_center2: np.ndarray = field(init=False)
    dim: int = field(init=False)

    def __post_init__(self):
        dim = self.pose1.dim
        for name, d in (
            ("pose2", self.pose2.dim),
            ("center1", self.center1.center.size),
            ("center2", self.center2.center.size),
            ("shape1", self.shape1.dim),
            ("shape2", self.shape2.dim),
        ):
            if d is not None and d != dim:
                raise ValueError(f"{name} dimension {d} does not match pose1 dimension {dim}")
        if not self.center1.inradius_lb > 0.0:
            raise ValueError("the first body needs a strictly positive inradius bound")
        w1 = self.pose1.transform(self.center1.center)
        w2 = self.pose2.transform(self.center2.center)
        object.__setattr__(self, "world_center1", w1)
        object.__setattr__(self, "world_center2", w2)
        object.__setattr__(self, "p", w2 - w1)
        object.__setattr__(self, "r_lb", self.center1.inradius_lb + self.center2.inradius_lb)
        object.__setattr__(self, "dim", dim)

    @property
    def p_norm(self) -> float:
        return math.sqrt(float(self.p @ self.p))


def support_diff(pair: DifferencePair, direction, hint1=None, hint2=None) -> DiffSupportEval:
    """Support of the difference set, with the world-frame witness points.

    The returned ``point`` equals ``witness1 - witness2 + p`` by the same
    arithmetic that produced it.  Mesh shapes accept hill-climbing hints and
    report the attained vertex indices back for the next call.
    """
    direction = np.asarray(direction, dtype=float)
    if not direction.any():
        raise ZeroDirection("support direction must be nonzero")
    v1, w1, h1 = _support_posed_hint(pair.shape1, pair.pose1, direction, hint1)
    v2, w2, h2 = _support_posed_hint(pair.shape2, pair.pose2, -direction, hint2)
    value = v1 + v2 + float(direction @ pair.p)
    return DiffSupportEval(value, w1 - w2 + pair.p, w1, w2, h1, h2)


def contains_origin_ball_check(pair: DifferencePair, samples: int, tol: float = 1e-12) -> bool:
    """Sampled necessary condition for ``B_r_lb(0)`` within the difference set.

    Checks ``support >= r_lb - tol`` along deterministic unit directions;
    used by tests and debug assertions, not by the solver itself.
    """
    if samples < 1:
        raise ValueError("need at least one sample direction")
    for direction in sample_directions(pair.dim, samples):
        if support_diff(pair, direction).value < pair.r_lb - tol:
            return False
    return True
