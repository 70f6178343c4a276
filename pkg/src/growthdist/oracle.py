"""Independent brute-force references for verifying the solver.

Three routes that share no code with the iterative solver: a closed form
for balls, exhaustive basis enumeration of the conic program for small
polytope pairs, and a generic LP (HiGHS via scipy) over explicit
difference points.  On top of these, a direction sampler brackets the ray
value for arbitrary support oracles.
"""

import itertools
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import linprog

from .errors import NoFeasibleBasis
from .hull import convex_hull
from .minkowski import DifferencePair, support_diff
from .shapes import sample_directions

#: Desk-scale cap on the vertex-difference count for exhaustive enumeration.
BRUTE_FORCE_MAX_POINTS = 400

_FEAS_TOL = 1e-9
_CHUNK = 200_000


class Bracket(NamedTuple):
    beta_lo: float
    beta_hi: float


def sphere_growth_distance(r1: float, r2: float, center_distance: float) -> float:
    """Closed form for two balls: the difference set is a ball of radius
    r1 + r2 at the origin, so the scaling factor is distance / (r1 + r2)."""
    if not (r1 > 0.0 and r2 > 0.0):
        raise ValueError("radii must be positive")
    if center_distance < 0.0:
        raise ValueError("center distance must be nonnegative")
    return center_distance / (r1 + r2)


def _difference_points(verts1, verts2, p1, p2):
    verts1 = np.asarray(verts1, dtype=float)
    verts2 = np.asarray(verts2, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    p = p2 - p1
    diffs = (verts1[:, None, :] - verts2[None, :, :]).reshape(-1, p.size) + p
    return diffs, p


def _batched_cramer(mats: np.ndarray, b: np.ndarray):
    """Solve the stacked systems mats @ x = b by Cramer's rule (l <= 3),
    returning (solutions, determinants); singular members give det 0."""
    l = mats.shape[1]
    if l == 2:
        det = mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            x0 = (b[0] * mats[:, 1, 1] - b[1] * mats[:, 0, 1]) / det
            x1 = (mats[:, 0, 0] * b[1] - mats[:, 1, 0] * b[0]) / det
        return np.stack([x0, x1], axis=1), det

    def det3(m):
        return (
            m[:, 0, 0] * (m[:, 1, 1] * m[:, 2, 2] - m[:, 1, 2] * m[:, 2, 1])
            - m[:, 0, 1] * (m[:, 1, 0] * m[:, 2, 2] - m[:, 1, 2] * m[:, 2, 0])
            + m[:, 0, 2] * (m[:, 1, 0] * m[:, 2, 1] - m[:, 1, 1] * m[:, 2, 0])
        )

    det = det3(mats)
    cols = []
    for i in range(3):
        replaced = mats.copy()
        replaced[:, :, i] = b
        cols.append(det3(replaced))
    with np.errstate(divide="ignore", invalid="ignore"):
        x = np.stack(cols, axis=1) / det[:, None]
    return x, det


def polytope_growth_distance_bruteforce(verts1, verts2, p1, p2) -> float:
    """Growth distance of two world-frame polytopes by exhaustive basis
    enumeration of the conic program over all vertex differences.

    Every l-subset of difference points is tried as a candidate basis; the
    feasible ones (nonnegative conic coefficients reproducing p) compete on
    their coefficient sum, whose minimum is the growth distance.  Exact up
    to linear-solve roundoff, and deliberately free of any pivoting logic.
    """
    diffs, p = _difference_points(verts1, verts2, p1, p2)
    l = p.size
    n = diffs.shape[0]
    if n > BRUTE_FORCE_MAX_POINTS:
        raise ValueError(
            f"{n} difference points exceed the desk-scale cap {BRUTE_FORCE_MAX_POINTS}"
        )
    p_norm = float(np.linalg.norm(p))
    if p_norm == 0.0:
        return 0.0
    scale = float(np.abs(diffs).max())
    if scale == 0.0:
        raise NoFeasibleBasis("all difference points are zero")
    dn = diffs / scale
    pn = p / scale

    combos = np.array(list(itertools.combinations(range(n), l)), dtype=np.intp)
    best = np.inf
    for start in range(0, combos.shape[0], _CHUNK):
        idx = combos[start : start + _CHUNK]
        mats = dn[idx].transpose(0, 2, 1)  # columns are candidate basis points
        if l <= 3:
            nu, det = _batched_cramer(mats, pn)
            valid = np.abs(det) > 1e-12
        else:
            nu = np.full((idx.shape[0], l), np.nan)
            valid = np.zeros(idx.shape[0], dtype=bool)
            for i in range(idx.shape[0]):
                try:
                    nu[i] = np.linalg.solve(mats[i], pn)
                    valid[i] = True
                except np.linalg.LinAlgError:
                    pass
        with np.errstate(invalid="ignore"):
            tol = _FEAS_TOL * (1.0 + np.abs(nu).max(axis=1))
            feas = valid & (nu >= -tol[:, None]).all(axis=1)
        if feas.any():
            best = min(best, float(nu[feas].sum(axis=1).min()))
    if not np.isfinite(best):
        raise NoFeasibleBasis("no l-subset spans p with nonnegative coefficients")
    return best


def _ray_lp(points: np.ndarray, p: np.ndarray) -> Optional[float]:
    """Largest beta with beta*p inside the convex hull of ``points``,
    via HiGHS on the expanded form (variables: hull weights and beta)."""
    n, l = points.shape
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_eq = np.zeros((l + 1, n + 1))
    a_eq[:l, :n] = points.T
    a_eq[:l, n] = -p
    a_eq[l, :n] = 1.0
    b_eq = np.zeros(l + 1)
    b_eq[l] = 1.0
    res = linprog(c, A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * (n + 1), method="highs")
    if not res.success:
        return None
    return float(res.x[-1])


def polytope_growth_distance_lp(verts1, verts2, p1, p2) -> float:
    """Growth distance of two world-frame polytopes via a generic LP over
    all vertex differences.  Independent of both the solver and the
    enumeration oracle; scales to large vertex counts."""
    diffs, p = _difference_points(verts1, verts2, p1, p2)
    if float(np.linalg.norm(p)) == 0.0:
        return 0.0
    beta = _ray_lp(diffs, p)
    if beta is None or beta <= 0.0:
        raise NoFeasibleBasis("ray LP infeasible; is p1 inside the first hull?")
    return 1.0 / beta


def bracket_by_sampling(pair: DifferencePair, directions: int) -> Bracket:
    """Bracket the ray value of a difference pair by direction sampling.

    Each sampled support halfspace bounds the value from above; the hull of
    the sampled support points bounds it from below (through the same LP
    form used by the polytope oracle).  The bracket tightens as the sample
    grows but is valid at any size.
    """
    l = pair.dim
    if directions < l + 1:
        raise ValueError("need at least dim + 1 directions")
    p = pair.p
    p_norm = pair.p_norm
    dirs = sample_directions(l, directions)
    points = np.empty((directions, l))
    beta_hi = np.inf
    for i, d in enumerate(dirs):
        ev = support_diff(pair, d)
        points[i] = ev.point
        dp = float(d @ p)
        if dp > 1e-12 * p_norm:
            beta_hi = min(beta_hi, ev.value / dp)
    beta = _ray_lp(points, p)
    beta_lo = beta if beta is not None and beta > 0.0 else 0.0
    # Both are valid bounds; a tiny LP-accuracy inversion is clamped away.
    return Bracket(min(beta_lo, beta_hi), beta_hi)


def mesh_is_extreme(vertices) -> bool:
    """True when every vertex is an extreme point of the vertex hull."""
    vertices = np.asarray(vertices, dtype=float)
    return convex_hull(vertices).vertices.size == vertices.shape[0]
