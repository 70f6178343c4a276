"""Growth distance queries on pairs of convex shapes.

The mutual scaling factor at which two shapes first intersect is found by
shooting the ray ``beta * p`` through the translated Minkowski difference
set and refining polyhedral bounds on the exit value ``beta*``:

* an inner approximation (convex hull of support points collected so far)
  whose own ray value ``beta_lower`` comes from the simplex solver and
  never decreases, and
* a single-halfspace outer approximation giving ``beta_upper``, the best
  support ratio seen so far, which never increases.

Each iteration queries the support function along the dual vector of the
current optimal basis, updates both bounds, and stops when the relative
gap ``beta_upper/beta_lower - 1`` reaches the tolerance.  The growth
distance is ``1/beta_lower``; witness points on both bodies come from the
stored support-point pairs of the final basis, and the direction that
certifies ``beta_upper`` is returned as the optimal normal.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

from ._linalg import orthonormal_complement
from .errors import DegenerateCenters, InvalidInradius, SimplexError
from .minkowski import DifferencePair, support_diff
from .shapes import support_posed
from .simplex import Basis, VertexStore, basis_diagnostics, make_basis, simplex_solve


class Status(str, Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    CENTERS_COINCIDE = "centers_coincide"
    NUMERICAL_FAILURE = "numerical_failure"


class Verdict(str, Enum):
    COLLIDING = "colliding"
    SEPARATED = "separated"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class Config:
    """Solver parameters.

    ``eps_tol`` is the relative optimality gap at termination and
    ``k_max`` the iteration cap.  ``eps_init_frac`` sets the size of the
    initial inner simplex as a fraction of the combined inradius bound.
    ``inner_cap`` bounds the vertex store in dimensions above three (in 2D
    and 3D the store is pruned to the basis every iteration).

    ``normalize_direction`` rescales the support query direction to unit
    max-norm each iteration; the algorithm's decisions are scale invariant,
    so this only guards against extreme floating-point ranges.
    ``check_invariants`` enables per-iteration feasibility, duality, and
    monotonicity assertions plus the dual-route ratio-test cross-check.
    """

    eps_tol: float = 1.49e-8
    k_max: int = 100
    eps_init_frac: float = 1e-3
    inner_cap: int = 8
    normalize_direction: bool = True
    check_invariants: bool = False

    def __post_init__(self):
        if not self.eps_tol > 0.0:
            raise ValueError("eps_tol must be positive")
        if self.k_max < 1:
            raise ValueError("k_max must be at least 1")
        if not 0.0 < self.eps_init_frac < 1.0:
            raise ValueError("eps_init_frac must lie in (0, 1)")
        if self.inner_cap < 2:
            raise ValueError("inner_cap must be at least the dimension")


DEFAULT_CONFIG = Config()


@dataclass
class OuterState:
    """Best halfspace bound seen so far; empty means beta_upper == inf."""

    best_index: Optional[int] = None
    best_normal: Optional[np.ndarray] = None
    beta_upper: float = math.inf


class SolverState:
    """Single-owner state of one query between iterations."""

    __slots__ = (
        "pair",
        "config",
        "store",
        "basis",
        "outer",
        "lam",
        "k",
        "complement",
        "hint1",
        "hint2",
    )

    def __init__(self, pair, config, store, basis, outer, lam, complement):
        self.pair = pair
        self.config = config
        self.store = store
        self.basis = basis
        self.outer = outer
        self.lam = lam
        self.k = 0
        self.complement = complement
        self.hint1 = None
        self.hint2 = None

    @property
    def gap(self) -> float:
        return self.outer.beta_upper / self.basis.beta_lower - 1.0


@dataclass(frozen=True)
class WarmStartData:
    """Body-frame witness point pairs from a previous query on the same shapes."""

    pairs: Tuple[Tuple[np.ndarray, np.ndarray], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((np.asarray(a, float), np.asarray(b, float)) for a, b in self.pairs))


@dataclass(frozen=True)
class GrowthResult:
    """Outcome of a growth distance query.

    ``alpha`` is the mutual scaling factor at first intersection
    (``alpha <= 1`` means the bodies already overlap).  The witnesses are
    world-frame points, one per body, that the scaled bodies share, and
    ``normal`` is the direction certifying the upper bound.  ``gap`` is the
    final relative optimality gap; on ``NUMERICAL_FAILURE`` the result
    still carries the last feasible solution with its certified gap.
    """

    alpha: float
    witness1: np.ndarray
    witness2: np.ndarray
    normal: np.ndarray
    status: Status
    iterations: int
    gap: float
    warm_start: WarmStartData


@dataclass(frozen=True)
class CollisionResult:
    """Boolean collision verdict with a certificate.

    Colliding results carry a point contained in both bodies; separated
    results carry a hyperplane ``<normal, x> = offset`` with body 1 on the
    low side.  ``UNDECIDED`` is returned only when the iteration cap is
    reached with the bounds still straddling 1 (or on numerical breakdown).
    """

    verdict: Verdict
    iterations: int
    common_point: Optional[np.ndarray] = None
    plane_normal: Optional[np.ndarray] = None
    plane_offset: Optional[float] = None


def initialize(pair: DifferencePair, config: Config = DEFAULT_CONFIG) -> SolverState:
    """Build the starting state: an inner simplex of ``dim`` points inside
    the guaranteed ball around the origin, with ``p`` in its conic hull."""
    p = pair.p
    l = pair.dim
    p_norm = pair.p_norm
    if p_norm == 0.0:
        raise DegenerateCenters("world-frame centers coincide")
    if not pair.r_lb > 0.0:
        raise InvalidInradius("combined inradius bound must be positive")
    eps = config.eps_init_frac * pair.r_lb
    kmag = math.sqrt(pair.r_lb**2 - eps**2) * min(1.0, 1.0 / (l - 1))
    complement = orthonormal_complement(p)
    phat = p / p_norm
    shifted = kmag * complement + (eps * phat)[:, None]  # columns: seed points
    points = list(shifted.T)
    points.append(l * eps * phat - shifted.sum(axis=1))

    store = VertexStore()
    r1 = pair.center1.inradius_lb / pair.r_lb
    r2 = pair.center2.inradius_lb / pair.r_lb
    seeds = np.stack(points)
    # Decompose each interior point into witnesses inside the two inradius
    # balls, so the witness identity holds for the seed entries too.
    w1s = pair.world_center1 + r1 * seeds
    w2s = pair.world_center2 - r2 * seeds
    for j, m in enumerate(range(-l + 1, 1)):
        store.add(m, seeds[j], w1s[j], w2s[j])
    basis = Basis(
        indices=tuple(range(-l + 1, 1)),
        nu_star=np.full(l, p_norm / (l * eps)),
        beta_lower=eps / p_norm,
        normal=p / (eps * p_norm),
    )
    lam = p / float(np.abs(p).max()) if config.normalize_direction else basis.normal
    return SolverState(pair, config, store, basis, OuterState(), lam, complement)


def prune(store: VertexStore, basis: Basis, config: Config = DEFAULT_CONFIG) -> VertexStore:
    """Drop non-basis store entries: all of them in 2D/3D, the smallest
    indices beyond ``inner_cap`` above."""
    l = len(basis.indices)
    keep = set(basis.indices)
    if l <= 3:
        for m in store.indices():
            if m not in keep:
                store.remove(m)
        return store
    cap = max(config.inner_cap, l)
    extras = sorted(m for m in store.indices() if m not in keep)
    while len(store) > cap and extras:
        store.remove(extras.pop(0))
    return store


def iterate(state: SolverState) -> SolverState:
    """One bound-refinement step: support query along the current dual
    direction, outer-bound update, simplex re-optimization, pruning."""
    pair = state.pair
    config = state.config
    p = pair.p
    k = state.k + 1
    lam_dir = state.lam
    ev = support_diff(pair, lam_dir, state.hint1, state.hint2)
    state.hint1 = ev.hint1
    state.hint2 = ev.hint2
    lam_dot_p = float(lam_dir @ p)
    if lam_dot_p <= 0.0:
        raise SimplexError("query direction lost positivity against p")
    ratio = ev.value / lam_dot_p
    if not ratio > 0.0:
        raise SimplexError(
            "nonpositive support ratio; a scaling center likely lies outside its shape"
        )
    outer = state.outer
    if ratio < outer.beta_upper:
        outer.best_index = k
        outer.best_normal = lam_dir
        outer.beta_upper = ratio
    state.store.add(k, ev.point, ev.witness1, ev.witness2)
    state.basis = simplex_solve(
        state.store,
        state.basis,
        p,
        complement=state.complement,
        debug_check=config.check_invariants,
    )
    prune(state.store, state.basis, config)
    raw = state.basis.normal
    state.lam = raw / max(abs(v) for v in raw.tolist()) if config.normalize_direction else raw
    state.k = k
    if config.check_invariants:
        _assert_invariants(state)
    return state


def _assert_invariants(state: SolverState) -> None:
    diag = basis_diagnostics(state.store, state.basis, state.pair.p)
    if diag["feasibility_residual"] > 1e-8:
        raise AssertionError(f"primal feasibility residual {diag['feasibility_residual']:.3e}")
    if diag["dual_residual"] > 1e-9:
        raise AssertionError(f"dual residual {diag['dual_residual']:.3e}")
    if diag["normal_dot_p"] <= 0.0:
        raise AssertionError("dual vector lost positivity against p")
    lp = diag["normal_dot_p"]
    inv_beta = 1.0 / state.basis.beta_lower
    if abs(lp - inv_beta) > 1e-9 * max(abs(lp), abs(inv_beta)):
        raise AssertionError("<normal, p> does not match 1/beta_lower")
    if diag["scaled_det"] < 1e-14:
        raise AssertionError("basis became numerically singular")
    if state.basis.beta_lower > state.outer.beta_upper * (1.0 + 1e-12):
        raise AssertionError("lower bound exceeded upper bound")


def _witnesses(state: SolverState):
    basis = state.basis
    store = state.store
    coeffs = basis.beta_lower * basis.nu_star
    w1 = np.zeros(state.pair.dim)
    w2 = np.zeros(state.pair.dim)
    for c, m in zip(coeffs, basis.indices):
        entry = store[m]
        w1 += c * entry.witness1
        w2 += c * entry.witness2
    return w1, w2


def _warm_data(state: SolverState) -> WarmStartData:
    pose1 = state.pair.pose1
    pose2 = state.pair.pose2
    w1 = np.stack([state.store[m].witness1 for m in state.basis.indices])
    w2 = np.stack([state.store[m].witness2 for m in state.basis.indices])
    b1 = (w1 - pose1.translation) @ pose1.rotation
    b2 = (w2 - pose2.translation) @ pose2.rotation
    return WarmStartData(tuple(zip(b1, b2)))


def _result(state: SolverState, status: Status, gap: float) -> GrowthResult:
    w1, w2 = _witnesses(state)
    outer = state.outer
    normal = outer.best_normal if outer.best_normal is not None else state.lam
    return GrowthResult(
        alpha=1.0 / state.basis.beta_lower,
        witness1=w1,
        witness2=w2,
        normal=np.array(normal),
        status=status,
        iterations=state.k,
        gap=gap,
        warm_start=_warm_data(state),
    )


def inject_warm_start(state: SolverState, warm: WarmStartData, pair: Optional[DifferencePair] = None) -> SolverState:
    """Seed the inner approximation from re-posed witness pairs.

    Each stored body-frame pair is mapped through the current poses and
    appended to the store without any support-function call; the basis is
    then re-optimized by the usual simplex update.  Points that break the
    numerical solve are skipped one by one rather than aborting the query.
    """
    pair = state.pair if pair is None else pair
    if state.k != 0:
        raise ValueError("warm start must be injected before the first iteration")
    p = pair.p
    dim = pair.dim
    candidates = []
    next_m = min(state.store.indices()) - 1
    for b1, b2 in warm.pairs:
        if b1.shape != (dim,) or b2.shape != (dim,):
            continue
        w1 = pair.pose1.transform(b1)
        w2 = pair.pose2.transform(b2)
        z = w1 - w2 + p
        if not np.isfinite(z).all():
            continue
        candidates.append((next_m, z, w1, w2))
        next_m -= 1
    if not candidates:
        return state
    for m, z, w1, w2 in candidates:
        state.store.add(m, z, w1, w2)
    try:
        state.basis = simplex_solve(state.store, state.basis, p, complement=state.complement)
    except SimplexError:
        for m, *_ in candidates:
            if m in state.store:
                state.store.remove(m)
        for m, z, w1, w2 in candidates:
            state.store.add(m, z, w1, w2)
            try:
                state.basis = simplex_solve(state.store, state.basis, p, complement=state.complement)
            except SimplexError:
                state.store.remove(m)
    prune(state.store, state.basis, state.config)
    raw = state.basis.normal
    state.lam = raw / float(np.abs(raw).max()) if state.config.normalize_direction else raw
    if state.config.check_invariants:
        _assert_invariants(state)
    return state


def _coincident_result(pair: DifferencePair) -> GrowthResult:
    warm = WarmStartData(((pair.center1.center, pair.center2.center),))
    return GrowthResult(
        alpha=0.0,
        witness1=pair.world_center1.copy(),
        witness2=pair.world_center2.copy(),
        normal=np.zeros(pair.dim),
        status=Status.CENTERS_COINCIDE,
        iterations=0,
        gap=0.0,
        warm_start=warm,
    )


def growth_distance(
    pair: DifferencePair,
    config: Config = DEFAULT_CONFIG,
    warm: Optional[WarmStartData] = None,
    on_iteration: Optional[Callable[[int, float, float, float], None]] = None,
) -> GrowthResult:
    """Compute the growth distance between the two bodies of ``pair``.

    Runs until the relative gap reaches ``config.eps_tol`` or ``k_max``
    iterations.  ``on_iteration(k, beta_lower, beta_upper, gap)`` is called
    after every iteration when supplied.  Coincident world centers yield
    ``alpha = 0`` immediately.
    """
    if pair.p_norm == 0.0:
        return _coincident_result(pair)
    state = initialize(pair, config)
    if warm is not None and warm.pairs:
        try:
            inject_warm_start(state, warm, pair)
        except SimplexError:
            pass
    status = Status.MAX_ITERATIONS
    gap = math.inf
    try:
        while state.k < config.k_max:
            iterate(state)
            gap = state.gap
            if on_iteration is not None:
                on_iteration(state.k, state.basis.beta_lower, state.outer.beta_upper, gap)
            if gap <= config.eps_tol:
                status = Status.CONVERGED
                break
    except SimplexError:
        status = Status.NUMERICAL_FAILURE
        gap = state.gap
    return _result(state, status, gap)


def _colliding_result(state: SolverState) -> CollisionResult:
    alpha = 1.0 / state.basis.beta_lower
    w1, _ = _witnesses(state)
    common = alpha * w1 + (1.0 - alpha) * state.pair.world_center1
    return CollisionResult(Verdict.COLLIDING, state.k, common_point=common)


def _separated_result(state: SolverState) -> CollisionResult:
    pair = state.pair
    lam = np.array(state.outer.best_normal)
    s1 = support_posed(pair.shape1, pair.pose1, lam).value
    s2 = support_posed(pair.shape2, pair.pose2, -lam).value
    # Midway between the two bodies' extents along the certified normal.
    offset = 0.5 * (s1 - s2)
    return CollisionResult(Verdict.SEPARATED, state.k, plane_normal=lam, plane_offset=offset)


def collide(
    pair: DifferencePair,
    config: Config = DEFAULT_CONFIG,
    warm: Optional[WarmStartData] = None,
) -> CollisionResult:
    """Boolean collision query with early termination and certificates.

    Returns ``COLLIDING`` as soon as the lower ray bound reaches 1 (the
    bodies, shrunk by the witnessed factor, share a point) and
    ``SEPARATED`` as soon as the upper bound drops below 1 (the tracked
    normal separates the bodies).  Only configurations whose growth
    distance sits within the tolerance band around 1 can exhaust the
    iteration cap and come back ``UNDECIDED``.
    """
    if pair.p_norm == 0.0:
        return CollisionResult(Verdict.COLLIDING, 0, common_point=pair.world_center1.copy())
    state = initialize(pair, config)
    if warm is not None and warm.pairs:
        try:
            inject_warm_start(state, warm, pair)
        except SimplexError:
            pass
    if state.basis.beta_lower >= 1.0:
        return _colliding_result(state)
    while state.k < config.k_max:
        try:
            iterate(state)
        except SimplexError:
            return CollisionResult(Verdict.UNDECIDED, state.k)
        if state.basis.beta_lower >= 1.0:
            return _colliding_result(state)
        if state.outer.beta_upper < 1.0:
            return _separated_result(state)
    return CollisionResult(Verdict.UNDECIDED, state.k)


def primal_infeasibility(pair: DifferencePair, result: GrowthResult) -> float:
    """Norm of the scaled-intersection constraint residual at the witnesses."""
    if result.status is Status.CENTERS_COINCIDE:
        return 0.0
    a = result.alpha
    x1 = a * (result.witness1 - pair.world_center1) + pair.world_center1
    x2 = a * (result.witness2 - pair.world_center2) + pair.world_center2
    return float(np.linalg.norm(x1 - x2))
