"""Warm-startable simplex solver for the conic-combination program.

The subproblem at every outer iteration is the standard-form LP

    minimize   sum(nu_m)
    subject to sum(nu_m * z_m) = p,   nu >= 0,

whose optimal basis is a set of ``l`` linearly independent stored points
whose conic hull contains ``p``.  The reciprocal of the optimal cost is the
inner-approximation ray bound, and the dual vector ``lambda = Z^-T 1`` of
the optimal basis drives the next support query.

Pivoting keeps the previous optimal basis as the warm start, selects the
incoming column by most negative reduced cost (Bland's smallest-index rule
is engaged only after a run of degenerate pivots), and performs the ratio
test on barycentric coordinates computed by a signed-volume scheme in the
subspace orthogonal to ``p``, which stays reliable when the basis matrix
is ill conditioned.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from . import _linalg
from .errors import CycleLimit, NoPositivePivot, SingularBasis

#: |det| threshold on the column-normalized basis matrix.
SCALED_DET_MIN = 1e-14

#: A reduced cost above this is treated as nonnegative (optimal).
REDUCED_COST_TOL = 1e-12

#: Ratio-test positivity threshold for the incoming coordinates.
PIVOT_EPS = 1e-12

#: Consecutive degenerate pivots before Bland's rule engages.
_BLAND_AFTER = 2

#: Hard pivot cap per solve, as a multiple of the dimension.
_PIVOT_CAP = 100


class StoreEntry(NamedTuple):
    z: np.ndarray
    witness1: np.ndarray
    witness2: np.ndarray


class VertexStore:
    """Candidate support points of the difference set, keyed by iteration index."""

    __slots__ = ("_entries",)

    def __init__(self):
        self._entries = {}

    def add(self, index: int, z, witness1, witness2):
        if index in self._entries:
            raise ValueError(f"store index {index} already present")
        self._entries[index] = StoreEntry(z, witness1, witness2)

    def remove(self, index: int):
        del self._entries[index]

    def __getitem__(self, index: int) -> StoreEntry:
        return self._entries[index]

    def __contains__(self, index: int) -> bool:
        return index in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def indices(self):
        return list(self._entries)

    def items(self):
        return self._entries.items()


@dataclass(frozen=True)
class Basis:
    """An l-column feasible basis with its conic coefficients and dual vector.

    ``normal`` is unnormalized: ``<normal, z_m> = 1`` for every basis column,
    hence ``<normal, p> = 1/beta_lower``.
    """

    indices: Tuple[int, ...]
    nu_star: np.ndarray
    beta_lower: float
    normal: np.ndarray


def columns(store: VertexStore, indices) -> np.ndarray:
    return np.column_stack([store[m].z for m in indices])


def normal_from_basis(z_cols: np.ndarray) -> np.ndarray:
    """Dual vector of a basis matrix: the lambda with <lambda, z_m> = 1.

    Raises :class:`SingularBasis` when the column-normalized determinant
    falls below ``SCALED_DET_MIN``.
    """
    if _linalg.abs_det_scaled(z_cols) < SCALED_DET_MIN:
        raise SingularBasis("basis columns are numerically dependent")
    return _linalg.solve(z_cols.T, np.ones(z_cols.shape[0]))


def reduced_cost(normal: np.ndarray, z: np.ndarray) -> float:
    """Reduced cost of a candidate column: ``1 - <normal, z>``."""
    return 1.0 - float(normal @ z)


def ratio_test(nu_star, nu_tilde) -> int:
    """Outgoing basis position: argmin of nu_star/nu_tilde over nu_tilde > 0.

    Invariant under common positive scaling of either argument (components
    at or below ``PIVOT_EPS`` never qualify as pivots).
    """
    best_pos = -1
    best = np.inf
    for i in range(len(nu_tilde)):
        t = nu_tilde[i]
        if t > PIVOT_EPS:
            r = nu_star[i] / t
            if r < best:
                best = r
                best_pos = i
    if best_pos < 0:
        raise NoPositivePivot("no positive coordinate for the incoming column")
    return best_pos


def _ratio_test_bland(nu_star, nu_tilde, indices) -> int:
    """Ratio test with ties broken toward the smallest basis index."""
    best = np.inf
    for i in range(len(nu_tilde)):
        if nu_tilde[i] > PIVOT_EPS:
            best = min(best, nu_star[i] / nu_tilde[i])
    if not np.isfinite(best):
        raise NoPositivePivot("no positive coordinate for the incoming column")
    tol = 1e-12 * (1.0 + abs(best))
    pos = -1
    for i in range(len(nu_tilde)):
        if nu_tilde[i] > PIVOT_EPS and nu_star[i] / nu_tilde[i] <= best + tol:
            if pos < 0 or indices[i] < indices[pos]:
                pos = i
    return pos


def robust_coefficients(
    z_cols: np.ndarray,
    z_k: np.ndarray,
    p: np.ndarray,
    normal: Optional[np.ndarray] = None,
    complement: Optional[np.ndarray] = None,
):
    """Barycentric-form conic coefficients for the ratio test.

    Returns positive scalings of ``Z^-1 z_k`` and ``Z^-1 p``, each summing
    to one.  Instead of solving with the possibly ill-conditioned ``Z``,
    the basis points, the candidate, and ``p`` are projected onto the
    subspace orthogonal to ``p``; there the coefficients become the affine
    barycentric coordinates of the projected candidate (centrally projected
    onto the basis' affine hull) and of the origin, and are evaluated as
    ratios of signed volumes.  Projecting out the common component along
    ``p`` removes the dominant cancellation from the subdeterminants.

    Falls back to plainly solved coefficients when the candidate lies on
    the wrong side of the basis hyperplane (not reachable from a feasible
    pivot); the fallback is normalized only where its sum is positive.
    """
    l = p.size
    if normal is None:
        normal = normal_from_basis(z_cols)
    c = float(normal @ z_k)
    if c <= PIVOT_EPS:
        nu_tilde = _linalg.solve(z_cols, z_k)
        nu_star = _linalg.solve(z_cols, p)
        s_star = nu_star.sum()
        if s_star > 0.0:
            nu_star = nu_star / s_star
        return nu_tilde, nu_star
    if complement is None:
        complement = _linalg.orthonormal_complement(p)
    proj = complement.T @ z_cols  # (l-1, l) projected basis points
    if l == 3:
        (u0, u1, u2), (v0, v1, v2) = proj.tolist()
        qv = complement.T @ z_k
        q0 = float(qv[0]) / c
        q1 = float(qv[1]) / c
        denom = u0 * (v1 - v2) - u1 * (v0 - v2) + u2 * (v0 - v1)
        if denom == 0.0:
            raise SingularBasis("projected basis simplex is degenerate")
        t0 = (q0 * (v1 - v2) - u1 * (q1 - v2) + u2 * (q1 - v1)) / denom
        t1 = (u0 * (q1 - v2) - q0 * (v0 - v2) + u2 * (v0 - q1)) / denom
        t2 = (u0 * (v1 - q1) - u1 * (v0 - q1) + q0 * (v0 - v1)) / denom
        s0 = (u1 * v2 - u2 * v1) / denom
        s1 = (u2 * v0 - u0 * v2) / denom
        s2 = (u0 * v1 - u1 * v0) / denom
        st = t0 + t1 + t2
        if st > 0.0:
            t0, t1, t2 = t0 / st, t1 / st, t2 / st
        ss = s0 + s1 + s2
        if ss > 0.0:
            s0, s1, s2 = s0 / ss, s1 / ss, s2 / ss
        return np.array([t0, t1, t2]), np.array([s0, s1, s2])
    if l == 2:
        y0, y1 = proj[0].tolist()
        q = float(complement.T @ z_k) / c
        denom = y0 - y1
        if denom == 0.0:
            raise SingularBasis("projected basis simplex is degenerate")
        t0, t1 = (q - y1) / denom, (y0 - q) / denom
        s0, s1 = -y1 / denom, y0 / denom
        st = t0 + t1
        if st > 0.0:
            t0, t1 = t0 / st, t1 / st
        ss = s0 + s1
        if ss > 0.0:
            s0, s1 = s0 / ss, s1 / ss
        return np.array([t0, t1]), np.array([s0, s1])
    aug = np.empty((l, l))
    aug[: l - 1] = proj
    aug[l - 1] = 1.0
    denom = _linalg.det(aug)
    if denom == 0.0:
        raise SingularBasis("projected basis simplex is degenerate")
    q = np.empty(l)
    q[: l - 1] = (complement.T @ z_k) / c
    q[l - 1] = 1.0
    origin = np.zeros(l)
    origin[l - 1] = 1.0
    mu_tilde = np.empty(l)
    mu_star = np.empty(l)
    work = aug.copy()
    for m in range(l):
        saved = aug[:, m].copy()
        work[:, m] = q
        mu_tilde[m] = _linalg.det(work) / denom
        work[:, m] = origin
        mu_star[m] = _linalg.det(work) / denom
        work[:, m] = saved
    s = mu_tilde.sum()
    if s > 0.0:
        mu_tilde /= s
    s = mu_star.sum()
    if s > 0.0:
        mu_star /= s
    return mu_tilde, mu_star


def make_basis(store: VertexStore, indices, p: np.ndarray) -> Basis:
    """Assemble a Basis from store indices, solving for its coefficients."""
    indices = tuple(indices)
    normal, nu, scaled = _linalg.basis_solves([store[m].z for m in indices], p)
    if normal is None or scaled < SCALED_DET_MIN:
        raise SingularBasis("basis columns are numerically dependent")
    vals = nu.tolist()
    total = sum(vals)
    if not total > 0.0 or total != total:
        raise SingularBasis("basis has nonpositive objective; not a feasible warm start")
    if min(vals) < -1e-6 * max(1.0, max(abs(v) for v in vals)):
        raise SingularBasis("basis lost primal feasibility")
    return Basis(indices, nu, 1.0 / total, normal)


def basis_diagnostics(store: VertexStore, basis: Basis, p: np.ndarray) -> dict:
    """Residuals of the basis invariants, for tests and debug assertions."""
    z_cols = columns(store, basis.indices)
    feas = z_cols @ basis.nu_star - p
    dual = z_cols.T @ basis.normal - 1.0
    return {
        "feasibility_residual": float(np.linalg.norm(feas)),
        "dual_residual": float(np.abs(dual).max()),
        "normal_dot_p": float(basis.normal @ p),
        "nu_min": float(basis.nu_star.min()),
        "scaled_det": _linalg.abs_det_scaled(z_cols),
    }


def simplex_solve(
    store: VertexStore,
    initial_basis: Basis,
    p: np.ndarray,
    complement: Optional[np.ndarray] = None,
    debug_check: bool = False,
) -> Basis:
    """Re-optimize the conic LP over the whole store from a feasible basis.

    The objective never increases across accepted pivots (a pivot whose
    recomputed cost would exceed the current one, which can only happen
    through floating-point noise at a degenerate vertex, is rejected and
    the current basis returned).  Revisiting a basis terminates the solve
    the same way, so noise cannot cycle.

    With ``debug_check=True`` every pivot cross-checks the signed-volume
    ratio test against the plain ``Z^-1`` route while the basis condition
    number stays below 1e8.
    """
    basis = initial_basis
    l = p.size
    visited = {basis.indices}
    pivots = 0
    degenerate_run = 0
    bland = False
    while True:
        lam = basis.normal
        m_in = None
        best_d = -REDUCED_COST_TOL
        if bland:
            for m in sorted(store.indices()):
                if m in basis.indices:
                    continue
                if 1.0 - float(lam @ store[m].z) < -REDUCED_COST_TOL:
                    m_in = m
                    break
        else:
            for m, entry in store.items():
                if m in basis.indices:
                    continue
                d = 1.0 - float(lam @ entry.z)
                if d < best_d:
                    best_d = d
                    m_in = m
        if m_in is None:
            return basis
        z_cols = np.empty((l, l))
        for j, m in enumerate(basis.indices):
            z_cols[:, j] = store[m].z
        z_in = store[m_in].z
        mu_tilde, mu_star = robust_coefficients(z_cols, z_in, p, normal=lam, complement=complement)
        if debug_check and np.linalg.cond(z_cols) < 1e8:
            plain_s = _linalg.solve(z_cols, p)
            plain_t = _linalg.solve(z_cols, z_in)
            plain_pos = ratio_test(plain_s, plain_t)
            robust_pos = ratio_test(mu_star, mu_tilde)
            if plain_pos != robust_pos:
                # Exact ties may resolve differently between routes; any
                # position attaining the minimal ratio is equivalent.
                best = plain_s[plain_pos] / plain_t[plain_pos]
                alt = plain_s[robust_pos] / plain_t[robust_pos] if plain_t[robust_pos] > PIVOT_EPS else np.inf
                assert abs(alt - best) <= 1e-6 * (1.0 + abs(best)), (
                    "signed-volume ratio test diverged from plain route"
                )
        if bland:
            pos = _ratio_test_bland(mu_star, mu_tilde, basis.indices)
        else:
            pos = ratio_test(mu_star, mu_tilde)
        degenerate = mu_star[pos] <= PIVOT_EPS * max(1.0, mu_tilde[pos])
        new_indices = list(basis.indices)
        new_indices[pos] = m_in
        key = tuple(new_indices)
        if key in visited:
            return basis
        candidate = make_basis(store, key, p)
        # A pivot can only fail to improve through floating-point noise at
        # a degenerate vertex; a strictly worse one is rejected outright,
        # which keeps the objective (and the lower bound) exactly monotone.
        if candidate.beta_lower < basis.beta_lower:
            return basis
        visited.add(key)
        basis = candidate
        pivots += 1
        degenerate_run = degenerate_run + 1 if degenerate else 0
        if degenerate_run >= _BLAND_AFTER * l:
            bland = True
        if pivots > _PIVOT_CAP * l:
            raise CycleLimit(f"exceeded {_PIVOT_CAP * l} pivots")
