"""Dense kernels for the tiny linear systems at the core of the solver.

Bases in 2D and 3D are solved with explicit cofactor formulas followed by
one step of iterative refinement, which keeps residuals near machine
precision even when the basis matrix is ill conditioned.  The hot paths
unpack matrices into plain floats once (Python float arithmetic beats
element-wise numpy at this size); larger systems fall back to LAPACK.
"""

import math

import numpy as np

from .errors import SingularBasis


def det(a: np.ndarray) -> float:
    n = a.shape[0]
    if n == 2:
        (m00, m01), (m10, m11) = a.tolist()
        return m00 * m11 - m01 * m10
    if n == 3:
        (m00, m01, m02), (m10, m11, m12), (m20, m21, m22) = a.tolist()
        return (
            m00 * (m11 * m22 - m12 * m21)
            - m01 * (m10 * m22 - m12 * m20)
            + m02 * (m10 * m21 - m11 * m20)
        )
    return float(np.linalg.det(a))


def abs_det_scaled(a: np.ndarray) -> float:
    """|det| after normalizing every column to unit length.

    Scale-free singularity measure: 1.0 for orthogonal columns, 0.0 for
    linearly dependent ones.
    """
    norms = np.sqrt((a * a).sum(axis=0))
    if not norms.all():
        return 0.0
    return abs(det(a / norms))


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve the square system a @ x = b with one refinement step."""
    n = a.shape[0]
    if n == 2:
        (m00, m01), (m10, m11) = a.tolist()
        b0, b1 = b.tolist()
        d = m00 * m11 - m01 * m10
        if d == 0.0:
            raise SingularBasis("zero determinant in basis solve")
        x0 = (b0 * m11 - b1 * m01) / d
        x1 = (m00 * b1 - m10 * b0) / d
        r0 = b0 - (m00 * x0 + m01 * x1)
        r1 = b1 - (m10 * x0 + m11 * x1)
        x0 += (r0 * m11 - r1 * m01) / d
        x1 += (m00 * r1 - m10 * r0) / d
        return np.array([x0, x1])
    if n == 3:
        return _solve3(a, b)
    try:
        x = np.linalg.solve(a, b)
        x += np.linalg.solve(a, b - a @ x)
    except np.linalg.LinAlgError as exc:
        raise SingularBasis(str(exc)) from exc
    return x


def _solve3(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    (m00, m01, m02), (m10, m11, m12), (m20, m21, m22) = a.tolist()
    b0, b1, b2 = b.tolist()
    c00 = m11 * m22 - m12 * m21
    c01 = m12 * m20 - m10 * m22
    c02 = m10 * m21 - m11 * m20
    c10 = m02 * m21 - m01 * m22
    c11 = m00 * m22 - m02 * m20
    c12 = m01 * m20 - m00 * m21
    c20 = m01 * m12 - m02 * m11
    c21 = m02 * m10 - m00 * m12
    c22 = m00 * m11 - m01 * m10
    d = m00 * c00 + m01 * c01 + m02 * c02
    if d == 0.0:
        raise SingularBasis("zero determinant in basis solve")
    x0 = (c00 * b0 + c10 * b1 + c20 * b2) / d
    x1 = (c01 * b0 + c11 * b1 + c21 * b2) / d
    x2 = (c02 * b0 + c12 * b1 + c22 * b2) / d
    r0 = b0 - (m00 * x0 + m01 * x1 + m02 * x2)
    r1 = b1 - (m10 * x0 + m11 * x1 + m12 * x2)
    r2 = b2 - (m20 * x0 + m21 * x1 + m22 * x2)
    x0 += (c00 * r0 + c10 * r1 + c20 * r2) / d
    x1 += (c01 * r0 + c11 * r1 + c21 * r2) / d
    x2 += (c02 * r0 + c12 * r1 + c22 * r2) / d
    return np.array([x0, x1, x2])


def basis_solves(z_columns, p: np.ndarray):
    """Fused per-basis solves: ``(normal, nu, scaled_abs_det)``.

    ``z_columns`` is a sequence of the basis column vectors.  ``normal``
    solves ``Z^T normal = 1`` and ``nu`` solves ``Z nu = p``, both refined
    once; the scaled determinant measures singularity.  One cofactor
    evaluation serves everything.
    """
    l = p.size
    if l == 3:
        m00, m10, m20 = z_columns[0].tolist()
        m01, m11, m21 = z_columns[1].tolist()
        m02, m12, m22 = z_columns[2].tolist()
        p0, p1, p2 = p.tolist()
        c00 = m11 * m22 - m12 * m21
        c01 = m12 * m20 - m10 * m22
        c02 = m10 * m21 - m11 * m20
        c10 = m02 * m21 - m01 * m22
        c11 = m00 * m22 - m02 * m20
        c12 = m01 * m20 - m00 * m21
        c20 = m01 * m12 - m02 * m11
        c21 = m02 * m10 - m00 * m12
        c22 = m00 * m11 - m01 * m10
        d = m00 * c00 + m01 * c01 + m02 * c02
        n0 = math.sqrt(m00 * m00 + m10 * m10 + m20 * m20)
        n1 = math.sqrt(m01 * m01 + m11 * m11 + m21 * m21)
        n2 = math.sqrt(m02 * m02 + m12 * m12 + m22 * m22)
        prod = n0 * n1 * n2
        scaled = abs(d) / prod if prod > 0.0 else 0.0
        if d == 0.0:
            return None, None, scaled
        # nu = Z^-1 p (adjugate route), then one refinement pass
        x0 = (c00 * p0 + c10 * p1 + c20 * p2) / d
        x1 = (c01 * p0 + c11 * p1 + c21 * p2) / d
        x2 = (c02 * p0 + c12 * p1 + c22 * p2) / d
        r0 = p0 - (m00 * x0 + m01 * x1 + m02 * x2)
        r1 = p1 - (m10 * x0 + m11 * x1 + m12 * x2)
        r2 = p2 - (m20 * x0 + m21 * x1 + m22 * x2)
        x0 += (c00 * r0 + c10 * r1 + c20 * r2) / d
        x1 += (c01 * r0 + c11 * r1 + c21 * r2) / d
        x2 += (c02 * r0 + c12 * r1 + c22 * r2) / d
        # normal = Z^-T 1: row sums of the cofactor matrix
        y0 = (c00 + c01 + c02) / d
        y1 = (c10 + c11 + c12) / d
        y2 = (c20 + c21 + c22) / d
        s0 = 1.0 - (m00 * y0 + m10 * y1 + m20 * y2)
        s1 = 1.0 - (m01 * y0 + m11 * y1 + m21 * y2)
        s2 = 1.0 - (m02 * y0 + m12 * y1 + m22 * y2)
        y0 += (c00 * s0 + c01 * s1 + c02 * s2) / d
        y1 += (c10 * s0 + c11 * s1 + c12 * s2) / d
        y2 += (c20 * s0 + c21 * s1 + c22 * s2) / d
        return np.array([y0, y1, y2]), np.array([x0, x1, x2]), scaled
    if l == 2:
        m00, m10 = z_columns[0].tolist()
        m01, m11 = z_columns[1].tolist()
        p0, p1 = p.tolist()
        d = m00 * m11 - m01 * m10
        n0 = math.sqrt(m00 * m00 + m10 * m10)
        n1 = math.sqrt(m01 * m01 + m11 * m11)
        prod = n0 * n1
        scaled = abs(d) / prod if prod > 0.0 else 0.0
        if d == 0.0:
            return None, None, scaled
        x0 = (p0 * m11 - p1 * m01) / d
        x1 = (m00 * p1 - m10 * p0) / d
        r0 = p0 - (m00 * x0 + m01 * x1)
        r1 = p1 - (m10 * x0 + m11 * x1)
        x0 += (r0 * m11 - r1 * m01) / d
        x1 += (m00 * r1 - m10 * r0) / d
        y0 = (m11 - m10) / d
        y1 = (m00 - m01) / d
        s0 = 1.0 - (m00 * y0 + m10 * y1)
        s1 = 1.0 - (m01 * y0 + m11 * y1)
        y0 += (s0 * m11 - s1 * m10) / d
        y1 += (m00 * s1 - m01 * s0) / d
        return np.array([y0, y1]), np.array([x0, x1]), scaled
    z_cols = np.column_stack(z_columns)
    scaled = abs_det_scaled(z_cols)
    if scaled == 0.0:
        return None, None, 0.0
    normal = solve(z_cols.T, np.ones(l))
    nu = solve(z_cols, p)
    return normal, nu, scaled


def orthonormal_complement(p: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the subspace orthogonal to p, as columns.

    2D uses the quarter-turn perpendicular, 3D a cross-product pair seeded
    by the coordinate axis least aligned with p, and higher dimensions the
    complement columns of a Householder reflector.
    """
    l = p.size
    nrm = math.sqrt(float(p @ p))
    if nrm == 0.0:
        raise ValueError("cannot build a complement of the zero vector")
    phat = p / nrm
    if l == 2:
        return np.array([[-phat[1]], [phat[0]]])
    if l == 3:
        px, py, pz = phat.tolist()
        # cross of the least-aligned coordinate axis with phat, normalized
        k = min(range(3), key=lambda i: abs(phat[i]))
        if k == 0:
            ux, uy, uz = 0.0, -pz, py
        elif k == 1:
            ux, uy, uz = pz, 0.0, -px
        else:
            ux, uy, uz = -py, px, 0.0
        un = math.sqrt(ux * ux + uy * uy + uz * uz)
        ux, uy, uz = ux / un, uy / un, uz / un
        vx = py * uz - pz * uy
        vy = pz * ux - px * uz
        vz = px * uy - py * ux
        return np.array([[ux, vx], [uy, vy], [uz, vz]])
    v = phat.copy()
    v[0] += math.copysign(1.0, phat[0])
    v /= math.sqrt(float(v @ v))
    house = np.eye(l) - 2.0 * np.outer(v, v)
    return house[:, 1:]
