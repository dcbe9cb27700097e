"""Loewner, Kraus and Hankel matrices, the coefficient matrix C(t), and PSD tests.

Matrices are plain symmetric ``numpy`` arrays.  Builders compute each
entry once and write it to both triangles, so symmetry is exact.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from mmcheck.divided import PointTuple, divided_difference
from mmcheck.errors import DomainError

DEFAULT_TOL = 1e-9


def _points(points):
    return points.points if isinstance(points, PointTuple) else tuple(float(p) for p in points)


def loewner(f, points):
    """Matrix of first divided differences ``[l_i, l_j]_f``."""
    lam = _points(points)
    n = len(lam)
    L = np.empty((n, n))
    for i in range(n):
        L[i, i] = f.taylor(lam[i], 1)[1]
        for j in range(i + 1, n):
            L[i, j] = L[j, i] = divided_difference(f, (lam[i], lam[j]))
    return L


def kraus(f, lambda0, points):
    """Matrix of second divided differences ``[l_i, l_j, l_0]_f``.

    ``lambda0`` may lie anywhere in the domain, including on a point.
    """
    lam = _points(points)
    n = len(lam)
    K = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            K[i, j] = K[j, i] = divided_difference(f, (lam[i], lam[j], float(lambda0)))
    return K


def _hankel(c, n, shift):
    idx = np.add.outer(np.arange(n), np.arange(n)) + shift
    return np.asarray(c)[idx]


def hankel_m(f, t, n):
    """``M(t)_{ij} = f^{(i+j-1)}(t) / (i+j-1)!`` for ``1 <= i, j <= n``."""
    return _hankel(f.taylor(t, 2 * n - 1), n, 1)


def hankel_k(f, t, n):
    """``K(t)_{ij} = f^{(i+j)}(t) / (i+j)!`` for ``1 <= i, j <= n``."""
    return _hankel(f.taylor(t, 2 * n), n, 2)


def coeff_matrix(t, points):
    """Column ``j`` holds the coefficients in ``y`` of ``prod_{k != j} (1 + y (t - l_k))``."""
    lam = np.asarray(_points(points), dtype=float)
    n = len(lam)
    C = np.empty((n, n))
    for j in range(n):
        col = np.array([1.0])
        for k in range(n):
            if k != j:
                col = np.convolve(col, [1.0, t - lam[k]])
        C[:, j] = col
    return C


# -- eigenvalues -------------------------------------------------------------


def jacobi_eigh(A, tol=1e-15, max_sweeps=100):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, vectors)`` with eigenvalues ascending and
    eigenvectors in the columns of ``vectors``.
    """
    a = np.array(A, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if n > 64:
        raise ValueError("cyclic Jacobi is only used for dimensions up to 64")
    v = np.eye(n)
    scale = np.abs(a).max() if a.size else 0.0
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.triu(a, 1) ** 2)))
        if off <= tol * scale or off == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    w = np.diag(a).copy()
    order = np.argsort(w)
    return w[order], v[:, order]


@dataclass(frozen=True)
class PsdVerdict:
    is_psd: bool
    min_eigenvalue: float
    tolerance_used: float
    margin: float
    scale: float
    near_boundary: bool

    def to_dict(self):
        return asdict(self)


def psd_verdict(A, tol=DEFAULT_TOL, scale=None):
    """PSD decision: ``min_eig >= -tol * (1 + scale)``, scale ``max |A_ij|`` by default.

    ``margin`` is the minimum eigenvalue divided by ``1 + scale``; the
    verdict is flagged ``near_boundary`` when ``|margin| < 10 tol``.
    """
    A = np.asarray(A, dtype=float)
    if not np.array_equal(A, A.T):
        raise ValueError("matrix is not symmetric")
    w, _ = jacobi_eigh(A)
    if scale is None:
        scale = float(np.abs(A).max()) if A.size else 0.0
    min_eig = float(w[0])
    margin = min_eig / (1.0 + scale)
    return PsdVerdict(
        is_psd=margin >= -tol,
        min_eigenvalue=min_eig,
        tolerance_used=tol,
        margin=margin,
        scale=float(scale),
        near_boundary=abs(margin) < 10 * tol,
    )


def symmetrize(A):
    A = np.asarray(A, dtype=float)
    return 0.5 * (A + A.T)


def matrix_function(f, A):
    """``U f(D) U^T`` from the Jacobi decomposition ``A = U D U^T``."""
    w, U = jacobi_eigh(symmetrize(A))
    a, b = f.domain
    if w.size and not (a < w[0] and w[-1] < b):
        raise DomainError(f"spectrum [{w[0]}, {w[-1]}] not inside the domain ({a}, {b})")
    fw = np.array([f(x) for x in w])
    return symmetrize((U * fw) @ U.T)
