"""Quadrature checks of the Hankel integral representations.

    L(Lambda, f)      = (2n - 1) int C(t)^T M_n(t, f) C(t) I(t) dt
    Kr(l0, Lambda, f) = 2n       int C(t)^T K_n(t, f) C(t) J(t) dt

Both integrals run over the kernel support only, one Gauss-Legendre rule
per piece between consecutive knots; pieces close to a known singularity
of ``f`` are split further.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from mmcheck.divided import PointTuple
from mmcheck.kernels import weight_i, weight_j
from mmcheck.matrices import coeff_matrix, hankel_k, hankel_m, kraus, loewner, psd_verdict
from mmcheck.quadrature import QuadratureRule

#: Entries smaller than this fraction of the largest lhs entry are compared
#: against that floor instead of their own size.
REL_FLOOR = 1e-12


@dataclass
class RepresentationReport:
    lhs: np.ndarray
    rhs: np.ndarray
    max_abs_defect: float
    max_rel_defect: float
    pieces_used: int
    node_hankels_psd: bool | None = field(default=None)

    def to_dict(self):
        return {
            "lhs": self.lhs.tolist(),
            "rhs": self.rhs.tolist(),
            "max_abs_defect": self.max_abs_defect,
            "max_rel_defect": self.max_rel_defect,
            "pieces_used": self.pieces_used,
            "node_hankels_psd": self.node_hankels_psd,
        }


def _points(points):
    return points.points if isinstance(points, PointTuple) else tuple(float(p) for p in points)


def _integrate(f, lam, kernel, hankel, rule, tol, check_nodes):
    n = len(lam)
    total = np.zeros((n, n))
    all_psd = True if check_nodes else None
    bp = kernel.breakpoints
    for j, piece in enumerate(kernel.pieces):
        ts, ws = rule.panels(bp[j], bp[j + 1], f.singularities)
        weights = ws * piece(ts)
        for t, w in zip(ts, weights):
            H = hankel(f, t, n)
            if check_nodes and all_psd and not psd_verdict(H, tol).is_psd:
                all_psd = False
            C = coeff_matrix(t, lam)
            total += w * (C.T @ H @ C)
    return 0.5 * (total + total.T), all_psd, len(kernel.pieces)


def _report(lhs, rhs, pieces, all_psd):
    diff = np.abs(lhs - rhs)
    floor = REL_FLOOR * max(np.abs(lhs).max(), np.finfo(float).tiny)
    rel = diff / np.maximum(np.abs(lhs), floor)
    return RepresentationReport(
        lhs=lhs,
        rhs=rhs,
        max_abs_defect=float(diff.max()),
        max_rel_defect=float(rel.max()),
        pieces_used=pieces,
        node_hankels_psd=all_psd,
    )


def verify_loewner_representation(f, points, rule=None, tol=1e-9, check_nodes=False):
    """Compare ``loewner(f, points)`` with its Hankel integral representation.

    With ``check_nodes`` every Hankel matrix sampled by the rule is also
    PSD-tested and the outcome stored in ``node_hankels_psd``.
    """
    rule = rule or QuadratureRule()
    lam = tuple(sorted(_points(points)))
    n = len(lam)
    lhs = loewner(f, lam)
    integral, all_psd, pieces = _integrate(
        f, lam, weight_i(lam), hankel_m, rule, tol, check_nodes
    )
    return _report(lhs, (2 * n - 1) * integral, pieces, all_psd)


def verify_kraus_representation(f, lambda0, points, rule=None, tol=1e-9, check_nodes=False):
    """Compare ``kraus(f, lambda0, points)`` with its Hankel integral representation."""
    rule = rule or QuadratureRule()
    lam = tuple(sorted(_points(points)))
    n = len(lam)
    lhs = kraus(f, lambda0, lam)
    integral, all_psd, pieces = _integrate(
        f, lam, weight_j(lambda0, lam), hankel_k, rule, tol, check_nodes
    )
    return _report(lhs, 2 * n * integral, pieces, all_psd)
