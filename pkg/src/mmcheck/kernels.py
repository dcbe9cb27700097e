"""Peano-kernel weights built from residues of rational functions.

For poles ``r_k`` of multiplicity ``m_k`` with ``sum m_k = e + 2`` the kernel

    W(t) = sum_{r_k < t} Res_{z = r_k} [ -(z - t)^e / prod (z - r_k)^{m_k} ]

is a continuous piecewise polynomial supported on the hull of the poles.
The Loewner weight uses the points of the tuple as double poles with
``e = 2n - 2``; the Kraus weight adds a simple pole at ``lambda_0`` and uses
``e = 2n - 1``.

The same function is ``M(t) / (e + 1)`` with ``M`` the Curry-Schoenberg
B-spline on the poles repeated by multiplicity.  Residues at close poles
are large and cancel, so by default the pieces come from the B-spline
recursion, whose steps are convex combinations; the residue sum stays
available as ``method="residue"``.
"""

from __future__ import annotations

import math

import numpy as np

from mmcheck.divided import PointTuple
from mmcheck.errors import DomainError
from mmcheck.poly import Polynomial, inverse_factor_series, merge_roots
from mmcheck.quadrature import gauss_legendre


class PiecewisePolynomial:
    """Polynomial pieces between sorted breakpoints; zero outside them.

    Piece ``j`` covers ``[breakpoints[j], breakpoints[j+1]]`` and is stored
    in powers of ``t - origin`` with its own origin (a knot of the piece).
    """

    def __init__(self, breakpoints, pieces):
        self.breakpoints = np.asarray(breakpoints, dtype=float)
        self.pieces = list(pieces)
        if len(self.pieces) != len(self.breakpoints) - 1:
            raise ValueError("need one piece per interval between breakpoints")

    @property
    def support(self):
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        bp = self.breakpoints
        idx = np.searchsorted(bp, t, side="right") - 1
        idx = np.where(t == bp[-1], len(self.pieces) - 1, idx)
        inside = (idx >= 0) & (idx < len(self.pieces))
        for j, piece in enumerate(self.pieces):
            mask = inside & (idx == j)
            if mask.any():
                out[mask] = piece(t[mask])
        return out if out.ndim else float(out)

    def integral(self):
        """Exact integral from per-piece antiderivatives."""
        bp = self.breakpoints
        return math.fsum(
            p.integral(bp[j], bp[j + 1]) for j, p in enumerate(self.pieces)
        )

    def knot_jumps(self):
        """Relative jumps of adjacent pieces at interior knots and at the ends."""
        bp = self.breakpoints
        peak = self.peak()
        jumps = [abs(self.pieces[0](bp[0])), abs(self.pieces[-1](bp[-1]))]
        for j in range(1, len(self.pieces)):
            jumps.append(abs(self.pieces[j - 1](bp[j]) - self.pieces[j](bp[j])))
        return np.array(jumps) / peak

    def grid(self, points=2048):
        lo, hi = self.support
        return np.linspace(lo, hi, points)

    def peak(self, points=2048):
        return float(np.max(np.abs(self(self.grid(points)))))

    def integrate(self, g, nodes=48):
        """``int W(t) g(t) dt`` by Gauss-Legendre on each piece; ``g`` is vectorized."""
        x, w = gauss_legendre(nodes)
        total = 0.0
        bp = self.breakpoints
        for j, piece in enumerate(self.pieces):
            lo, hi = bp[j], bp[j + 1]
            half = 0.5 * (hi - lo)
            t = lo + half * (x + 1.0)
            total = total + half * np.sum(w * piece(t) * g(t))
        return total

    def to_dict(self):
        bp = self.breakpoints
        return {
            "breakpoints": [float(b) for b in bp],
            "pieces": [
                {
                    "interval": [float(bp[j]), float(bp[j + 1])],
                    "origin": p.origin,
                    "coeffs": p.to_list(),
                }
                for j, p in enumerate(self.pieces)
            ],
        }


def _points(points):
    pts = points.points if isinstance(points, PointTuple) else tuple(float(p) for p in points)
    return tuple(sorted(pts))


def residue_polynomial(poles, k, power, origin):
    """``Res_{z = r_k} -(z - t)^power / prod (z - r)^m`` as a polynomial in ``t``."""
    r, m = poles[k]
    others = poles[:k] + poles[k + 1 :]
    inv = inverse_factor_series(others, r, m - 1)
    u = r - origin
    # Taylor coefficients in h = z - r of -(z - t)^e = -((r - t) + h)^e,
    # each a polynomial in s = t - origin via (r - t) = u - s
    base = Polynomial([u, -1.0], origin)
    total = Polynomial((), origin)
    for a in range(min(m, power + 1)):
        coef = -math.comb(power, a) * float(inv[m - 1 - a])
        total = total + (base ** (power - a)) * coef
    return total


def residue_kernel(poles, power):
    """Piecewise polynomial sum of residues to the left of ``t``.

    Pieces in the left half use the left sum directly; pieces in the right
    half use minus the sum of residues to the right, which is the same
    polynomial because all residues add up to zero.  Either way each piece
    is assembled from the residues nearest to it.
    """
    poles = merge_roots(poles)
    if sum(m for _, m in poles) != power + 2:
        raise ValueError("kernel needs total pole order power + 2")
    knots = [r for r, _ in poles]
    pieces = []
    npieces = len(knots) - 1
    for j in range(npieces):
        origin = knots[j]
        if j < npieces / 2:
            idx = range(0, j + 1)
            sign = 1.0
        else:
            idx = range(j + 1, len(poles))
            sign = -1.0
        acc = Polynomial((), origin)
        for k in idx:
            acc = acc + residue_polynomial(poles, k, power, origin)
        pieces.append(acc * sign)
    return PiecewisePolynomial(knots, pieces)


def bspline_kernel(poles, power):
    """``M(t) / (power + 1)`` for knots given as ``(point, multiplicity)`` pairs.

    Each piece runs the recursion
    ``M_{i,k} = k ((t - x_i) M_{i,k-1} + (x_{i+k} - t) M_{i+1,k-1}) / ((k-1)(x_{i+k} - x_i))``
    in exact polynomial arithmetic.
    """
    poles = merge_roots(poles)
    order = sum(m for _, m in poles) - 1
    if order != power + 1:
        raise ValueError("kernel needs total pole order power + 2")
    x = [r for r, m in poles for _ in range(m)]
    knots = [r for r, _ in poles]
    pieces = []
    npieces = len(knots) - 1
    for j in range(npieces):
        # expand about the knot nearer the support end, where the kernel is flat
        origin = knots[j] if j < npieces / 2 else knots[j + 1]
        left = sum(m for _, m in poles[: j + 1]) - 1  # x[left] = origin < x[left + 1]
        zero = Polynomial((), origin)
        M = [
            Polynomial([1.0 / (x[i + 1] - x[i])], origin) if i == left else zero
            for i in range(order)
        ]
        for k in range(2, order + 1):
            nxt = []
            for i in range(order - k + 1):
                span = x[i + k] - x[i]
                if span == 0.0 or (M[i].degree < 0 and M[i + 1].degree < 0):
                    nxt.append(zero)
                    continue
                up = Polynomial([origin - x[i], 1.0], origin)
                down = Polynomial([x[i + k] - origin, -1.0], origin)
                nxt.append((up * M[i] + down * M[i + 1]) * (k / ((k - 1) * span)))
            M = nxt
        pieces.append(M[0] * (1.0 / order))
    return PiecewisePolynomial(knots, pieces)


_BUILDERS = {"bspline": bspline_kernel, "residue": residue_kernel}


def _builder(method):
    try:
        return _BUILDERS[method]
    except KeyError:
        raise ValueError(f"method must be one of {sorted(_BUILDERS)}, got {method!r}") from None


def weight_i(points, n=None, method="bspline"):
    """Loewner weight ``I``: residues of ``-(z - t)^{2n-2} / p(z)^2``."""
    lam = _points(points)
    n = len(lam) if n is None else n
    if n != len(lam) or n < 2:
        raise ValueError("weight_i needs n >= 2 points")
    if len(merge_roots([(p, 1) for p in lam])) != n:
        raise ValueError("weight_i needs distinct points")
    return _builder(method)([(p, 2) for p in lam], 2 * n - 2)


def weight_j(lambda0, points, n=None, method="bspline"):
    """Kraus weight ``J``: residues of ``-(z - t)^{2n-1} / ((z - l_0) p(z)^2)``.

    A ``lambda0`` coinciding with a point merges into a triple pole.
    """
    lam = _points(points)
    n = len(lam) if n is None else n
    if n != len(lam) or n < 2:
        raise ValueError("weight_j needs n >= 2 points")
    if len(merge_roots([(p, 1) for p in lam])) != n:
        raise ValueError("weight_j needs distinct points")
    return _builder(method)([(p, 2) for p in lam] + [(float(lambda0), 1)], 2 * n - 1)


def _check_outside(z, lo, hi):
    if lo <= z <= hi:
        raise DomainError(f"z={z!r} lies inside the kernel support [{lo}, {hi}]")


def _moment(kernel, z, power):
    """``int W(t) (z - t)^{-power} dt`` with pieces bisected until ``z`` is far."""
    x, w = gauss_legendre(64)
    total = []
    bp = kernel.breakpoints
    for j, piece in enumerate(kernel.pieces):
        stack = [(bp[j], bp[j + 1])]
        while stack:
            lo, hi = stack.pop()
            half = 0.5 * (hi - lo)
            dist = min(abs(z - lo), abs(z - hi))
            if half > dist and half > 1e-12 * (bp[-1] - bp[0]):
                mid = 0.5 * (lo + hi)
                stack.extend([(lo, mid), (mid, hi)])
                continue
            t = lo + half * (x + 1.0)
            total.append(half * np.sum(w * piece(t) * (z - t) ** (-power)))
    return math.fsum(total)


def _p(lam, z):
    # factored form; the expanded polynomial cancels badly near its roots
    return math.prod(z - r for r in lam)


def check_normalization_i(kernel, points, z, n=None):
    """Relative defect of ``(2n-1) int I(t) (z-t)^{-2n} dt = 1 / p(z)^2``."""
    lam = _points(points)
    n = len(lam) if n is None else n
    lo, hi = kernel.support
    _check_outside(z, lo, hi)
    lhs = (2 * n - 1) * _moment(kernel, z, 2 * n)
    rhs = 1.0 / _p(lam, z) ** 2
    return abs(lhs - rhs) / abs(rhs)


def check_normalization_j(kernel, lambda0, points, z, n=None):
    """Relative defect of ``2n int J(t) (z-t)^{-2n-1} dt = 1 / ((z - l_0) p(z)^2)``."""
    lam = _points(points)
    n = len(lam) if n is None else n
    if z == lambda0:
        raise DomainError("z coincides with lambda0, a pole of the right-hand side")
    lo, hi = kernel.support
    _check_outside(z, lo, hi)
    lhs = 2 * n * _moment(kernel, z, 2 * n + 1)
    rhs = 1.0 / ((z - lambda0) * _p(lam, z) ** 2)
    return abs(lhs - rhs) / abs(rhs)
