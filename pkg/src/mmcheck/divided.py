"""Divided differences: Newton table with confluent blocks, and a contour oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from mmcheck.errors import DomainError, OrderError

#: Points closer than this fraction of the hull width are treated as equal.
SEP_TOL = 1e-7
#: Below this fraction of the hull width a gap counts as ill-conditioned.
ILL_CONDITIONED_GAP = 1e-4
#: Table entries spanning less than this fraction of the reference length
#: (hull width, but at least 1% of the magnitude of the points) are first
#: tried from a Taylor expansion at their midpoint.
CLUSTER_SPAN = 0.35


@dataclass(frozen=True)
class PointTuple:
    """Points ``lambda_1..lambda_n`` inside an open interval."""

    points: tuple
    interval: tuple = (-math.inf, math.inf)
    min_separation: float = 0.0

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        a, b = self.interval
        for p in pts:
            if not (a < p < b):
                raise DomainError(f"point {p!r} not inside ({a}, {b})")
        if self.min_separation > 0 and len(pts) > 1:
            gaps = np.diff(np.sort(pts))
            if gaps.min() < self.min_separation:
                raise ValueError(
                    f"points closer than the required separation {self.min_separation!r}"
                )

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def sorted(self):
        return all(x <= y for x, y in zip(self.points, self.points[1:]))

    @property
    def hull(self):
        return min(self.points), max(self.points)


@dataclass(frozen=True)
class DividedDifferenceResult:
    value: float
    ill_conditioned: bool
    min_gap: float
    blocks: tuple  # ((point, multiplicity), ...)


def group_points(points, sep_tol=SEP_TOL):
    """Sort and merge nearly equal points into ``(point, multiplicity)`` blocks."""
    pts = sorted(float(p) for p in points)
    width = pts[-1] - pts[0]
    tol = sep_tol * width
    blocks = [[pts[0], 1]]
    for p in pts[1:]:
        if p - blocks[-1][0] <= tol:
            blocks[-1][1] += 1
        else:
            blocks.append([p, 1])
    return tuple((p, m) for p, m in blocks)


def _complete_homogeneous(d, order):
    """``h_r(d_0, ..., d_k)`` for ``r = 0..order``."""
    h = np.zeros(order + 1)
    h[0] = 1.0
    for x in d:
        for r in range(1, order + 1):
            h[r] += x * h[r - 1]
    return h


def _cluster_value(f, pts):
    """``[pts]_f`` from the Taylor series at the midpoint, or ``None``.

    Uses ``[pts]_{(x-c)^m} = h_{m-k}(pts - c)``; the result is only
    accepted when the last terms of the series are negligible.
    """
    k = len(pts) - 1
    order = f.max_order
    if order < k + 8:
        return None
    c = 0.5 * (pts[0] + pts[-1])
    coeffs = f.taylor(c, order)
    h = _complete_homogeneous([p - c for p in pts], order - k)
    terms = coeffs[k:] * h
    size = np.abs(terms).sum()
    if size == 0.0:
        return 0.0
    if np.abs(terms[-3:]).max() > 1e-17 * size:
        return None
    return math.fsum(terms)


def _newton_table(nodes, taylor, dtype, cluster=None):
    # nodes: expanded sorted list; taylor[p] holds f^{(k)}(p)/k! for the block at p
    n = len(nodes)
    z = np.array(nodes, dtype=dtype)
    col = np.array([taylor[p][0] for p in nodes], dtype=dtype)
    for j in range(1, n):
        nxt = np.empty(n - j, dtype=dtype)
        for i in range(n - j):
            if nodes[i] == nodes[i + j]:
                nxt[i] = taylor[nodes[i]][j]
                continue
            v = cluster(nodes[i : i + j + 1]) if cluster is not None else None
            if v is None:
                v = (col[i + 1] - col[i]) / (z[i + j] - z[i])
            nxt[i] = v
        col = nxt
    return col[0]


def divided_difference(f, points, sep_tol=SEP_TOL, full_output=False):
    """``[lambda_1, ..., lambda_n]_f`` for any tuple, repeated points allowed.

    Points within ``sep_tol`` times the hull width of each other form one
    confluent block, filled with ``f^{(k)}(p) / k!``.  When the smallest
    remaining gap is below ``1e-4`` of the hull width the table runs in
    extended precision and the result is flagged as ill-conditioned.
    Entries over a cluster narrower than ``CLUSTER_SPAN`` of the width are
    taken from a Taylor expansion when it converges, which avoids the
    cancellation of the difference quotients.
    """
    pts = points.points if isinstance(points, PointTuple) else tuple(points)
    if not pts:
        raise ValueError("need at least one point")
    blocks = group_points(pts, sep_tol)
    need = max(m for _, m in blocks) - 1
    if need > f.max_order:
        raise OrderError(
            f"repeated point of multiplicity {need + 1} needs derivative order {need}"
        )
    nodes = []
    taylor = {}
    for p, m in blocks:
        taylor[p] = f.taylor(p, m - 1) if m > 1 else np.array([f(p)])
        nodes.extend([p] * m)
    width = blocks[-1][0] - blocks[0][0]
    gaps = np.diff([p for p, _ in blocks])
    min_gap = float(gaps.min()) if gaps.size else 0.0
    ill = bool(gaps.size) and min_gap < ILL_CONDITIONED_GAP * width
    cluster = None
    if len(nodes) > 2 and width > 0:
        cache = {}
        ref = max(width, 1e-2 * max(1.0, abs(blocks[0][0]), abs(blocks[-1][0])))

        def cluster(sub):
            key = (sub[0], sub[-1], len(sub))
            if sub[-1] - sub[0] >= CLUSTER_SPAN * ref:
                return None
            if key not in cache:
                cache[key] = _cluster_value(f, sub)
            return cache[key]

    value = float(_newton_table(nodes, taylor, np.longdouble if ill else float, cluster))
    if full_output:
        return DividedDifferenceResult(value, ill, min_gap, blocks)
    return value


def divided_difference_contour(f, points, radius=None, nodes=256):
    """Trapezoidal rule for ``(1/2 pi i) \\oint f(z) / prod (z - lambda_k) dz``.

    The circle is centered at the midpoint of the hull.  ``f`` must have a
    complex extension analytic on the closed disk.
    """
    pts = np.array(points.points if isinstance(points, PointTuple) else points, dtype=float)
    lo, hi = pts.min(), pts.max()
    center = 0.5 * (lo + hi)
    inner = 0.5 * (hi - lo)
    sing = f.singularities
    outer = min((abs(s - center) for s in sing), default=math.inf) if sing else math.inf
    if radius is None:
        if math.isinf(outer):
            radius = max(2.0 * inner, 1.0)
        else:
            radius = math.sqrt(max(inner, 1e-3 * outer) * outer)
    if radius <= inner:
        raise DomainError(f"radius {radius!r} does not enclose the points (need > {inner!r})")
    if radius >= outer:
        raise DomainError(f"circle of radius {radius!r} touches a singularity of {f.name}")
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    w = radius * np.exp(1j * theta)
    z = center + w
    vals = np.array([f.complex_value(zz) for zz in z])
    den = np.prod(z[:, None] - pts[None, :], axis=1)
    return float(np.real(np.mean(vals * w / den)))


def mean_value_bounds(f, points, grid=512):
    """Range of ``f^{(n-1)} / (n-1)!`` over a grid on the hull of the points."""
    pts = points.points if isinstance(points, PointTuple) else tuple(points)
    k = len(pts) - 1
    lo, hi = min(pts), max(pts)
    xs = np.linspace(lo, hi, grid) if hi > lo else np.array([lo])
    vals = [f.taylor(x, k)[k] for x in xs]
    return float(min(vals)), float(max(vals))
