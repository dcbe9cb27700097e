"""Certification of matrix monotonicity and convexity of order n.

Three independent routes are available:

* ``hankel``: PSD test of ``M_n(t)`` (monotone) or ``K_n(t)`` (convex) on a
  grid of the interval;
* ``loewner`` / ``kraus``: PSD test of divided-difference matrices on random
  tuples of points;
* ``definition``: random pairs of real symmetric matrices plugged straight
  into the operator inequality.

Each route gives a verdict; any clear negative eigenvalue refutes.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from mmcheck.expr.functions import FunctionOracle
from mmcheck.matrices import DEFAULT_TOL, hankel_k, hankel_m, kraus, loewner, matrix_function, psd_verdict
from mmcheck.quadrature import gauss_legendre
from mmcheck.validation import (
    check_inside,
    check_interval,
    check_order,
    check_positive_int,
    check_property,
    check_smoothness,
    check_tolerance,
)

CERTIFIED = "certified-positive"
REFUTED = "refuted"
MARGINAL = "marginal"

#: A negative margin below ``-MARGINAL_FACTOR * tol`` refutes outright.
MARGINAL_FACTOR = 10.0
#: Relative minimum gap between sampled points.
MIN_GAP = 1e-4
MAX_WITNESSES = 3

REAL_SYMMETRIC_NOTE = (
    "definition oracle samples real symmetric matrices only; complex Hermitian pairs are not drawn"
)

_STREAM_TUPLES = 1
_STREAM_DEFINITION = 2


@dataclass
class CertificationRequest:
    f: FunctionOracle
    interval: tuple
    n: int
    property: str = "monotone"
    grid_size: int = 256
    random_tuples: int = 64
    trials: int = 0
    seed: int = 0
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        self.interval = check_interval(self.interval)
        self.n = check_order(self.n)
        self.property = check_property(self.property)
        self.grid_size = check_positive_int(self.grid_size, "grid_size", min_val=2)
        self.random_tuples = check_positive_int(self.random_tuples, "random_tuples", min_val=0)
        self.trials = check_positive_int(self.trials, "trials", min_val=0)
        self.tol = check_tolerance(self.tol)


@dataclass
class Witness:
    method: str
    location: dict
    matrix: list
    min_eigenvalue: float
    margin: float

    def to_dict(self):
        return {
            "method": self.method,
            "location": self.location,
            "matrix": self.matrix,
            "min_eigenvalue": self.min_eigenvalue,
            "margin": self.margin,
        }


@dataclass
class MethodResult:
    method: str
    verdict: str
    checks: int
    worst_margin: float
    witnesses: list = field(default_factory=list)

    def to_dict(self):
        return {
            "method": self.method,
            "verdict": self.verdict,
            "checks": self.checks,
            "worst_margin": self.worst_margin,
            "witnesses": [w.to_dict() for w in self.witnesses],
        }


@dataclass
class CertificationReport:
    verdict: str
    witnesses: list
    methods_agreeing: list
    methods: dict
    property: str
    n: int
    interval: tuple
    notes: list = field(default_factory=list)

    @property
    def worst_margin(self):
        return min((m.worst_margin for m in self.methods.values()), default=math.inf)

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "property": self.property,
            "n": self.n,
            "interval": list(self.interval),
            "worst_margin": self.worst_margin,
            "methods_agreeing": list(self.methods_agreeing),
            "methods": {k: v.to_dict() for k, v in self.methods.items()},
            "witnesses": [w.to_dict() for w in self.witnesses],
            "notes": list(self.notes),
        }


# -- helpers -----------------------------------------------------------------


def _threads():
    raw = os.environ.get("MMCHECK_THREADS")
    if raw is None or raw.strip() == "":
        return 1
    k = int(raw)
    if k == 0:
        return os.cpu_count() or 1
    return max(1, k)


def _map(fn, items):
    items = list(items)
    threads = _threads()
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _rng(seed, stream, index):
    return np.random.default_rng([int(seed), stream, int(index)])


def _classify_margin(margin, tol):
    if margin >= -tol:
        return CERTIFIED
    if margin >= -MARGINAL_FACTOR * tol:
        return MARGINAL
    return REFUTED


def _summarize(method, outcomes, tol):
    """``outcomes`` is a list of (location, matrix, PsdVerdict)."""
    worst = min((v.margin for _, _, v in outcomes), default=math.inf)
    bad = sorted((o for o in outcomes if not o[2].is_psd), key=lambda o: o[2].margin)
    witnesses = [
        Witness(method, loc, np.asarray(mat).tolist(), v.min_eigenvalue, v.margin)
        for loc, mat, v in bad[:MAX_WITNESSES]
    ]
    return MethodResult(method, _classify_margin(worst, tol), len(outcomes), worst, witnesses)


def _combine(methods, req_like, notes=()):
    verdicts = [m.verdict for m in methods.values()]
    if REFUTED in verdicts:
        verdict = REFUTED
    elif MARGINAL in verdicts:
        verdict = MARGINAL
    else:
        verdict = CERTIFIED
    witnesses = [w for m in methods.values() for w in m.witnesses]
    agreeing = [k for k, m in methods.items() if m.verdict == verdict]
    return CertificationReport(
        verdict=verdict,
        witnesses=witnesses,
        methods_agreeing=agreeing,
        methods=methods,
        property=req_like["property"],
        n=req_like["n"],
        interval=tuple(req_like["interval"]),
        notes=list(notes),
    )


def grid_points(interval, grid_size):
    """Uniform grid of the open interval, inset by half a step at both ends."""
    a, b = interval
    h = (b - a) / grid_size
    return a + h * (np.arange(grid_size) + 0.5)


def random_tuple(rng, interval, n, min_gap=MIN_GAP):
    """Sorted uniform draw of ``n`` points with gaps at least ``min_gap * (b - a)``."""
    a, b = interval
    gap = min_gap * (b - a)
    while True:
        pts = np.sort(rng.uniform(a, b, n))
        if pts[0] > a and pts[-1] < b and (n < 2 or np.diff(pts).min() >= gap):
            return pts


def random_lambda0(rng, interval, pts, index, min_gap=MIN_GAP):
    """Alternate between a point of the tuple, the hull interior and outside the hull."""
    a, b = interval
    gap = min_gap * (b - a)
    lo, hi = pts[0], pts[-1]
    mode = index % 4
    if mode == 0:
        return float(pts[rng.integers(len(pts))])
    for _ in range(1000):
        if mode == 1 or (lo - a) + (b - hi) < 4 * gap:
            x = rng.uniform(lo, hi)
        else:
            x = rng.uniform(a, b - (hi - lo))
            if x >= lo:
                x += hi - lo
        if a < x < b and np.abs(pts - x).min() >= gap:
            return float(x)
    return float(pts[0])


# -- local and global routes -------------------------------------------------


def hankel_route(f, interval, n, prop, grid_size, tol):
    build = hankel_m if prop == "monotone" else hankel_k

    def check(t):
        H = build(f, t, n)
        return ({"t": float(t)}, H, psd_verdict(H, tol))

    return _summarize("hankel", _map(check, grid_points(interval, grid_size)), tol)


def sampling_route(f, interval, n, prop, random_tuples, seed, tol):
    method = "loewner" if prop == "monotone" else "kraus"

    def check(i):
        rng = _rng(seed, _STREAM_TUPLES, i)
        pts = random_tuple(rng, interval, n)
        if prop == "monotone":
            M = loewner(f, pts)
            loc = {"points": pts.tolist()}
        else:
            l0 = random_lambda0(rng, interval, pts, i)
            M = kraus(f, l0, pts)
            loc = {"points": pts.tolist(), "lambda0": l0}
        return (loc, M, psd_verdict(M, tol))

    return _summarize(method, _map(check, range(random_tuples)), tol)


# -- definition oracles ------------------------------------------------------


def _random_orthogonal(rng, n):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def _random_symmetric(rng, lo, hi, n):
    d = rng.uniform(lo, hi, n)
    Q = _random_orthogonal(rng, n)
    A = (Q * d) @ Q.T
    return 0.5 * (A + A.T), d


def _random_psd_direction(rng, n):
    if rng.random() < 0.5:
        v = rng.standard_normal(n)
        P = np.outer(v, v)
    else:
        G = rng.standard_normal((n, n))
        P = G @ G.T
    P = 0.5 * (P + P.T)
    return P / np.linalg.eigvalsh(P)[-1]


def _inset(interval):
    a, b = interval
    h = 1e-3 * (b - a)
    return a + h, b - h


def _monotone_trial(f, interval, n, seed, i, tol):
    rng = _rng(seed, _STREAM_DEFINITION, i)
    lo, hi = _inset(interval)
    A, d = _random_symmetric(rng, lo, hi, n)
    P = _random_psd_direction(rng, n)
    room = hi - d.max()
    s = room * 10.0 ** rng.uniform(-3.0, 0.0)
    B = A + s * P
    B = 0.5 * (B + B.T)
    FA = matrix_function(f, A)
    FB = matrix_function(f, B)
    D = FB - FA
    scale = max(np.abs(FA).max(), np.abs(FB).max())
    loc = {"A": A.tolist(), "B": B.tolist()}
    return (loc, D, psd_verdict(D, tol, scale=scale))


def _convex_trial(f, interval, n, seed, i, tol):
    rng = _rng(seed, _STREAM_DEFINITION, i)
    lo, hi = _inset(interval)
    A, _ = _random_symmetric(rng, lo, hi, n)
    if rng.random() < 0.5:
        B, _ = _random_symmetric(rng, lo, hi, n)
    else:
        v = rng.standard_normal(n)
        H = np.outer(v, v) * rng.choice([-1.0, 1.0])
        H /= np.abs(np.linalg.eigvalsh(H)).max()
        s = (hi - lo) * 10.0 ** rng.uniform(-3.0, 0.0)
        while True:
            B = A + s * H
            B = 0.5 * (B + B.T)
            w = np.linalg.eigvalsh(B)
            if lo < w[0] and w[-1] < hi:
                break
            s *= 0.5
    mu = float(rng.uniform(0.0, 1.0))
    FA = matrix_function(f, A)
    FB = matrix_function(f, B)
    Fmix = matrix_function(f, mu * A + (1.0 - mu) * B)
    D = mu * FA + (1.0 - mu) * FB - Fmix
    D = 0.5 * (D + D.T)
    scale = max(np.abs(FA).max(), np.abs(FB).max(), np.abs(Fmix).max())
    loc = {"A": A.tolist(), "B": B.tolist(), "mu": mu}
    return (loc, D, psd_verdict(D, tol, scale=scale))


def definition_route(f, interval, n, prop, trials, seed, tol):
    trial = _monotone_trial if prop == "monotone" else _convex_trial
    outcomes = _map(lambda i: trial(f, interval, n, seed, i, tol), range(trials))
    return _summarize("definition", outcomes, tol)


def definition_oracle_monotone(f, interval, n, trials=200, seed=0, tol=DEFAULT_TOL):
    """Check ``A <= B  =>  f(A) <= f(B)`` on random real symmetric pairs."""
    interval = check_interval(interval)
    n = check_order(n)
    methods = {"definition": definition_route(f, interval, n, "monotone", trials, seed, tol)}
    meta = {"property": "monotone", "n": n, "interval": interval}
    return _combine(methods, meta, [REAL_SYMMETRIC_NOTE])


def definition_oracle_convex(f, interval, n, trials=200, seed=0, tol=DEFAULT_TOL):
    """Check ``f(mu A + (1-mu) B) <= mu f(A) + (1-mu) f(B)`` on random pairs."""
    interval = check_interval(interval)
    n = check_order(n)
    methods = {"definition": definition_route(f, interval, n, "convex", trials, seed, tol)}
    meta = {"property": "convex", "n": n, "interval": interval}
    return _combine(methods, meta, [REAL_SYMMETRIC_NOTE])


# -- certification pipelines -------------------------------------------------


def _certify(req):
    needed = 2 * req.n - 1 if req.property == "monotone" else 2 * req.n
    check_smoothness(req.f, needed, f"{req.property} certification of order {req.n}")
    check_inside(req.f, req.interval)
    methods = {
        "hankel": hankel_route(req.f, req.interval, req.n, req.property, req.grid_size, req.tol)
    }
    if req.random_tuples:
        res = sampling_route(
            req.f, req.interval, req.n, req.property, req.random_tuples, req.seed, req.tol
        )
        methods[res.method] = res
    notes = []
    if req.trials:
        methods["definition"] = definition_route(
            req.f, req.interval, req.n, req.property, req.trials, req.seed, req.tol
        )
        notes.append(REAL_SYMMETRIC_NOTE)
    meta = {"property": req.property, "n": req.n, "interval": req.interval}
    return _combine(methods, meta, notes)


def certify_monotone(req):
    """Hankel ``M(t)`` on a grid plus Loewner matrices on random tuples."""
    if req.property != "monotone":
        raise ValueError("request is not for the monotone property")
    return _certify(req)


def certify_convex(req):
    """Hankel ``K(t)`` on a grid plus Kraus matrices on random tuples and ``lambda0``."""
    if req.property != "convex":
        raise ValueError("request is not for the convex property")
    return _certify(req)


# -- estimator front end -----------------------------------------------------


class _CertifierBase(BaseEstimator):
    _property = None

    def __init__(
        self,
        n=2,
        grid_size=256,
        random_tuples=64,
        trials=0,
        tol=DEFAULT_TOL,
        seed=0,
    ):
        self.n = n
        self.grid_size = grid_size
        self.random_tuples = random_tuples
        self.trials = trials
        self.tol = tol
        self.seed = seed

    def fit(self, f, interval):
        """Certify ``f`` on ``interval``; results land in ``report_``."""
        req = CertificationRequest(
            f=f,
            interval=interval,
            n=self.n,
            property=self._property,
            grid_size=self.grid_size,
            random_tuples=self.random_tuples,
            trials=self.trials,
            seed=self.seed,
            tol=self.tol,
        )
        self.report_ = _certify(req)
        self.verdict_ = self.report_.verdict
        self.witnesses_ = self.report_.witnesses
        return self

    def predict(self, interval=None):
        """``True`` when the fitted function was certified."""
        check_is_fitted(self, "report_")
        return self.verdict_ == CERTIFIED


class MonotoneCertifier(_CertifierBase):
    """Certify matrix monotonicity of order ``n``.

    >>> from mmcheck.expr import catalog
    >>> MonotoneCertifier(n=3, random_tuples=8).fit(catalog("sqrt"), (0.01, 100)).verdict_
    'certified-positive'
    """

    _property = "monotone"


class ConvexCertifier(_CertifierBase):
    """Certify matrix convexity of order ``n``."""

    _property = "convex"


# -- convexity to monotonicity ----------------------------------------------


class DividedDifferenceFunction(FunctionOracle):
    """``g(x) = [x, lambda0]_f``, smooth through ``x = lambda0``.

    Taylor coefficients use ``g^{(k)}(x)/k! = (k+1) int_0^1 s^k c_{k+1}(f, l0 + s (x - l0)) ds``
    with ``c_j(f, y) = f^{(j)}(y)/j!``, integrated by adaptive Gauss-Legendre.
    Plain values away from ``lambda0`` use the difference quotient.
    """

    analytic = False

    def __init__(self, f, lambda0, rtol=1e-14, nodes=16):
        self.f = f
        self.lambda0 = float(lambda0)
        f.check_point(self.lambda0)
        self.domain = f.domain
        self.max_order = f.max_order - 1
        self.rtol = rtol
        self.nodes = nodes
        self.name = f"[x, {self.lambda0:g}]_({f.name})"
        self.f0 = f(self.lambda0)

    def _panel(self, lo, hi, d, order):
        x, w = gauss_legendre(self.nodes)
        half = 0.5 * (hi - lo)
        s = lo + half * (x + 1.0)
        k = np.arange(order + 1)
        total = np.zeros(order + 1)
        for si, wi in zip(s, w):
            c = self.f.taylor(self.lambda0 + si * d, order + 1)
            total += wi * si**k * c[1:]
        return half * total * (k + 1)

    def _taylor(self, t, order):
        d = t - self.lambda0
        if order == 0 and abs(d) >= 1e-3 * max(1.0, abs(t), abs(self.lambda0)):
            return np.array([(self.f(t) - self.f0) / d])
        if d == 0.0:
            c = self.f.taylor(self.lambda0, order + 1)
            return c[1:].copy()
        return self._adaptive(0.0, 1.0, d, order, self._panel(0.0, 1.0, d, order), 0)

    def _adaptive(self, lo, hi, d, order, whole, depth):
        mid = 0.5 * (lo + hi)
        left = self._panel(lo, mid, d, order)
        right = self._panel(mid, hi, d, order)
        both = left + right
        scale = np.abs(both).max()
        if depth >= 12 or np.abs(both - whole).max() <= self.rtol * max(scale, 1e-300):
            return both
        return self._adaptive(lo, mid, d, order, left, depth + 1) + self._adaptive(
            mid, hi, d, order, right, depth + 1
        )

    def __call__(self, t):
        return float(self.taylor(t, 0)[0])


def monotone_from_convex(f, lambda0):
    """Oracle for ``x -> [x, lambda0]_f``; n-monotone whenever ``f`` is n-convex."""
    return DividedDifferenceFunction(f, lambda0)


def divided_connection_defect(f, lambda0, points):
    """Largest entrywise gap between ``loewner(g, points)`` and ``kraus(f, lambda0, points)``."""
    g = monotone_from_convex(f, lambda0)
    return float(np.abs(loewner(g, points) - kraus(f, lambda0, points)).max())


__all__ = [
    "CERTIFIED",
    "MARGINAL",
    "REFUTED",
    "CertificationReport",
    "CertificationRequest",
    "ConvexCertifier",
    "DividedDifferenceFunction",
    "MonotoneCertifier",
    "Witness",
    "certify_convex",
    "certify_monotone",
    "definition_oracle_convex",
    "definition_oracle_monotone",
    "divided_connection_defect",
    "monotone_from_convex",
]
