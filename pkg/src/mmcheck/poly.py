"""Real polynomials and rational functions with factored denominators.

Polynomials are stored in a shifted monomial basis, ``sum c_k (t - origin)^k``,
so that pieces of a spline can be expanded around a nearby knot.
Rational functions keep their denominator as a list of ``(root, multiplicity)``
pairs and are never multiplied out; residues come from Taylor series of the
individual factors.
"""

from __future__ import annotations

import math
from numbers import Number

import numpy as np

from mmcheck.errors import MmcheckError


class Polynomial:
    """``sum(coeffs[k] * (t - origin)**k)`` with trailing zeros trimmed."""

    __slots__ = ("coeffs", "origin")

    def __init__(self, coeffs=(), origin=0.0):
        c = np.array(coeffs, dtype=float).reshape(-1)
        nz = np.flatnonzero(c)
        self.coeffs = c[: nz[-1] + 1] if nz.size else c[:0]
        self.origin = float(origin)

    @classmethod
    def constant(cls, value, origin=0.0):
        return cls([value], origin)

    @property
    def degree(self):
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def __call__(self, t):
        s = np.asarray(t) - self.origin if not isinstance(t, Number) else t - self.origin
        acc = 0.0 * s
        for c in self.coeffs[::-1]:
            acc = acc * s + c
        return acc

    def naive_eval(self, t):
        s = t - self.origin
        return sum(c * s**k for k, c in enumerate(self.coeffs))

    def __repr__(self):
        return f"Polynomial({self.coeffs.tolist()}, origin={self.origin})"

    # -- arithmetic -------------------------------------------------------

    def _align(self, other):
        if isinstance(other, Number):
            return Polynomial([other], self.origin)
        if other.origin != self.origin:
            return other.recenter(self.origin)
        return other

    def __add__(self, other):
        other = self._align(other)
        n = max(len(self.coeffs), len(other.coeffs))
        c = np.zeros(n)
        c[: len(self.coeffs)] += self.coeffs
        c[: len(other.coeffs)] += other.coeffs
        return Polynomial(c, self.origin)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self.coeffs, self.origin)

    def __sub__(self, other):
        return self + (-self._align(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return Polynomial(self.coeffs * float(other), self.origin)
        other = self._align(other)
        if not len(self.coeffs) or not len(other.coeffs):
            return Polynomial((), self.origin)
        return Polynomial(np.convolve(self.coeffs, other.coeffs), self.origin)

    __rmul__ = __mul__

    def __pow__(self, m):
        result = Polynomial([1.0], self.origin)
        for _ in range(int(m)):
            result = result * self
        return result

    # -- calculus and re-expansion ---------------------------------------

    def taylor_coeffs(self, at):
        """Coefficients of the same polynomial in powers of ``(t - at)``."""
        d = float(at) - self.origin
        c = self.coeffs
        n = len(c)
        out = np.zeros(n)
        for a in range(n):
            out[a] = math.fsum(math.comb(k, a) * d ** (k - a) * c[k] for k in range(a, n))
        return out

    def recenter(self, at):
        return Polynomial(self.taylor_coeffs(at), at)

    def derivative(self, k=1):
        c = self.coeffs
        if k >= len(c):
            return Polynomial((), self.origin)
        j = np.arange(k, len(c))
        falling = np.array([math.perm(int(i), k) for i in j], dtype=float)
        return Polynomial(c[k:] * falling, self.origin)

    def antiderivative(self):
        """Antiderivative vanishing at ``origin``."""
        c = self.coeffs
        return Polynomial(np.concatenate([[0.0], c / np.arange(1, len(c) + 1)]), self.origin)

    def integral(self, a, b):
        """Exact definite integral over ``[a, b]``."""
        P = self.antiderivative()
        return float(P(b) - P(a))

    def to_list(self):
        return [float(c) for c in self.coeffs]


def poly_from_roots(roots, origin=0.0):
    """Monic polynomial ``prod(t - r)``."""
    p = Polynomial([1.0], origin)
    for r in roots:
        p = p * Polynomial([origin - r, 1.0], origin)
    return p


def derivative_poly(p, k):
    return p.derivative(k)


# -- rational functions ------------------------------------------------------


class ResidueError(MmcheckError, ValueError):
    pass


def merge_roots(poles, sep_tol=None):
    """Merge roots closer than ``sep_tol``, adding multiplicities.

    The default tolerance is ``1e-9`` times the width of the root hull.
    """
    items = sorted((float(r), int(m)) for r, m in poles)
    if not items:
        return ()
    if sep_tol is None:
        width = items[-1][0] - items[0][0]
        sep_tol = 1e-9 * width if width > 0 else 0.0
    merged = [list(items[0])]
    for r, m in items[1:]:
        if r - merged[-1][0] <= sep_tol:
            merged[-1][1] += m
        else:
            merged.append([r, m])
    return tuple((r, m) for r, m in merged)


def inverse_factor_series(poles, at, order, cofactor=None):
    """Taylor coefficients in ``h = z - at`` of ``1 / (cofactor * prod (z - r)^m)``.

    The poles listed must all differ from ``at``.  Each factor
    ``(d + h)^{-m}`` with ``d = at - r`` has the closed-form expansion
    ``sum_j binom(-m, j) d^{-m-j} h^j``, so nothing is ever multiplied out.
    """
    series = np.zeros(order + 1)
    series[0] = 1.0
    j = np.arange(order + 1)
    for r, m in poles:
        d = at - r
        if d == 0.0:
            raise ResidueError(f"pole {r!r} coincides with the expansion point")
        factor = np.array([(-1.0) ** i * math.comb(m + i - 1, i) for i in j]) * d ** (-m - j.astype(float))
        series = np.array([math.fsum(series[:k + 1] * factor[k::-1]) for k in range(order + 1)])
    if cofactor is not None:
        b = np.zeros(order + 1)
        cb = cofactor.taylor_coeffs(at)[: order + 1]
        b[: len(cb)] = cb
        if b[0] == 0.0:
            raise ResidueError("cofactor vanishes at the expansion point")
        q = np.zeros(order + 1)
        for k in range(order + 1):
            q[k] = (series[k] - math.fsum(b[i] * q[k - i] for i in range(1, k + 1))) / b[0]
        series = q
    return series


def residue_from_series(numerator_series, inverse_series, multiplicity):
    """Coefficient of ``h^{m-1}`` in ``N(h) * R(h)``.

    Entries of ``numerator_series`` may be numbers or :class:`Polynomial`
    objects (when the numerator depends polynomially on a parameter).
    """
    m = multiplicity
    return sum(numerator_series[a] * float(inverse_series[m - 1 - a]) for a in range(m))


class RationalFunction:
    """``numerator(z) / (cofactor(z) * prod (z - root)^mult)``."""

    def __init__(self, numerator, poles, cofactor=None, sep_tol=None):
        self.numerator = numerator
        self.poles = merge_roots(poles, sep_tol)
        self.cofactor = cofactor
        self.sep_tol = sep_tol

    @property
    def numerator_degree(self):
        return self.numerator.degree

    @property
    def denominator_degree(self):
        extra = self.cofactor.degree if self.cofactor is not None else 0
        return sum(m for _, m in self.poles) + extra

    @property
    def decay_order(self):
        return self.denominator_degree - self.numerator_degree

    def __call__(self, z):
        den = 1.0
        for r, m in self.poles:
            den = den * (z - r) ** m
        if self.cofactor is not None:
            den = den * self.cofactor(z)
        return self.numerator(z) / den

    def _find(self, pole):
        tol = self.sep_tol
        if tol is None:
            roots = [r for r, _ in self.poles]
            width = max(roots) - min(roots) if roots else 0.0
            tol = 1e-9 * width if width > 0 else 0.0
        for idx, (r, m) in enumerate(self.poles):
            if abs(r - pole) <= tol:
                return idx
        raise ResidueError(f"{pole!r} is not a recorded pole")

    def residue(self, pole, multiplicity=None):
        idx = self._find(pole)
        r, m = self.poles[idx]
        if multiplicity is not None and multiplicity != m:
            raise ResidueError(f"pole {r!r} has multiplicity {m}, not {multiplicity}")
        others = self.poles[:idx] + self.poles[idx + 1 :]
        inv = inverse_factor_series(others, r, m - 1, self.cofactor)
        num = np.zeros(m)
        nc = self.numerator.taylor_coeffs(r)[:m]
        num[: len(nc)] = nc
        return float(residue_from_series(num, inv, m))


def residue(r, pole, multiplicity):
    """Residue of the rational function ``r`` at a pole of known multiplicity."""
    return r.residue(pole, multiplicity)
