"""Truncated Taylor series ("jets") in one variable.

A jet of order ``k`` at a point ``t`` stores ``c_0, ..., c_k`` with
``c_j = f^{(j)}(t) / j!``.  All arithmetic is truncated power-series
arithmetic, so derivatives come out exact up to floating point rounding.
"""

from __future__ import annotations

import math

import numpy as np

from mmcheck.errors import DomainError


def _cauchy(a, b, k):
    return math.fsum(a[j] * b[k - j] for j in range(k + 1))


class Jet:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=float)

    @classmethod
    def constant(cls, value, order):
        c = np.zeros(order + 1)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, t, order):
        c = np.zeros(order + 1)
        c[0] = t
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def value(self):
        return float(self.coeffs[0])

    def derivative(self, k):
        """Return ``f^{(k)}(t)``."""
        return math.factorial(k) * float(self.coeffs[k])

    def __repr__(self):
        return f"Jet({self.coeffs.tolist()})"

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.constant(float(other), self.order)

    def __add__(self, other):
        other = self._coerce(other)
        return Jet(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return Jet(self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Jet(-self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.coeffs * float(other))
        a, b = self.coeffs, other.coeffs
        return Jet([_cauchy(a, b, k) for k in range(len(a))])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.coeffs / float(other))
        a, b = self.coeffs, other.coeffs
        if b[0] == 0.0:
            raise DomainError("division by a function vanishing at the evaluation point")
        q = np.zeros_like(a)
        for k in range(len(a)):
            s = math.fsum(b[j] * q[k - j] for j in range(1, k + 1))
            q[k] = (a[k] - s) / b[0]
        return Jet(q)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, p):
        if isinstance(p, Jet):
            return exp(p * log(self))
        p = float(p)
        if p.is_integer():
            return _int_power(self, int(p))
        return power(self, p)

    def __rpow__(self, base):
        base = float(base)
        if base <= 0.0:
            raise DomainError("non-positive base raised to a variable power")
        return exp(self * math.log(base))


def _int_power(x, m):
    if m < 0:
        return 1.0 / _int_power(x, -m)
    result = Jet.constant(1.0, x.order)
    base = x
    while m:
        if m & 1:
            result = result * base
        m >>= 1
        if m:
            base = base * base
    return result


def exp(x):
    a = x.coeffs
    e = np.zeros_like(a)
    e[0] = math.exp(a[0])
    # k e_k = sum_{j=1}^k j a_j e_{k-j}
    for k in range(1, len(a)):
        e[k] = math.fsum(j * a[j] * e[k - j] for j in range(1, k + 1)) / k
    return Jet(e)


def log(x):
    a = x.coeffs
    if a[0] <= 0.0:
        raise DomainError(f"log of non-positive value {float(a[0])!r}")
    g = np.zeros_like(a)
    g[0] = math.log(a[0])
    # a_0 k g_k = k a_k - sum_{j=1}^{k-1} j g_j a_{k-j}
    for k in range(1, len(a)):
        s = math.fsum(j * g[j] * a[k - j] for j in range(1, k))
        g[k] = (k * a[k] - s) / (k * a[0])
    return Jet(g)


def power(x, p):
    """Real power ``x**p`` for a jet with positive constant term."""
    a = x.coeffs
    if a[0] <= 0.0:
        raise DomainError(f"non-integer power of non-positive value {float(a[0])!r}")
    g = np.zeros_like(a)
    g[0] = a[0] ** p
    # k a_0 g_k = sum_{j=1}^k ((p + 1) j - k) a_j g_{k-j}
    for k in range(1, len(a)):
        s = math.fsum(((p + 1.0) * j - k) * a[j] * g[k - j] for j in range(1, k + 1))
        g[k] = s / (k * a[0])
    return Jet(g)


def sqrt(x):
    if x.coeffs[0] <= 0.0:
        raise DomainError(f"sqrt of non-positive value {float(x.coeffs[0])!r}")
    return power(x, 0.5)
