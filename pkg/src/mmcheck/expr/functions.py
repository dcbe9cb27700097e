"""Function oracles: smooth real functions exposing Taylor coefficients.

Every oracle answers ``taylor(t, order)`` with the array
``[f(t), f'(t), f''(t)/2!, ..., f^{(order)}(t)/order!]``.  Expression
oracles get these from jet arithmetic; catalog entries, polynomials,
rational functions and resolvents use closed forms.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from mmcheck.errors import DomainError, OrderError
from mmcheck.expr import jet
from mmcheck.expr.jet import Jet
from mmcheck.expr.parser import Binary, Neg, Num, Var, depends_on_x, parse, unparse

#: Highest derivative order any oracle will hand out.
MAX_ORDER = 24

_INF = math.inf


class FunctionOracle:
    """Base class.  Subclasses implement ``_taylor`` and ``__call__``."""

    domain = (-_INF, _INF)
    max_order = MAX_ORDER
    #: Points where the analytic continuation fails (poles, branch points).
    #: ``None`` means unknown.
    singularities = None
    analytic = False
    name = "f"

    def check_point(self, t, k=0):
        a, b = self.domain
        if not (a < t < b):
            raise DomainError(f"t={t!r} outside the domain ({a}, {b}) of {self.name}")
        if k > self.max_order:
            raise OrderError(
                f"derivative order {k} exceeds the available order {self.max_order} of {self.name}"
            )

    def taylor(self, t, order):
        t = float(t)
        self.check_point(t, order)
        return self._taylor(t, order)

    def derivative(self, k, t):
        """Return ``f^{(k)}(t)``."""
        return math.factorial(k) * self.taylor(t, k)[k]

    def __call__(self, t):
        return float(self.taylor(t, 0)[0])

    def complex_value(self, z):
        raise NotImplementedError(f"{self.name} has no complex extension")

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


# -- expressions -------------------------------------------------------------


def _float_power(base, p):
    if float(p).is_integer():
        if base == 0.0 and p < 0:
            raise DomainError("zero raised to a negative power")
        return base ** int(p)
    if base <= 0.0:
        raise DomainError(f"non-integer power of non-positive value {float(base)!r}")
    return base**p


class _FloatOps:
    @staticmethod
    def div(a, b):
        if b == 0.0:
            raise DomainError("division by zero")
        return a / b

    @staticmethod
    def sqrt(a):
        if a <= 0.0:
            raise DomainError(f"sqrt of non-positive value {float(a)!r}")
        return math.sqrt(a)

    @staticmethod
    def log(a):
        if a <= 0.0:
            raise DomainError(f"log of non-positive value {float(a)!r}")
        return math.log(a)

    exp = staticmethod(math.exp)

    @staticmethod
    def const_power(a, p):
        return _float_power(a, p)

    @staticmethod
    def var_power(a, b):
        if a <= 0.0:
            raise DomainError("non-positive base raised to a variable power")
        return math.exp(b * math.log(a))


class _JetOps:
    @staticmethod
    def div(a, b):
        if isinstance(b, Jet):
            return a / b
        if b == 0.0:
            raise DomainError("division by zero")
        return a / b

    sqrt = staticmethod(jet.sqrt)
    log = staticmethod(jet.log)
    exp = staticmethod(jet.exp)

    @staticmethod
    def const_power(a, p):
        if float(p).is_integer():
            if a.coeffs[0] == 0.0 and p < 0:
                raise DomainError("zero raised to a negative power")
            return a ** int(p)
        return jet.power(a, p)

    @staticmethod
    def var_power(a, b):
        return jet.exp(b * jet.log(a))


class _ComplexOps:
    @staticmethod
    def div(a, b):
        if b == 0:
            raise DomainError("division by zero")
        return a / b

    sqrt = staticmethod(cmath.sqrt)
    log = staticmethod(cmath.log)
    exp = staticmethod(cmath.exp)

    @staticmethod
    def const_power(a, p):
        if float(p).is_integer():
            return a ** int(p)
        return cmath.exp(p * cmath.log(a))

    @staticmethod
    def var_power(a, b):
        return cmath.exp(b * cmath.log(a))


def evaluate(node, x, ops=_FloatOps):
    """Evaluate an expression tree at ``x`` (a float, complex or Jet)."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -evaluate(node.operand, x, ops)
    if isinstance(node, Binary):
        if node.op == "^":
            return _power(node.left, node.right, x, ops)
        a = evaluate(node.left, x, ops)
        b = evaluate(node.right, x, ops)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return ops.div(a, b)
    if node.name == "pow":
        return _power(node.args[0], node.args[1], x, ops)
    arg = evaluate(node.args[0], x, ops)
    if ops is _JetOps and not isinstance(arg, Jet):
        return getattr(_FloatOps, node.name)(arg)
    return getattr(ops, node.name)(arg)


def _power(base_node, exp_node, x, ops):
    base = evaluate(base_node, x, ops)
    if not depends_on_x(exp_node):
        p = evaluate(exp_node, 0.0, _FloatOps)
        if isinstance(base, Jet):
            return _JetOps.const_power(base, p)
        if ops is _ComplexOps:
            return _ComplexOps.const_power(base, p)
        return _float_power(base, p)
    b = evaluate(exp_node, x, ops)
    if isinstance(b, Jet) and not isinstance(base, Jet):
        base = Jet.constant(base, b.order)
    return ops.var_power(base, b)


class ExpressionFunction(FunctionOracle):
    """Oracle for a parsed expression, differentiated with jets."""

    analytic = True

    def __init__(self, source, domain=(-_INF, _INF), max_order=MAX_ORDER):
        self.node = parse(source) if isinstance(source, str) else source
        self.domain = (float(domain[0]), float(domain[1]))
        self.max_order = min(int(max_order), MAX_ORDER)
        self.name = unparse(self.node) if not isinstance(source, str) else source

    def _taylor(self, t, order):
        result = evaluate(self.node, Jet.variable(t, order), _JetOps)
        if not isinstance(result, Jet):
            return Jet.constant(result, order).coeffs
        return result.coeffs

    def __call__(self, t):
        t = float(t)
        self.check_point(t)
        return float(evaluate(self.node, t, _FloatOps))

    def complex_value(self, z):
        return complex(evaluate(self.node, complex(z), _ComplexOps))


# -- closed-form catalog -----------------------------------------------------


def gbinom(p, order):
    """Generalized binomial coefficients ``binom(p, k)`` for ``k = 0..order``."""
    k = np.arange(order + 1, dtype=float)
    factors = np.ones(order + 1)
    factors[1:] = (p - k[:-1]) / k[1:]
    return np.cumprod(factors)


class PowerFunction(FunctionOracle):
    """``coef * x**p``; non-integer ``p`` lives on ``(0, inf)``."""

    analytic = True

    def __init__(self, p, coef=1.0):
        self.p = float(p)
        self.coef = float(coef)
        integral = self.p.is_integer()
        self.domain = (-_INF, _INF) if integral else (0.0, _INF)
        self.singularities = () if integral and self.p >= 0 else (0j,)
        self.name = f"{self.coef:g}*x^{self.p:g}"

    def _taylor(self, t, order):
        p = self.p
        if t == 0.0 and p < 0:
            raise DomainError(f"{self.name} is singular at 0")
        k = np.arange(order + 1)
        b = gbinom(p, order)
        if p.is_integer() and p >= 0:
            c = np.zeros(order + 1)
            top = min(order, int(p))
            kk = k[: top + 1]
            c[: top + 1] = b[: top + 1] * float(t) ** (p - kk)
            return self.coef * c
        return self.coef * b * np.power(float(t), p - k)

    def complex_value(self, z):
        z = complex(z)
        if self.p.is_integer():
            return self.coef * z ** int(self.p)
        return self.coef * cmath.exp(self.p * cmath.log(z))


class ExpFunction(FunctionOracle):
    analytic = True
    singularities = ()
    name = "exp"

    def _taylor(self, t, order):
        k = np.arange(order + 1)
        return math.exp(t) / np.array([math.factorial(j) for j in k], dtype=float)

    def complex_value(self, z):
        return cmath.exp(z)


class LogFunction(FunctionOracle):
    analytic = True
    domain = (0.0, _INF)
    singularities = (0j,)
    name = "log"

    def _taylor(self, t, order):
        c = np.empty(order + 1)
        c[0] = math.log(t)
        for k in range(1, order + 1):
            c[k] = (-1.0) ** (k + 1) / (k * t**k)
        return c

    def complex_value(self, z):
        return cmath.log(z)


class XLogXFunction(FunctionOracle):
    analytic = True
    domain = (0.0, _INF)
    singularities = (0j,)
    name = "x*log(x)"

    def _taylor(self, t, order):
        c = np.empty(order + 1)
        c[0] = t * math.log(t)
        if order >= 1:
            c[1] = math.log(t) + 1.0
        for k in range(2, order + 1):
            c[k] = (-1.0) ** k * t ** (1 - k) / (k * (k - 1))
        return c

    def complex_value(self, z):
        return z * cmath.log(z)


class Resolvent(FunctionOracle):
    """``h_z(x) = 1 / (z - x)`` with exact derivatives ``k! (z - x)^(-k-1)``.

    ``z`` may be complex, in which case Taylor coefficients are complex.
    """

    analytic = True

    def __init__(self, z):
        self.z = complex(z) if isinstance(z, complex) else float(z)
        self.singularities = (complex(z),)
        self.name = f"1/({z}-x)"

    def _taylor(self, t, order):
        d = self.z - t
        if d == 0:
            raise DomainError(f"resolvent evaluated at its pole {self.z!r}")
        return d ** -(np.arange(order + 1) + 1.0)

    def taylor(self, t, order):
        t = float(t)
        self.check_point(t, order)
        return self._taylor(t, order)

    def __call__(self, t):
        v = self.taylor(t, 0)[0]
        return v if isinstance(self.z, complex) else float(v)

    def complex_value(self, z):
        if z == self.z:
            raise DomainError("resolvent evaluated at its pole")
        return 1.0 / (self.z - z)


class PolynomialFunction(FunctionOracle):
    """Oracle for an explicit polynomial; derivatives by coefficient arithmetic."""

    analytic = True
    singularities = ()

    def __init__(self, poly):
        self.poly = poly
        self.name = f"poly{tuple(poly.coeffs)}"

    def _taylor(self, t, order):
        c = np.zeros(order + 1)
        shifted = self.poly.taylor_coeffs(t)
        m = min(order + 1, len(shifted))
        c[:m] = shifted[:m]
        return c

    def complex_value(self, z):
        return self.poly(complex(z))


class RationalFunctionOracle(FunctionOracle):
    """``numerator / denominator`` for explicit polynomials."""

    analytic = True

    def __init__(self, numerator, denominator, poles=None):
        self.numerator = numerator
        self.denominator = denominator
        self.singularities = None if poles is None else tuple(complex(p) for p in poles)
        self.name = "rational"

    def _taylor(self, t, order):
        a = np.zeros(order + 1)
        b = np.zeros(order + 1)
        na = self.numerator.taylor_coeffs(t)[: order + 1]
        nb = self.denominator.taylor_coeffs(t)[: order + 1]
        a[: len(na)] = na
        b[: len(nb)] = nb
        if b[0] == 0.0:
            raise DomainError(f"rational function has a pole at {t!r}")
        return (Jet(a) / Jet(b)).coeffs

    def complex_value(self, z):
        return self.numerator(complex(z)) / self.denominator(complex(z))


class LinearCombination(FunctionOracle):
    """``sum(w * f for w, f in terms)``."""

    def __init__(self, terms):
        self.terms = tuple((float(w), f) for w, f in terms)
        lo = max(f.domain[0] for _, f in self.terms)
        hi = min(f.domain[1] for _, f in self.terms)
        self.domain = (lo, hi)
        self.max_order = min(f.max_order for _, f in self.terms)
        self.analytic = all(f.analytic for _, f in self.terms)
        self.name = " + ".join(f"{w:g}*({f.name})" for w, f in self.terms)

    def _taylor(self, t, order):
        return sum(w * f.taylor(t, order) for w, f in self.terms)

    def complex_value(self, z):
        return sum(w * f.complex_value(z) for w, f in self.terms)


class AffinePullback(FunctionOracle):
    """``x -> f(alpha * x + beta)`` for ``alpha > 0``."""

    def __init__(self, f, alpha, beta):
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        self.f, self.alpha, self.beta = f, float(alpha), float(beta)
        a, b = f.domain
        self.domain = ((a - beta) / alpha, (b - beta) / alpha)
        self.max_order = f.max_order
        self.analytic = f.analytic
        self.name = f"{f.name} o ({alpha:g}x+{beta:g})"

    def _taylor(self, t, order):
        c = self.f.taylor(self.alpha * t + self.beta, order)
        return c * self.alpha ** np.arange(order + 1)

    def complex_value(self, z):
        return self.f.complex_value(self.alpha * z + self.beta)


def function_from_text(text, domain=(-_INF, _INF), max_order=MAX_ORDER):
    return ExpressionFunction(text, domain=domain, max_order=max_order)


#: name -> (factory, a default interval where the function is smooth)
CATALOG = {
    "x": (lambda: PowerFunction(1), (0.1, 10.0)),
    "x^2": (lambda: PowerFunction(2), (0.1, 10.0)),
    "x^3": (lambda: PowerFunction(3), (0.1, 10.0)),
    "sqrt": (lambda: PowerFunction(0.5), (0.1, 10.0)),
    "inv": (lambda: PowerFunction(-1), (0.1, 10.0)),
    "neg_inv": (lambda: PowerFunction(-1, coef=-1.0), (0.1, 10.0)),
    "log": (LogFunction, (0.1, 10.0)),
    "exp": (ExpFunction, (-1.0, 1.0)),
    "xlogx": (XLogXFunction, (0.1, 10.0)),
    "x^1.5": (lambda: PowerFunction(1.5), (0.1, 10.0)),
}

#: Expression text equivalent to each catalog entry.
CATALOG_TEXT = {
    "x": "x",
    "x^2": "x^2",
    "x^3": "x^3",
    "sqrt": "sqrt(x)",
    "inv": "1/x",
    "neg_inv": "-1/x",
    "log": "log(x)",
    "exp": "exp(x)",
    "xlogx": "x*log(x)",
    "x^1.5": "x^1.5",
}


def catalog(name):
    return CATALOG[name][0]()


def resolvent(z):
    return Resolvent(z)
