"""Argument checks shared by the certifiers and the CLI."""

from __future__ import annotations

import math
import numbers

from sklearn.utils.validation import check_scalar

from mmcheck.errors import DomainError, MmcheckError

PROPERTIES = ("monotone", "convex")


class ValidationError(MmcheckError, ValueError):
    pass


def check_interval(interval):
    """Return ``(a, b)`` as floats with ``a < b``, both finite."""
    try:
        a, b = (float(v) for v in interval)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"interval must be a pair of numbers, got {interval!r}") from exc
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValidationError("interval endpoints must be finite")
    if not a < b:
        raise ValidationError(f"interval needs a < b, got ({a}, {b})")
    return a, b


def check_order(n, name="n"):
    try:
        return check_scalar(n, name, numbers.Integral, min_val=2)
    except (TypeError, ValueError) as exc:
        raise ValidationError(str(exc)) from exc


def check_positive_int(value, name, min_val=1):
    try:
        return check_scalar(value, name, numbers.Integral, min_val=min_val)
    except (TypeError, ValueError) as exc:
        raise ValidationError(str(exc)) from exc


def check_tolerance(tol, name="tol"):
    try:
        return float(check_scalar(tol, name, numbers.Real, min_val=0.0, include_boundaries="neither"))
    except (TypeError, ValueError) as exc:
        raise ValidationError(str(exc)) from exc


def check_property(prop):
    if prop not in PROPERTIES:
        raise ValidationError(f"property must be one of {PROPERTIES}, got {prop!r}")
    return prop


def check_smoothness(f, needed, what):
    if f.max_order < needed:
        raise ValidationError(
            f"{what} needs derivatives up to order {needed}, {f.name} provides {f.max_order}"
        )


def check_inside(f, interval):
    a, b = interval
    lo, hi = f.domain
    if a < lo or b > hi:
        raise DomainError(f"interval ({a}, {b}) leaves the domain ({lo}, {hi}) of {f.name}")
