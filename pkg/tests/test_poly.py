import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmcheck.poly import (
    Polynomial,
    RationalFunction,
    ResidueError,
    derivative_poly,
    merge_roots,
    poly_from_roots,
    residue,
)


def test_poly_from_roots_examples():
    assert poly_from_roots((0.0, 1.0)).to_list() == [0.0, -1.0, 1.0]
    assert poly_from_roots(()).to_list() == [1.0]
    assert poly_from_roots((2.0, 2.0)).to_list() == [4.0, -4.0, 1.0]


def test_derivative_poly_examples():
    assert derivative_poly(Polynomial([0.0, -1.0, 1.0]), 1).to_list() == [-1.0, 2.0]
    assert derivative_poly(Polynomial([5.0]), 1).degree == -1
    assert derivative_poly(Polynomial([0, 0, 0, 1.0]), 3).to_list() == [6.0]


def test_polynomial_origin_arithmetic():
    p = Polynomial([1.0, 2.0], origin=1.0)  # 1 + 2 (t - 1)
    q = Polynomial([0.0, 1.0])  # t
    r = p * q - q
    for t in (-1.0, 0.3, 2.5):
        assert r(t) == pytest.approx(p(t) * t - t)
        assert r.naive_eval(t) == pytest.approx(r(t))
    assert p.integral(1.0, 2.0) == pytest.approx(2.0)


def test_residue_examples():
    r = RationalFunction(Polynomial([1.0]), [(0.0, 1), (1.0, 1)])
    assert residue(r, 0.0, 1) == pytest.approx(-1.0)
    assert residue(RationalFunction(Polynomial([1.0]), [(0.0, 2)]), 0.0, 2) == 0.0


def test_kernel_residue_example():
    # -(z - t)^2 / (z^2 (z - 1)^2) at z = 0 equals 2t(1 - t)
    for t in (0.0, 0.25, 0.5, 0.9):
        num = Polynomial([-t * t, 2 * t, -1.0])
        r = RationalFunction(num, [(0.0, 2), (1.0, 2)])
        assert residue(r, 0.0, 2) == pytest.approx(2 * t * (1 - t), abs=1e-15)


def test_residue_errors():
    r = RationalFunction(Polynomial([1.0]), [(0.0, 2)])
    with pytest.raises(ResidueError):
        residue(r, 0.0, 1)
    with pytest.raises(ResidueError):
        residue(r, 3.0, 1)


def test_merge_roots():
    assert merge_roots([(0.0, 2), (1.0, 1), (1.0 + 1e-14, 2)]) == ((0.0, 2), (1.0, 3))


def _random_rational(rng):
    k = int(rng.integers(1, 5))
    roots = np.sort(rng.uniform(-3, 3, k))
    mult = rng.integers(1, 4, k)
    total = int(mult.sum())
    num = Polynomial(rng.normal(size=max(total - 1, 1)))
    poles = list(zip(roots.tolist(), mult.tolist()))
    return RationalFunction(num, poles), poles


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_sum_of_residues_vanishes(seed):
    rng = np.random.default_rng(seed)
    r, poles = _random_rational(rng)
    if r.decay_order < 2:
        return
    res = [residue(r, p, m) for p, m in merge_roots(poles)]
    scale = max(1.0, max(abs(v) for v in res))
    assert abs(math.fsum(res)) <= 1e-10 * scale


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-3, 3), st.floats(-3, 3))
def test_residue_linearity(seed, alpha, beta):
    rng = np.random.default_rng(seed)
    r, poles = _random_rational(rng)
    other = Polynomial(rng.normal(size=3))
    r2 = RationalFunction(other, poles)
    combo = RationalFunction(r.numerator * alpha + other * beta, poles)
    for p, m in merge_roots(poles):
        lhs = residue(combo, p, m)
        rhs = alpha * residue(r, p, m) + beta * residue(r2, p, m)
        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


def test_simple_residue_matches_limit(rng):
    for _ in range(20):
        roots = np.sort(rng.uniform(-3, 3, 3))
        if np.diff(roots).min() < 0.2:
            continue
        r = RationalFunction(Polynomial(rng.normal(size=2)), [(x, 1) for x in roots])
        p = roots[1]
        # Richardson extrapolation of (z - p) r(z), error O(h)
        g = [h * r(p + h) for h in (1e-3, 1e-4)]
        limit = (10 * g[1] - g[0]) / 9
        assert residue(r, p, 1) == pytest.approx(limit, rel=1e-6, abs=1e-12)
