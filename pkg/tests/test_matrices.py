import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmcheck.errors import DomainError
from mmcheck.expr import LinearCombination, catalog, resolvent
from mmcheck.matrices import (
    coeff_matrix,
    hankel_k,
    hankel_m,
    jacobi_eigh,
    kraus,
    loewner,
    matrix_function,
    psd_verdict,
)

F = {name: catalog(name) for name in ("x", "x^2", "x^3", "neg_inv", "inv", "exp", "sqrt", "log")}


def test_loewner_examples():
    np.testing.assert_array_equal(loewner(F["x"], (0.3, 1.0, 2.0)), np.ones((3, 3)))
    np.testing.assert_allclose(loewner(F["x^2"], (0.0, 1.0)), [[0, 1], [1, 2]])
    np.testing.assert_allclose(loewner(F["neg_inv"], (1.0, 2.0)), [[1, 0.5], [0.5, 0.25]])


def test_kraus_examples():
    np.testing.assert_allclose(kraus(F["x^2"], 0.7, (0.2, 1.0, 3.0)), np.ones((3, 3)))
    np.testing.assert_allclose(kraus(F["x"], 0.7, (0.2, 1.0)), np.zeros((2, 2)), atol=1e-15)
    K = kraus(F["x^3"], 1.0, (1.0, 2.0))
    np.testing.assert_allclose(K, [[3, 4], [4, 5]])
    assert not psd_verdict(K).is_psd


def test_hankel_examples():
    np.testing.assert_allclose(hankel_m(F["neg_inv"], 1.0, 2), [[1, -1], [-1, 1]])
    M = hankel_m(F["exp"], 0.0, 2)
    np.testing.assert_allclose(M, [[1, 0.5], [0.5, 1 / 6]])
    assert np.linalg.det(M) == pytest.approx(-1 / 12)
    M3 = hankel_m(F["x^3"], 1.0, 2)
    np.testing.assert_allclose(M3, [[3, 3], [3, 1]])
    np.testing.assert_allclose(hankel_k(F["x^2"], 4.2, 2), [[1, 0], [0, 0]])
    np.testing.assert_allclose(hankel_k(F["inv"], 1.0, 2), [[1, -1], [-1, 1]])
    for t in (0.5, 2.0):
        K = hankel_k(F["x^3"], t, 2)
        np.testing.assert_allclose(K, [[3 * t, 1], [1, 0]])


def test_coeff_matrix_examples():
    t = 0.3
    np.testing.assert_allclose(coeff_matrix(t, (0.0, 1.0)), [[1, 1], [t - 1, t]])
    np.testing.assert_allclose(coeff_matrix(0.0, (0.0, 1.0)), [[1, 1], [-1, 0]])
    C = coeff_matrix(0.7, (0.1, 0.4, 1.1, 2.0))
    np.testing.assert_array_equal(C[0], np.ones(4))


def test_psd_verdict_examples():
    v = psd_verdict([[1.0, 0.0], [0.0, 0.0]])
    assert v.is_psd and v.min_eigenvalue == 0.0
    assert not psd_verdict([[0.0, 1.0], [1.0, 2.0]]).is_psd
    v = psd_verdict([[2.0, 1.0], [1.0, 2.0]])
    assert v.is_psd and v.min_eigenvalue == pytest.approx(1.0)
    with pytest.raises(ValueError):
        psd_verdict([[1.0, 2.0], [0.0, 1.0]])
    v = psd_verdict(np.diag([1.0, -1e-12]))
    assert v.is_psd and v.near_boundary


def test_matrix_function_examples():
    np.testing.assert_allclose(matrix_function(F["x^2"], np.diag([1.0, 2.0])), np.diag([1.0, 4.0]), atol=1e-14)
    A = np.array([[2.0, 1.0], [1.0, 2.0]])
    np.testing.assert_allclose(matrix_function(F["x"], A), A, atol=1e-12)
    np.testing.assert_allclose(matrix_function(F["inv"], A), np.array([[2, -1], [-1, 2]]) / 3, atol=1e-14)
    with pytest.raises(DomainError):
        matrix_function(F["log"], np.diag([1.0, -1.0]))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 10**6))
def test_jacobi_matches_numpy(n, seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, n))
    A = X + X.T
    w, V = jacobi_eigh(A)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(A), atol=1e-12 * max(1.0, np.abs(A).max()))
    np.testing.assert_allclose(V @ np.diag(w) @ V.T, A, atol=1e-12 * max(1.0, np.abs(A).max()))
    np.testing.assert_allclose(V.T @ V, np.eye(n), atol=1e-13)


def _tuple(rng, n, a=0.2, b=5.0):
    while True:
        pts = np.sort(rng.uniform(a, b, n))
        if np.diff(pts).min() > 1e-3:
            return tuple(pts)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), st.integers(0, 10**6), st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(n, seed, alpha, beta):
    rng = np.random.default_rng(seed)
    f, g = F["sqrt"], F["log"]
    h = LinearCombination([(alpha, f), (beta, g)])
    lam = _tuple(rng, n)
    l0 = float(rng.uniform(0.2, 5.0))
    t = float(rng.uniform(0.2, 5.0))
    for build in (
        lambda u: loewner(u, lam),
        lambda u: kraus(u, l0, lam),
        lambda u: hankel_m(u, t, n),
        lambda u: hankel_k(u, t, n),
    ):
        lhs = build(h)
        rhs = alpha * build(f) + beta * build(g)
        assert np.abs(lhs - rhs).max() <= 1e-10 * max(1.0, np.abs(rhs).max())


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10**6))
def test_permutation_covariance(n, seed):
    rng = np.random.default_rng(seed)
    lam = np.array(_tuple(rng, n))
    perm = rng.permutation(n)
    P = np.eye(n)[perm]
    for f in (F["sqrt"], F["exp"], F["x^3"]):
        L = loewner(f, lam)
        np.testing.assert_allclose(loewner(f, lam[perm]), P @ L @ P.T, rtol=1e-12, atol=1e-14)


def _outside(rng, lam):
    lo, hi = min(lam), max(lam)
    d = rng.uniform(0.1, 5.0)
    return hi + d if rng.random() < 0.5 else lo - d


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10**6))
def test_resolvent_factorizations(n, seed):
    rng = np.random.default_rng(seed)
    lam = _tuple(rng, n, 0.0, 1.0)
    z = _outside(rng, lam)
    h = resolvent(z)
    t = float(rng.uniform(0.0, 1.0))
    v = (z - t) ** -np.arange(n)
    M = hankel_m(h, t, n)
    ref = np.outer(v, v) / (z - t) ** 2
    assert np.abs(M - ref).max() <= 1e-10 * np.abs(ref).max()
    K = hankel_k(h, t, n)
    assert np.abs(K - M / (z - t)).max() <= 1e-10 * np.abs(K).max()


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10**6))
def test_inverse_d_identity(n, seed):
    rng = np.random.default_rng(seed)
    lam = _tuple(rng, n, 0.0, 1.0)
    z = _outside(rng, lam)
    h = resolvent(z)
    t = float(rng.uniform(0.0, 1.0))
    C = coeff_matrix(t, lam)
    lhs = C.T @ hankel_m(h, t, n) @ C
    rhs = loewner(h, lam) * math.prod(z - r for r in lam) ** 2 / (z - t) ** (2 * n)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-9)


def test_resolvent_loewner_closed_form():
    z, lam = 5.0, (0.1, 0.6, 0.9)
    L = loewner(resolvent(z), lam)
    ref = 1.0 / np.outer(z - np.array(lam), z - np.array(lam))
    np.testing.assert_allclose(L, ref, rtol=1e-13)
    assert math.isclose(psd_verdict(L).min_eigenvalue, 0.0, abs_tol=1e-12)
