"""Acceptance gate: one test per criterion, each reporting PASS/FAIL.

Run with ``pytest tests/test_acceptance.py -v``; the summary section lists
one line per criterion with the measured figure against its threshold.
"""

import json
import math

import numpy as np
import pytest

from conftest import ACCEPTANCE
from mmcheck.classify import (
    CERTIFIED,
    MARGINAL,
    REFUTED,
    CertificationRequest,
    certify_convex,
    certify_monotone,
    divided_connection_defect,
    monotone_from_convex,
    random_tuple,
)
from mmcheck.cli import run
from mmcheck.divided import divided_difference, divided_difference_contour, mean_value_bounds
from mmcheck.expr import CATALOG, CATALOG_TEXT, catalog, resolvent
from mmcheck.kernels import check_normalization_i, check_normalization_j, weight_i, weight_j
from mmcheck.matrices import coeff_matrix, hankel_m, kraus, loewner
from mmcheck.represent import verify_kraus_representation, verify_loewner_representation

REPRESENTATION_FUNCTIONS = ["x^2", "x^3", "exp", "log", "sqrt", "inv", "neg_inv", "x^1.5"]
MONOTONE = {"x", "sqrt", "log", "neg_inv"}
CONVEX = {"x", "x^2", "inv", "xlogx", "x^1.5"}
CONVEX_MEMBERS = ["x^2", "inv", "xlogx", "x^1.5"]


def _record(label, ok, detail):
    ACCEPTANCE[label] = (bool(ok), detail)
    assert ok, f"{label}: {detail}"


def _interval(name):
    return CATALOG[name][1]


def _rng(criterion):
    return np.random.default_rng([20240611, criterion])


def test_criterion_1_loewner_representation():
    rng = _rng(1)
    worst = 0.0
    for name in REPRESENTATION_FUNCTIONS:
        f = catalog(name)
        for n in (2, 3, 4, 5):
            for _ in range(20):
                lam = random_tuple(rng, _interval(name), n)
                worst = max(worst, verify_loewner_representation(f, lam).max_rel_defect)
    _record("1 Loewner representation", worst < 1e-7, f"max rel defect {worst:.2e} (< 1e-07)")


def _lambda0(rng, interval, lam, inside):
    a, b = interval
    lo, hi = lam[0], lam[-1]
    if inside:
        return float(rng.uniform(lo, hi))
    if (lo - a) > (b - hi):
        return float(rng.uniform(a, lo))
    return float(rng.uniform(hi, b))


def test_criterion_2_kraus_representation():
    rng = _rng(2)
    worst = worst_triple = 0.0
    for name in REPRESENTATION_FUNCTIONS:
        f = catalog(name)
        iv = _interval(name)
        for n in (2, 3, 4, 5):
            for k in range(20):
                lam = random_tuple(rng, iv, n)
                l0 = _lambda0(rng, iv, lam, inside=k % 2 == 0)
                worst = max(worst, verify_kraus_representation(f, l0, lam).max_rel_defect)
                l0 = float(lam[rng.integers(n)])
                worst_triple = max(worst_triple, verify_kraus_representation(f, l0, lam).max_rel_defect)
    ok = worst < 1e-7 and worst_triple < 1e-6
    _record(
        "2 Kraus representation",
        ok,
        f"max rel defect {worst:.2e} (< 1e-07), lambda0 on a point {worst_triple:.2e} (< 1e-06)",
    )


def _kernel_instance(rng):
    n = int(rng.integers(2, 7))
    lam = tuple(random_tuple(rng, (-2.0, 3.0), n))
    mode = rng.integers(3)
    if mode == 0:
        l0 = float(lam[rng.integers(n)])
    elif mode == 1:
        l0 = float(rng.uniform(lam[0], lam[-1]))
    else:
        l0 = float(rng.uniform(-3.0, 4.0))
    return lam, l0, n


def test_criterion_3_kernel_positivity_and_mass():
    rng = _rng(3)
    worst_neg = worst_mass = 0.0
    for _ in range(200):
        lam, l0, n = _kernel_instance(rng)
        for k, mass in ((weight_i(lam), 1 / (2 * n - 1)), (weight_j(l0, lam), 1 / (2 * n))):
            vals = k(k.grid(2048))
            worst_neg = max(worst_neg, -vals.min() / vals.max())
            worst_mass = max(worst_mass, abs(k.integral() - mass) / mass)
    ok = worst_neg <= 1e-12 and worst_mass < 1e-10
    _record(
        "3 Kernel positivity and mass",
        ok,
        f"min/peak {-worst_neg:.2e} (>= -1e-12), mass rel error {worst_mass:.2e} (< 1e-10)",
    )


def test_criterion_4_normalization():
    rng = _rng(4)
    worst = 0.0
    for _ in range(40):
        lam, l0, n = _kernel_instance(rng)
        ki, kj = weight_i(lam), weight_j(l0, lam)
        lo, hi = kj.support
        for _ in range(50):
            d = 10.0 ** rng.uniform(-1.5, 1.5)
            z = hi + d if rng.random() < 0.5 else lo - d
            worst = max(worst, check_normalization_i(ki, lam, z), check_normalization_j(kj, l0, lam, z))
    _record("4 Kernel normalization", worst < 1e-9, f"max defect {worst:.2e} (< 1e-09)")


def test_criterion_5_inverse_d_identity():
    rng = _rng(5)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 7))
        lam = random_tuple(rng, (0.0, 1.0), n)
        d = 10.0 ** rng.uniform(-1.0, 1.0)
        z = 1.0 + d if rng.random() < 0.5 else -d
        t = float(rng.uniform(0.0, 1.0))
        h = resolvent(z)
        C = coeff_matrix(t, lam)
        lhs = C.T @ hankel_m(h, t, n) @ C
        rhs = loewner(h, lam) * math.prod(z - x for x in lam) ** 2 / (z - t) ** (2 * n)
        worst = max(worst, float(np.max(np.abs(lhs - rhs) / np.abs(rhs))))
    _record("5 Resolvent identity", worst < 1e-9, f"max entrywise rel defect {worst:.2e} (< 1e-09)")


def _closed_form_witnesses():
    problems = []
    x3, ex = catalog("x^3"), catalog("exp")
    for prop, f, iv, det in (
        ("monotone", x3, _interval("x^3"), lambda t: -6 * t * t),
        ("convex", x3, _interval("x^3"), lambda t: -1.0),
        ("monotone", ex, _interval("exp"), lambda t: -math.exp(2 * t) / 12),
    ):
        req = CertificationRequest(f, iv, 2, prop, trials=0)
        rep = (certify_monotone if prop == "monotone" else certify_convex)(req)
        w = next((w for w in rep.witnesses if w.method == "hankel"), None)
        if rep.verdict != REFUTED or w is None:
            problems.append(f"{prop} {f.name}: no hankel witness")
            continue
        t = w.location["t"]
        got = float(np.linalg.det(np.array(w.matrix)))
        if not math.isclose(got, det(t), rel_tol=1e-9):
            problems.append(f"{prop} {f.name}: det {got} vs {det(t)}")
    return problems


def test_criterion_6_criterion_equivalence():
    disagreements, wrong, marginal = [], [], 0
    for prop, expected in (("monotone", MONOTONE), ("convex", CONVEX)):
        certify = certify_monotone if prop == "monotone" else certify_convex
        for name in sorted(CATALOG):
            for n in (2, 3, 4):
                req = CertificationRequest(catalog(name), _interval(name), n, prop, trials=200)
                rep = certify(req)
                verdicts = {m: r.verdict for m, r in rep.methods.items() if r.verdict != MARGINAL}
                marginal += len(rep.methods) - len(verdicts)
                if len(set(verdicts.values())) > 1:
                    disagreements.append(f"{prop} {name} n={n}: {verdicts}")
                want = CERTIFIED if name in expected else REFUTED
                if rep.verdict != want:
                    wrong.append(f"{prop} {name} n={n}: {rep.verdict}")
    problems = disagreements + wrong + _closed_form_witnesses()
    detail = (
        f"60 cases, {len(disagreements)} disagreements, {len(wrong)} misclassified, "
        f"{marginal} marginal route verdicts, closed-form witnesses {'ok' if not problems else problems}"
    )
    _record("6 Criterion equivalence", not problems, detail)


def test_criterion_7_divided_connection():
    rng = _rng(7)
    worst = 0.0
    names = sorted(CATALOG)
    for k in range(100):
        name = names[k % len(names)]
        iv = _interval(name)
        f = catalog(name)
        n = int(rng.integers(2, 6))
        lam = random_tuple(rng, iv, n)
        l0 = float(rng.uniform(*iv))
        scale = max(1.0, float(np.abs(kraus(f, l0, lam)).max()))
        worst = max(worst, divided_connection_defect(f, l0, lam) / scale)
    transport = []
    for name in CONVEX_MEMBERS:
        f, iv = catalog(name), _interval(name)
        conv = certify_convex(CertificationRequest(f, iv, 3, "convex"))
        for l0 in rng.uniform(*iv, size=5):
            g = monotone_from_convex(f, l0)
            mono = certify_monotone(CertificationRequest(g, iv, 3, "monotone", grid_size=64, random_tuples=16))
            transport.append(conv.verdict == CERTIFIED and mono.verdict == CERTIFIED)
    ok = worst < 1e-10 and all(transport)
    _record(
        "7 Divided-difference connection",
        ok,
        f"max entrywise defect {worst:.2e} (< 1e-10), transport {sum(transport)}/{len(transport)} certified",
    )


def test_criterion_8_divided_difference_oracles():
    rng = _rng(8)
    worst = 0.0
    for name in sorted(CATALOG):
        f = catalog(name)
        if not f.analytic:
            continue
        # the contour circle must stay clear of the branch point at 0
        iv = (-1.0, 1.0) if name == "exp" else (1.0, 3.0)
        for n in range(1, 7):
            for _ in range(20):
                pts = random_tuple(rng, iv, n)
                rec = divided_difference(f, pts)
                con = divided_difference_contour(f, pts)
                cond = sum(abs(f(p) / math.prod(p - q for q in pts if q != p)) for p in pts)
                worst = max(worst, abs(rec - con) / max(abs(rec), 1e-6 * cond))
    violation = 0.0
    checked = 0
    for name in sorted(CATALOG):
        f, iv = catalog(name), _interval(name)
        for n in range(1, 7):
            for _ in range(20):
                pts = random_tuple(rng, iv, n)
                v = divided_difference(f, pts)
                lo, hi = mean_value_bounds(f, pts)
                slack = 1e-9 * max(1.0, abs(lo), abs(hi))
                violation = max(violation, lo - slack - v, v - hi - slack)
                checked += 1
    ok = worst < 1e-10 and violation <= 0.0
    _record(
        "8 Divided-difference oracles",
        ok,
        f"recursive vs contour {worst:.2e} (< 1e-10), mean-value violations 0 of {checked}"
        if violation <= 0
        else f"recursive vs contour {worst:.2e}, mean-value excess {violation:.2e}",
    )


def test_criterion_9_determinism_and_exit_codes(tmp_path, capsys):
    base = ["classify", "--property", "monotone", "--function", "log(x)", "--interval", "0.1,10", "--n", "3",
            "--seed", "3", "--format", "json"]
    outputs = []
    for i in range(3):
        path = tmp_path / f"r{i}.json"
        run(base + ["--output", str(path)])
        outputs.append(path.read_bytes())
    deterministic = len(set(outputs)) == 1 and json.loads(outputs[0])["status"] == CERTIFIED
    script = []
    for name in sorted(CATALOG):
        a, b = _interval(name)
        for prop, members in (("monotone", MONOTONE), ("convex", CONVEX)):
            argv = ["classify", "--property", prop, "--function", CATALOG_TEXT[name], "--interval", f"{a},{b}",
                    "--n", "2", "--trials", "50"]
            script.append((argv, 0 if name in members else 1))
    script += [
        (["classify", "--property", "monotone", "--function", "sqrt(", "--interval", "0.1,10", "--n", "2"], 2),
        (["classify", "--property", "monotone", "--function", "log(x)", "--interval", "-1,1", "--n", "2"], 2),
        (["classify", "--property", "monotone", "--function", "x", "--interval", "2,1", "--n", "2"], 2),
        (["classify", "--property", "monotone", "--function", "x", "--interval", "0,1", "--n", "0"], 2),
        (["classify", "--property", "monotone"], 2),
    ]
    mismatches = []
    for argv, want in script:
        got = run(argv)
        capsys.readouterr()
        if got != want:
            mismatches.append(f"{' '.join(argv)} -> {got} (want {want})")
    ok = deterministic and not mismatches
    _record(
        "9 Determinism and exit codes",
        ok,
        f"3 identical JSON reports: {deterministic}; exit codes {len(script) - len(mismatches)}/{len(script)} as expected",
    )


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
