"""Acceptance criteria 1-9, each at its stated tolerance.

Every test records a one-line summary; the PASS/FAIL lines are printed in
the terminal summary (see conftest.py) and also to stdout (visible with -s).
"""

import math
import time

import numpy as np
import pytest

from bohrlab import extremal, harness
from bohrlab.extremal import FamilySpec, family_bohr_closed_form, t1_threshold
from bohrlab.powser import TruncatedSeries
from bohrlab.radii import RadiusSpec, radius_of

INF = math.inf


def value(id, K=None, p=None):
    return radius_of(RadiusSpec(id, K=K, p=p)).value


def say(criterion, n, detail):
    criterion(n, detail)
    print(f"criterion {n}: {detail}")


def test_criterion_1_closed_form_table(criterion):
    checks = {
        "Thm1(1)": (value("Thm1", 1), 1 / 3, 1e-15),
        "Thm1(inf)": (value("Thm1", INF), 1 / 5, 1e-15),
        "Thm1(3)": (value("Thm1", 3), 4 / 16, 1e-15),
        "Thm2(inf)": (value("Thm2", INF), 1 / 3, 1e-15),
        "Thm4": (value("Thm4"), 0.467707, 1e-6),
        "Thm5": (value("Thm5", p=2), 1 / 2, 1e-15),
        "Thm7": (value("Thm7"), 1 / 3, 1e-15),
        "Cor1a": (value("Cor1a"), 1 / 5, 1e-15),
        "Cor1b": (value("Cor1b"), 1 / 3, 1e-15),
        "Cor2": (value("Cor2"), 1 / 5, 1e-15),
    }
    bad = [k for k, (got, want, tol) in checks.items() if abs(got - want) > tol]
    say(criterion, 1, f"closed-form radii ({len(checks) - len(bad)}/{len(checks)} match)")
    assert not bad, bad
    assert value("Thm4") == pytest.approx(math.sqrt(7 / 32), abs=1e-15)


@pytest.mark.parametrize(
    "id,K,target,tol",
    [
        ("Cor3Lower", None, 0.2942, 5e-4),
        ("Cor3Upper", None, 0.299825, 1e-5),
        ("Rem1Lower", INF, 0.435668, 1e-5),
        ("Rem1Upper", INF, 0.44182, 1e-4),
        ("Thm8Lower", None, 0.55356, 1e-5),
    ],
)
def test_criterion_2_transcendental_roots(id, K, target, tol):
    t = time.perf_counter()
    got = value(id, K)
    dt = time.perf_counter() - t
    assert abs(got - target) <= tol, (id, got)
    assert dt < 0.1, f"{id} took {dt:.3f} s"


def test_criterion_2_summary(criterion):
    rows = []
    for id, K, target, tol in [
        ("Cor3Lower", None, 0.2942, 5e-4),
        ("Cor3Upper", None, 0.299825, 1e-5),
        ("Rem1Lower", INF, 0.435668, 1e-5),
        ("Rem1Upper", INF, 0.44182, 1e-4),
        ("Thm8Lower", None, 0.55356, 1e-5),
    ]:
        t = time.perf_counter()
        got = value(id, K)
        rows.append((id, got, abs(got - target) <= tol, time.perf_counter() - t))
    worst = max(r[3] for r in rows)
    say(criterion, 2, ", ".join(f"{i}={g:.7g}" for i, g, _, _ in rows) + f" (slowest {worst * 1e3:.1f} ms)")
    assert all(ok for _, _, ok, _ in rows)
    assert worst < 0.1


def test_criterion_3_bloch_search(criterion):
    t = time.perf_counter()
    res = extremal.bloch_sharpness_search()
    dt = time.perf_counter() - t
    say(
        criterion,
        3,
        f"a*={res.a_star:.6f} r*={res.r_star:.7f} cubic residual {abs(res.cubic_residual):.1e} "
        f"stationarity relative {res.stationarity_residual:.1e} in {dt:.2f} s",
    )
    assert abs(res.a_star - 0.3775) <= 1e-3
    assert abs(res.r_star - 0.624162) <= 1e-4
    assert abs(res.cubic_residual) <= 1e-6
    assert res.stationarity_residual <= 1e-3
    assert dt <= 1.0


def test_criterion_4_exact_identities(criterion):
    t4 = family_bohr_closed_form(FamilySpec("T4", 3 / math.sqrt(14)), math.sqrt(7 / 32))
    worst_t1 = 0.0
    for a in np.linspace(0.05, 0.99, 20):
        for k in np.linspace(0.0, 1.0, 11):
            r = t1_threshold(a, k)
            worst_t1 = max(worst_t1, abs(family_bohr_closed_form(FamilySpec("T1", a, k), r) - 1))
    t8 = family_bohr_closed_form(FamilySpec("T8", 0.3775), 0.624162)
    say(criterion, 4, f"|T4-1|={abs(t4 - 1):.1e}, max|T1-1|={worst_t1:.1e} over 220 (a,k), |T8-1|={abs(t8 - 1):.1e}")
    assert abs(t4 - 1) <= 1e-12
    assert worst_t1 <= 1e-12
    assert abs(t8 - 1) <= 1e-4


def test_criterion_5_t6_search(criterion):
    diffs = {}
    for K in (1, 2, 5, INF):
        _, r = extremal.t6_sup_search(K)
        diffs[K] = abs(r - value("Thm6Upper", K))
    say(criterion, 5, "max |search - root| = %.1e over K in {1, 2, 5, inf}" % max(diffs.values()))
    assert max(diffs.values()) <= 1e-6, diffs


def test_criterion_6_property_suites(criterion):
    t = time.perf_counter()
    results = harness.run_property_suite(seed=7, count=1000, N=256)
    dt = time.perf_counter() - t
    say(criterion, 6, "; ".join(r.line() for r in results) + f" ({dt:.1f} s)")
    assert [r.total for r in results] == [1000, 1000, 500, 500]
    assert all(r.ok for r in results)
    assert dt <= 30


SHARP = [("Thm1", 1.0), ("Thm1", 2.0), ("Thm1", INF), ("Thm2", 2.0), ("Thm3", 2.0), ("Thm4", None), ("Thm5", None), ("Thm8", None)]


def test_criterion_7_sharpness(criterion):
    reports = [harness.sharpness_bracket(sid, 1e-2, K=K) for sid, K in SHARP]
    ok = [r for r in reports if r.ok]
    say(criterion, 7, f"{len(ok)}/{len(reports)} brackets: no counterexample at the radius, witness at radius + 0.01")
    for r in reports:
        print("   ", r.line())
    for r in reports:
        assert r.below_ok, r.line()
        assert r.above_witness is not None and r.above_witness[2] > r.bound, r.line()


def test_criterion_8_conjecture_evidence(criterion):
    reps = [extremal.conjecture_sweep("Conj1", K) for K in (1, 2, INF)]
    conj2 = extremal.conjecture_sweep("Conj2", 2, count=500)
    limit = abs(extremal.conj1_radius(INF) - math.sqrt(7 / 32))
    say(
        criterion,
        8,
        "EVIDENCE (not proof): Conj1 max sums "
        + ", ".join(f"{r.max_sum:.6f}" for r in reps)
        + f"; K=inf radius diff {limit:.1e}; Conj2 {conj2.violations} counterexamples in {conj2.instance_count}",
    )
    for r in reps + [conj2]:
        print("   ", r.summary())
        assert r.label == "EVIDENCE"
    assert all(r.max_sum <= 1 + 1e-3 for r in reps)
    assert limit <= 1e-12
    assert conj2.instance_count >= 500 and conj2.violations == 0


def test_criterion_9_parseval(criterion):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 128))
        s = TruncatedSeries(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1))
        quad, exact = harness.parseval_pair(s, float(rng.uniform(0.05, 0.99)))
        worst = max(worst, abs(quad - exact) / exact)
    say(criterion, 9, f"max relative error {worst:.1e} over 100 random series")
    assert worst <= 1e-8
