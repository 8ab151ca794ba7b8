import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from bohrlab import extremal
from bohrlab.bohrsum import BohrKind, bohr_sum
from bohrlab.extremal import (
    FamilySpec,
    build,
    bloch_sharpness_search,
    conjecture_sweep,
    family_bohr_closed_form,
    family_threshold,
    golden_section_min,
    is_unimodal,
    minimize_scan,
    t1_threshold,
    t6_sup_search,
)
from bohrlab.radii import RadiusSpec, radius_of

INF = math.inf
A_T4 = 3 / math.sqrt(14)
R_T4 = math.sqrt(7 / 32)


def test_t1_at_origin_is_minus_z():
    f = build(FamilySpec("T1", 0.0, 0.0), 8)
    np.testing.assert_allclose(f.a, [0, -1] + [0] * 7)
    assert not np.any(f.b)


def test_family_validation():
    with pytest.raises(ValueError):
        FamilySpec("T9")
    with pytest.raises(ValueError):
        FamilySpec("T1", a=1.0)


@pytest.mark.parametrize("fid", ["T1", "T3", "T4", "T6", "C1"])
@pytest.mark.parametrize("a", [0.1, 0.5, 0.9])
def test_series_match_closed_forms(fid, a):
    spec = FamilySpec(fid, a, 0.4)
    f = build(spec, 512)
    for r in (0.1, 0.3, 0.6):
        assert bohr_sum(f, r) == pytest.approx(family_bohr_closed_form(spec, r), rel=1e-10)


def test_t8_series_matches_closed_form():
    spec = FamilySpec("T8", 0.3775)
    f = build(spec, 512)
    for r in (0.2, 0.5, 0.62):
        assert bohr_sum(f, r) == pytest.approx(family_bohr_closed_form(spec, r), rel=1e-10)


def test_t4_exact_identity():
    assert family_bohr_closed_form(FamilySpec("T4", A_T4), R_T4) == pytest.approx(1.0, abs=1e-12)


def test_t8_reported_optimum():
    assert family_bohr_closed_form(FamilySpec("T8", 0.3775), 0.624162) == pytest.approx(1.0, abs=1e-4)


def test_t8_closed_form_needs_positive_regime():
    with pytest.raises(ValueError):
        family_bohr_closed_form(FamilySpec("T8", 0.7), 0.5)


@given(st.floats(0.0, 0.99), st.floats(0.0, 1.0))
def test_t1_threshold_identity(a, k):
    r = t1_threshold(a, k)
    assume(r < 1)  # a = k = 0 is f = -z, which never reaches 1
    assert family_bohr_closed_form(FamilySpec("T1", a, k), r) == pytest.approx(1.0, abs=1e-12)


def test_t1_threshold_values():
    assert t1_threshold(1.0, 0.0) == pytest.approx(1 / 3)
    assert t1_threshold(0.0, 1.0) == pytest.approx(0.5)
    for K in (1, 2, 7):
        k = (K - 1) / (K + 1)
        assert t1_threshold(1 - 1e-12, k) == pytest.approx((K + 1) / (5 * K + 1), abs=1e-10)


@given(st.floats(0.01, 0.98), st.floats(0.0, 1.0))
@settings(max_examples=30)
def test_family_threshold_agrees_with_t1_formula(a, k):
    assert family_threshold(FamilySpec("T1", a, k)) == pytest.approx(t1_threshold(a, k), abs=1e-11)


# --- minimization -----------------------------------------------------------------


@given(st.floats(-2, 2))
def test_golden_section_parabola(c):
    x, fx, _ = golden_section_min(lambda t: (t - c) ** 2, -3, 3, 1e-9)
    assert x == pytest.approx(c, abs=1e-8)


def test_unimodality():
    assert is_unimodal([3, 2, 1, 2, 3])
    assert not is_unimodal([1, 3, 1, 3])


def test_minimize_scan_falls_back_on_multimodal():
    fn = lambda x: math.cos(12 * x) + 0.1 * x
    x, fx, _, unimodal = minimize_scan(fn, 0, 2, 1e-9)
    assert not unimodal
    dense = np.linspace(0, 2, 20001)
    assert fx <= min(fn(t) for t in dense) + 1e-8


# --- searches ----------------------------------------------------------------------


@pytest.mark.parametrize("K", [1, 2, 5, INF])
def test_t6_search_matches_upper_radius(K):
    _, r = t6_sup_search(K)
    assert r == pytest.approx(radius_of(RadiusSpec("Thm6Upper", K=K)).value, abs=1e-6)


def test_t6_reduces_to_classical_at_K1():
    _, r = t6_sup_search(1)
    assert r == pytest.approx(1 / 3, abs=1e-6)


def test_bloch_search():
    res = bloch_sharpness_search()
    assert res.a_star == pytest.approx(0.3775, abs=1e-3)
    assert res.r_star == pytest.approx(0.624162, abs=1e-4)
    assert abs(res.cubic_residual) <= 1e-6
    assert res.stationarity_residual <= 1e-3
    assert not res.missing_roots


# --- conjecture evidence -------------------------------------------------------------


@pytest.mark.parametrize("K", [1, 2, INF])
def test_conj1_sweep(K):
    rep = conjecture_sweep("Conj1", K, a_grid=np.linspace(0, 0.999, 200))
    assert rep.label == "EVIDENCE"
    assert rep.max_sum <= 1 + 1e-3
    assert "not a proof" in rep.summary()


def test_conj1_infinite_K_coincides_with_t4():
    a = 0.6
    c1 = build(FamilySpec("C1", a, 1.0), 64)
    t4 = build(FamilySpec("T4", a), 64)
    for r in (0.2, 0.4):
        assert bohr_sum(c1, r) == pytest.approx(bohr_sum(t4, r))


def test_conj2_sweep_small():
    rep = conjecture_sweep("Conj2", 2, count=40, seed=3)
    assert rep.instance_count >= 40
    assert rep.consistent
    # the degenerate z + z-bar case attains the bound
    assert rep.max_sum == pytest.approx(1.0, abs=1e-12)
