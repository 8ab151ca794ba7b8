import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bohrlab import extremal, harness, powser
from bohrlab.harmonic import generate_instance, normalized_g
from bohrlab.harness import (
    check_coefficient_bounds,
    check_lemma1,
    check_lemma2,
    lemma2_bound,
    parseval_pair,
    sharpness_bracket,
)
from bohrlab.powser import TruncatedSeries, disk_automorphism, majorant_sum

INF = math.inf


# --- lemma oracles -------------------------------------------------------------------


@given(st.floats(0.01, 0.95), st.floats(0.0, 0.99))
def test_lemma1_equality_for_scaled_map(a, k):
    h = disk_automorphism(a, 128)
    assert check_lemma1(h, normalized_g(h, k), k)


def test_lemma1_trivial_for_zero_g():
    h = disk_automorphism(0.4, 64)
    assert check_lemma1(h, powser.polynomial([0], 64), 0.0)


def test_lemma1_detects_violation():
    h = disk_automorphism(0.4, 64)
    assert not check_lemma1(h, normalized_g(h, 0.5), 0.4)


def test_lemma2_identity_map():
    z = powser.polynomial([0, 1], 32)
    for p in (2, 3):
        assert check_lemma2(z, p)


def test_lemma2_bound_at_t4_radius():
    r = math.sqrt(7 / 32)
    assert lemma2_bound(1.0, r, 1) == pytest.approx(0.5, abs=1e-14)
    h = extremal.build(extremal.FamilySpec("T4", 3 / math.sqrt(14)), 256).h
    assert majorant_sum(h, r) == pytest.approx(0.5, abs=1e-12)


def test_lemma2_rejects_bad_support():
    with pytest.raises(ValueError):
        check_lemma2(powser.polynomial([0, 1, 1], 8), 2)


def test_coefficient_bounds_examples():
    assert check_coefficient_bounds(disk_automorphism(0.6, 64), "bounded")
    assert check_coefficient_bounds(powser.polynomial([0.3], 8), "bounded")
    assert not check_coefficient_bounds(powser.polynomial([0.9, 0.5], 8), "bounded")


# --- Parseval -----------------------------------------------------------------------------


@given(st.integers(0, 2**32 - 1), st.floats(0.05, 0.99))
@settings(max_examples=50)
def test_parseval_random(seed, r):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 40))
    s = TruncatedSeries(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1))
    quad, exact = parseval_pair(s, r)
    assert quad == pytest.approx(exact, rel=1e-8)


# --- suites ------------------------------------------------------------------------------


def test_suites_small_and_reproducible():
    first = harness.run_property_suite(seed=3, count=40, N=64)
    second = harness.run_property_suite(seed=3, count=40, N=64)
    assert all(r.ok for r in first)
    assert [r.line() for r in first] == [r.line() for r in second]
    assert first[0].line() == "lemma1: 40/40 pass"


@pytest.mark.parametrize("seed", range(20))
def test_generated_instances_satisfy_oracles(seed):
    f = generate_instance(seed, "qc:2", 128)
    assert check_lemma1(f.h, f.g, 1 / 3)
    assert check_coefficient_bounds(generate_instance(seed, "bounded", 128).h, "bounded")
    assert check_coefficient_bounds(generate_instance(seed, "halfplane", 128).h, "halfplane")
    assert check_lemma2(generate_instance(seed, "psymmetric:2", 128).h, 2)


# --- sharpness --------------------------------------------------------------------------


@pytest.mark.parametrize(
    "sid,K",
    [("Thm1", 1.0), ("Thm1", 2.0), ("Thm1", INF), ("Thm2", 2.0), ("Thm3", 2.0), ("Thm4", None), ("Thm5", None), ("Thm7", 2.0), ("Thm8", None)],
)
def test_sharpness_brackets(sid, K):
    rep = sharpness_bracket(sid, 1e-2, K=K, count=40)
    assert rep.below_ok
    assert rep.above_witness is not None
    assert rep.above_witness[2] > rep.bound
    assert rep.ok


def test_thm1_witness_near_degenerate_parameter():
    rep = sharpness_bracket("Thm1", 1e-2, K=2.0, count=10)
    params, r, total = rep.above_witness
    assert r == pytest.approx(3 / 11 + 1e-2)
    assert params["a"] > 0.9
    assert total > 1


def test_thm5_witness_is_z_plus_zbar():
    rep = sharpness_bracket("Thm5", 1e-2, count=10)
    assert rep.above_witness[2] == pytest.approx(1.02)


def test_tiny_epsilon_reports_closest_value():
    # below the resolution of the a-grid approaching 1 there is no witness
    rep = sharpness_bracket("Thm1", 1e-9, K=2.0, count=10)
    assert rep.above_witness is None and not rep.ok
    assert rep.closest <= 1.0
    assert rep.min_epsilon > 1e-9
    assert "no witness" in rep.line()
    assert sharpness_bracket("Thm1", rep.min_epsilon * 1.01, K=2.0, count=10).ok


def test_sharpness_reproducible():
    a = sharpness_bracket("Thm2", 1e-2, K=2.0, count=20, seed=5)
    b = sharpness_bracket("Thm2", 1e-2, K=2.0, count=20, seed=5)
    assert a.line() == b.line()
