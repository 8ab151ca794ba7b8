"""Property checks binding generated instances to the coefficient lemmas, and sharpness brackets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import extremal, harmonic, powser
from .bohrsum import BohrKind, bohr_sum
from .extremal import FamilySpec, build, family_bohr_closed_form
from .harmonic import HarmonicMap, Profile, dilatation_bound, generate_instance
from .powser import PLAIN, SQUARED, UPPER, TruncatedSeries, majorant_sum
from .radii import RadiusSpec, radius_of, solve_monotone_root

R_GRID = tuple(np.round(np.arange(1, 10) / 10, 10))

# floating-point slack for inequalities that can hold with equality
REL_TOL = 1e-12
ABS_TOL = 1e-14


def _le(lhs: float, rhs: float) -> bool:
    return lhs <= rhs * (1 + REL_TOL) + ABS_TOL


def check_lemma1(h: TruncatedSeries, g: TruncatedSeries, k: float, r_grid: Iterable[float] = R_GRID) -> bool:
    """sum |b_n|^2 r^n <= k^2 sum |a_n|^2 r^n (n >= 1) at every grid radius, both sides truncated."""
    hs = TruncatedSeries(np.concatenate([[0], h.coeffs[1:]]))
    gs = TruncatedSeries(np.concatenate([[0], g.coeffs[1:]]))
    for r in r_grid:
        lhs = majorant_sum(gs, r, SQUARED)
        rhs = k * k * majorant_sum(hs, r, SQUARED)
        if not _le(lhs, rhs):
            return False
    return True


def lemma2_bound(a1: float, r: float, p: int) -> float:
    """Printed two-branch bound for the p-symmetric majorant of a function bounded by 1."""
    if abs(a1) >= r**p:
        return (3 - 2 * math.sqrt(2) * math.sqrt(1 - r ** (2 * p))) / r ** (p - 1)
    return 2 * r ** (p + 1)


def check_lemma2(h: TruncatedSeries, p: int, r_grid: Iterable[float] = R_GRID) -> bool:
    """Both printed branches and the max{2r^(p+1), r} bound where r^p <= 1/3.

    Radii with 2 r^(2p) >= 1 lie outside the lemma's hypothesis and are skipped.
    """
    c = h.coeffs
    off = np.nonzero((np.abs(c) > 1e-13) & (np.arange(c.size) % p != 1))[0]
    if off.size:
        raise ValueError(f"coefficient {int(off[0])} is off the support n = 1 mod {p}")
    a1 = abs(c[1]) if c.size > 1 else 0.0
    for r in r_grid:
        if 2 * r ** (2 * p) >= 1:
            continue
        S = majorant_sum(h, r, PLAIN, UPPER)
        if not _le(S, lemma2_bound(a1, r, p)):
            return False
        if r**p <= 1 / 3 and not _le(S, max(2 * r ** (p + 1), r)):
            return False
    return True


def check_coefficient_bounds(h: TruncatedSeries, profile) -> bool:
    """|a_n| <= 1 - |a_0|^2 (bounded) or |a_n| <= 2(1 - a_0) (halfplane), 1 <= n <= N."""
    if isinstance(profile, str):
        profile = Profile.parse(profile)
    c = np.abs(h.coeffs[1:])
    if profile.kind in ("bounded", "qc"):
        bound = 1 - abs(h.coeffs[0]) ** 2
    elif profile.kind == "halfplane":
        bound = 2 * (1 - h.coeffs[0].real)
    else:
        raise ValueError(f"no coefficient bound for profile {profile}")
    return bool(np.all(c <= bound * (1 + REL_TOL) + ABS_TOL))


def parseval_pair(s: TruncatedSeries, r: float, n_theta: Optional[int] = None) -> Tuple[float, float]:
    """(trapezoid integral of |s(re^it)|^2 over [0, 2pi], 2pi * sum |c_n|^2 r^(2n))."""
    if n_theta is None:
        n_theta = 2 * s.order + 2
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    vals = powser.evaluate(s, r * np.exp(1j * th))
    quad = 2 * np.pi * float(np.mean(np.abs(vals) ** 2))
    exact = 2 * np.pi * float(np.sum(np.abs(s.coeffs) ** 2 * r ** (2 * np.arange(s.order + 1))))
    return quad, exact


# ---------------------------------------------------------------------------
# generator-oracle suites


@dataclass
class SuiteResult:
    name: str
    passed: int
    total: int
    failures: List[int] = field(default_factory=list)
    uncertified: int = 0

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def line(self) -> str:
        extra = f" ({self.uncertified} uncertified)" if self.uncertified else ""
        fails = f" failing seeds {self.failures[:5]}" if self.failures else ""
        return f"{self.name}: {self.passed}/{self.total} pass{extra}{fails}"


def _suite(name: str, seeds: Iterable[int], check: Callable[[int], bool]) -> SuiteResult:
    res = SuiteResult(name, 0, 0)
    for s in seeds:
        res.total += 1
        if check(s):
            res.passed += 1
        else:
            res.failures.append(s)
    return res


def lemma1_suite(seed: int, count: int, K: float = 2.0, N: int = 256) -> SuiteResult:
    k = dilatation_bound(K)
    prof = Profile("qc", K=K)

    def check(s):
        f = generate_instance(s, prof, N)
        return check_lemma1(f.h, f.g, k)

    return _suite("lemma1", range(seed, seed + count), check)


def bounded_suite(seed: int, count: int, N: int = 256) -> SuiteResult:
    return _suite(
        "bounded-coefficients",
        range(seed, seed + count),
        lambda s: check_coefficient_bounds(generate_instance(s, "bounded", N).h, "bounded"),
    )


def halfplane_suite(seed: int, count: int, N: int = 256) -> SuiteResult:
    return _suite(
        "halfplane-coefficients",
        range(seed, seed + count),
        lambda s: check_coefficient_bounds(generate_instance(s, "halfplane", N).h, "halfplane"),
    )


def lemma2_suite(seed: int, count: int, p: int = 2, N: int = 256) -> SuiteResult:
    prof = Profile("psymmetric", p=p)
    return _suite(
        f"lemma2(p={p})",
        range(seed, seed + count),
        lambda s: check_lemma2(generate_instance(s, prof, N).h, p),
    )


def run_property_suite(seed: int = 7, count: int = 1000, N: int = 256) -> List[SuiteResult]:
    half = max(1, count // 2)
    return [
        lemma1_suite(seed, count, 2.0, N),
        bounded_suite(seed, count, N),
        halfplane_suite(seed, half, N),
        lemma2_suite(seed, half, 2, N),
    ]


# ---------------------------------------------------------------------------
# sharpness brackets


@dataclass
class SharpnessReport:
    spec: str
    radius: float
    bound: float
    below_max: float
    below_upper: float
    below_tail: float
    instance_count: int
    epsilon: float
    witness_radius: float
    above_witness: Optional[Tuple[Dict[str, float], float, float]]
    closest: float
    min_epsilon: Optional[float]
    uncertified: int = 0

    @property
    def below_ok(self) -> bool:
        # upper-mode sums carry the certified tails; the slack is rounding only
        return self.below_upper <= self.bound + 1e-12

    @property
    def ok(self) -> bool:
        return self.below_ok and self.above_witness is not None

    def line(self) -> str:
        if self.above_witness is None:
            above = f"no witness at +{self.epsilon:g} (closest {self.closest:.9g}, minimal eps {self.min_epsilon})"
        else:
            params, r, s = self.above_witness
            ps = ", ".join(f"{k}={v:.6g}" for k, v in params.items())
            above = f"witness {{{ps}}} sum {s:.9g} at r={r:.9g}"
        return (
            f"{self.spec}: radius {self.radius:.9g} below_max {self.below_max:.9g} "
            f"(bound {self.bound:g}, {self.instance_count} cases) | {above}"
        )


def _approach_grid(limit: float, count: int = 25) -> np.ndarray:
    """Log-spaced parameters approaching ``limit`` from below."""
    return limit - limit * np.logspace(-0.3, -6, count)


def _thm4_functional(f: HarmonicMap, r: float, mode: str = UPPER) -> float:
    """sum_{n>=1} (|a_n| + |b_n|) r^n."""
    return bohr_sum(f, r, BohrKind("Full"), mode) - abs(f.a[0])


def _theorem_setup(spec_id: str, K: Optional[float], p: int):
    """(radius, witness base radius, functional, instance profile, family, family grid key)."""
    full = BohrKind("Full")
    if spec_id in ("Thm1", "Thm3"):
        radius = radius_of(RadiusSpec(spec_id, K=K)).value
        prof = Profile("qc" if spec_id == "Thm1" else "halfplane", K=K)
        return radius, radius, (lambda f, r, m=UPPER: bohr_sum(f, r, full, m)), prof
    if spec_id == "Thm2":
        radius = radius_of(RadiusSpec("Thm2", K=K)).value
        sq = BohrKind("SquaredConstant")
        return radius, radius, (lambda f, r, m=UPPER: bohr_sum(f, r, sq, m)), Profile("qc", K=K)
    if spec_id == "Thm4":
        radius = radius_of(RadiusSpec("Thm4")).value
        return radius, radius, _thm4_functional, "thm4"
    if spec_id == "Thm5":
        kind = BohrKind("PSymmetric", p=p)
        return 0.5, 0.5, (lambda f, r, m=UPPER: bohr_sum(f, r, kind, m)), "thm5"
    if spec_id == "Thm7":
        kind = BohrKind("DerivativeWeighted", K=K)
        return 1 / 3, 1 / 3, (lambda f, r, m=UPPER: bohr_sum(f, r, kind, m)), "thm7"
    if spec_id == "Thm8":
        lower = radius_of(RadiusSpec("Thm8Lower")).value
        upper = extremal.bloch_sharpness_search().r_star
        return lower, upper, (lambda f, r, m=UPPER: bohr_sum(f, r, full, m)), "bloch"
    raise ValueError(f"no sharpness setup for {spec_id}")


def _instance(spec_id: str, prof, seed: int, N: int, K: Optional[float], p: int) -> HarmonicMap:
    if prof == "thm4":
        # h, g bounded by 1 with g(0) = 0: g = z * B
        f = generate_instance(seed, "bounded", N)
        g = generate_instance(seed + 7919, "bounded", N).h
        zg = powser.multiply(powser.polynomial([0, 1], N), g)
        return HarmonicMap(f.h, zg)
    if prof == "thm7":
        # h' = B (sup norm 1) and g' = k W B with W another Blaschke product
        B = generate_instance(seed, "bounded", N - 1, degree=1 + seed % 3).h
        W = generate_instance(seed + 7919, "bounded", N - 1).h
        omega = powser.scale(W, dilatation_bound(K))
        return HarmonicMap(powser.integrate_from_zero(B), powser.integrate_from_zero(powser.multiply(omega, B)))
    if prof == "thm5":
        ps = Profile("psymmetric", p=p)
        return HarmonicMap(generate_instance(seed, ps, N).h, generate_instance(seed + 7919, ps, N).h)
    if prof == "bloch":
        f = generate_instance(seed, "bloch", N)
        return HarmonicMap.analytic(f.h)
    return generate_instance(seed, prof, N)


def _family_members(spec_id: str, K: Optional[float], p: int) -> List[Tuple[Dict[str, float], HarmonicMap, Callable]]:
    """Extremal members (params, map, closed form) used both below and above the radius."""
    out = []
    if spec_id in ("Thm1", "Thm2", "Thm3"):
        k = dilatation_bound(K)
        fam = "T3" if spec_id == "Thm3" else "T1"
        for a in np.concatenate([np.linspace(0, 0.9, 10), _approach_grid(1.0)]):
            spec = FamilySpec(fam, float(a), k)
            if spec_id == "Thm2":
                cf = lambda r, a=float(a): a * a + (1 - a * a) * (1 + k) * r / (1 - a * r)
            else:
                cf = lambda r, spec=spec: family_bohr_closed_form(spec, r)
            out.append(({"a": float(a), "k": k}, spec, cf))
    elif spec_id == "Thm4":
        for a in np.linspace(0, 0.99, 34).tolist() + [3 / math.sqrt(14)]:
            spec = FamilySpec("T4", float(a))
            out.append(({"a": float(a)}, spec, lambda r, spec=spec: family_bohr_closed_form(spec, r)))
    elif spec_id == "Thm5":
        spec = FamilySpec("T5")
        out.append(({}, spec, lambda r: 2 * r))
    elif spec_id == "Thm7":
        k = dilatation_bound(K)
        for a in np.concatenate([np.linspace(0, 0.9, 10), _approach_grid(1.0)]):
            # h' = automorphism, g = k h: the weighted sum is the classical Bohr sum of h'
            cf = lambda r, a=float(a): a + (1 - a * a) * r / (1 - a * r)
            out.append(({"a": float(a), "k": k}, None, cf))
    elif spec_id == "Thm8":
        for a in np.concatenate([np.linspace(0.01, extremal.T8_A_MAX - 1e-3, 30), [0.3775]]):
            spec = FamilySpec("T8", float(a))
            out.append(({"a": float(a)}, spec, lambda r, spec=spec: family_bohr_closed_form(spec, r)))
    return out


def sharpness_bracket(
    spec_id: str,
    epsilon: float = 1e-2,
    K: Optional[float] = None,
    p: int = 2,
    count: int = 200,
    seed: int = 0,
    N: int = 256,
) -> SharpnessReport:
    """Below: no in-class case exceeds the bound at the radius (upper-mode sums).
    Above: an extremal member exceeds it at witness radius + epsilon."""
    if spec_id in ("Thm1", "Thm2", "Thm3", "Thm7") and K is None:
        K = 2.0
    radius, witness_base, functional, prof = _theorem_setup(spec_id, K, p)
    bound = 1.0
    below_max = below_upper = -math.inf
    below_tail, uncertified, n = 0.0, 0, 0

    for i in range(count):
        f = _instance(spec_id, prof, seed + i, N, K, p)
        s_up = functional(f, radius, UPPER)
        s_tr = functional(f, radius, "truncated")
        if f.h.tail is None or f.g.tail is None:
            uncertified += 1
        n += 1
        below_max = max(below_max, s_tr)
        below_upper = max(below_upper, s_up)
        below_tail = max(below_tail, s_up - s_tr)

    members = _family_members(spec_id, K, p)
    for params, spec, cf in members:
        if spec is not None:
            f = build(spec, N)
            s_tr = functional(f, radius, "truncated")
            s_up = functional(f, radius, UPPER)
            below_tail = max(below_tail, s_up - s_tr)
        else:
            s_tr = s_up = cf(radius)
        below_max = max(below_max, s_tr, cf(radius))
        below_upper = max(below_upper, s_up, cf(radius))
        n += 1

    r_above = witness_base + epsilon
    witness, closest = None, -math.inf
    for params, spec, cf in members:
        s = cf(r_above)
        if s > closest:
            closest = s
            if s > bound:
                witness = (params, r_above, s)
    min_eps = None
    if witness is None:
        thr = []
        for params, spec, cf in members:
            try:
                thr.append(solve_monotone_root(cf, bound, (witness_base, 1 - 1e-9), 1e-12).value)
            except ValueError:
                pass
        if thr:
            min_eps = min(thr) - witness_base
    label = spec_id if K is None or spec_id in ("Thm4", "Thm5", "Thm8") else f"{spec_id}(K={'inf' if math.isinf(K) else f'{K:g}'})"
    return SharpnessReport(
        label,
        radius,
        bound,
        below_max,
        below_upper,
        below_tail,
        n,
        epsilon,
        witness_base,
        witness,
        closest,
        min_eps,
        uncertified,
    )
