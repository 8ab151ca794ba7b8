"""Extremal families, their closed-form Bohr sums, and the two sharpness searches."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from . import harmonic, powser
from .bohrsum import BohrKind, FULL, bohr_sum
from .harmonic import HarmonicMap, dilatation_bound
from .powser import DEFAULT_ORDER, TruncatedSeries
from .radii import NoSignChange, solve_monotone_root

SQRT3 = math.sqrt(3.0)
T8_PREFACTOR = 3 * SQRT3 / 4
T8_A_MAX = 1 / SQRT3

FAMILIES = ("T1", "T3", "T4", "T5", "T6", "T8", "C1")


@dataclass(frozen=True)
class FamilySpec:
    id: str
    a: float = 0.0
    k: float = 0.0
    lam: complex = 1.0

    def __post_init__(self):
        if self.id not in FAMILIES:
            raise ValueError(f"unknown family {self.id!r}")
        if not 0 <= self.a < 1:
            raise ValueError(f"family parameter a={self.a} outside [0, 1)")
        if not 0 <= self.k <= 1:
            raise ValueError(f"family parameter k={self.k} outside [0, 1]")
        if abs(abs(self.lam) - 1) > 1e-12:
            raise ValueError("lambda must be unimodular")

    @property
    def positive_regime(self) -> bool:
        """For T8: all coefficients from index 2 on are positive."""
        return self.a < T8_A_MAX

    @classmethod
    def with_K(cls, id: str, a: float = 0.0, K: float = 1.0, lam: complex = 1.0) -> "FamilySpec":
        return cls(id, a, dilatation_bound(K), lam)


def _shifted_automorphism(a: float, N: int, sign: float = 1.0) -> TruncatedSeries:
    """sign * z*(a - z)/(1 - a z): c_1 = a, c_n = -(1-a^2) a^(n-2)."""
    c = np.zeros(N + 1, dtype=complex)
    c[1] = a
    if N >= 2:
        c[2:] = -(1 - a * a) * a ** np.arange(N - 1)
    tail = ((1 - a * a) / (a * a), a) if a > 0 else (0.0, 0.0)
    return powser.scale(TruncatedSeries(c, tail), sign)


def _t8_series(a: float, N: int) -> TruncatedSeries:
    n = np.arange(N + 1)
    c = np.zeros(N + 1)
    if N >= 1:
        c[1] = -2 * a * (1 - a * a)
    if N >= 2:
        m = n[2:]
        c[2:] = (1 - a * a) * (m * (1 - a * a) - (1 + a * a)) * a ** (m - 2.0)
    if a > 0:
        # |c_n| <= (1-a^2)((1-a^2) n + 1 + a^2) a^-2 * a^n
        C, q = powser._envelope((1 - a * a) ** 2 / a**2, (1 - a**4) / a**2, a, N + 1)
        tail = (T8_PREFACTOR * C, q)
    else:
        tail = (0.0, 0.0)
    return TruncatedSeries(T8_PREFACTOR * c, tail)


def _t6_g(a: float, k: float, N: int) -> TruncatedSeries:
    """b_n = k (n-1)/n * a_{n-1} with a_m = -(1-a^2) a^(m-1): g' = k z h'."""
    c = np.zeros(N + 1, dtype=complex)
    if N >= 2:
        n = np.arange(2, N + 1)
        c[2:] = -k * (n - 1) / n * (1 - a * a) * a ** (n - 2.0)
    tail = (k * (1 - a * a) / (a * a), a) if a > 0 else (0.0, 0.0)
    return TruncatedSeries(c, tail)


def build(spec: FamilySpec, N: int = DEFAULT_ORDER) -> HarmonicMap:
    """Coefficient-exact member of an extremal family.

    The co-analytic part is always normalized to vanish at 0, so for T1/T3
    g = lam*k*(h - h(0)); only g' enters the Bohr sums.
    """
    a, k, lam = spec.a, spec.k, spec.lam
    i = spec.id
    if i in ("T1", "T3"):
        h = powser.disk_automorphism(a, N)
        c = lam * k if i == "T1" else k
        return HarmonicMap(h, harmonic.normalized_g(h, c))
    if i == "T4":
        h = _shifted_automorphism(a, N)
        return HarmonicMap(h, powser.scale(h, lam))
    if i == "T5":
        z = powser.polynomial([0, 1], N)
        return HarmonicMap(z, z)
    if i == "T6":
        return HarmonicMap(powser.disk_automorphism(a, N), _t6_g(a, k, N))
    if i == "T8":
        return HarmonicMap.analytic(_t8_series(a, N))
    if i == "C1":
        h = _shifted_automorphism(a, N, sign=-1.0)
        return HarmonicMap(h, powser.scale(h, k))
    raise AssertionError(i)


def _t6_log_part(a: float, r: float) -> float:
    """sum_{n>=2} (n-1)/n a^(n-2) r^n = (ar + (1-ar) log(1-ar)) / (a^2 (1-ar))."""
    x = a * r
    if x < 0.05:
        n = np.arange(2, 40)
        return float(np.sum((n - 1) / n * x ** (n - 2.0))) * r * r
    return (x + (1 - x) * math.log1p(-x)) / (a * a * (1 - x))


def t6_excess(a: float, k: float, r: float) -> float:
    """(1+a)*X - 1 where the T6 sum equals a + (1-a^2) X; same sign as (sum - 1)."""
    X = r / (1 - a * r) + k * _t6_log_part(a, r)
    return (1 + a) * X - 1


def family_bohr_closed_form(spec: FamilySpec, r: float) -> float:
    if not 0 <= r < 1:
        raise ValueError(f"radius {r} outside [0, 1)")
    a, k = spec.a, spec.k
    i = spec.id
    if i in ("T1", "T3"):
        return a + (1 - a * a) * (1 + k) * r / (1 - a * r)
    if i == "T4":
        return 2 * (a * r + (1 - a * a) * r * r / (1 - a * r))
    if i == "T5":
        return 2 * r
    if i == "T6":
        return a + (1 - a * a) * (r / (1 - a * r) + k * _t6_log_part(a, r))
    if i == "T8":
        if not spec.positive_regime:
            raise ValueError(f"T8 closed form needs a < 1/sqrt(3), got a={a}")
        phi = (r - a) / (1 - a * r)
        return T8_PREFACTOR * (phi * phi - a * a + 4 * a * (1 - a * a) * r)
    if i == "C1":
        return (1 + k) * (a * r + (1 - a * a) * r * r / (1 - a * r))
    raise AssertionError(i)


def t1_threshold(a: float, k: float) -> float:
    return 1 / (1 + k + (2 + k) * a)


def family_threshold(spec: FamilySpec, bound: float = 1.0, tol: float = 1e-13) -> Optional[float]:
    """Smallest r in (0, 1) where the closed-form sum reaches ``bound``; None if it never does."""
    hi = 1 - 1e-9
    fn = lambda r: family_bohr_closed_form(spec, r)
    if fn(0.0) >= bound:
        return 0.0
    try:
        return solve_monotone_root(fn, bound, (0.0, hi), tol).value
    except NoSignChange:
        return None


# ---------------------------------------------------------------------------
# one-dimensional minimization

INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section_min(fn, lo: float, hi: float, tol: float = 1e-6):
    """Golden-section search on a unimodal function; returns (x, fn(x), iterations)."""
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc, fd = fn(c), fn(d)
    it = 0
    while hi - lo > tol:
        it += 1
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - INV_PHI * (hi - lo)
            fc = fn(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_PHI * (hi - lo)
            fd = fn(d)
    x = 0.5 * (lo + hi)
    return x, fn(x), it


def is_unimodal(values: Sequence[float]) -> bool:
    """Non-increasing then non-decreasing."""
    d = np.diff(np.asarray(values))
    i = int(np.argmin(values))
    return bool(np.all(d[:i] <= 0) and np.all(d[i:] >= 0))


def minimize_scan(fn, lo: float, hi: float, tol: float, coarse: int = 41, dense: int = 2001):
    """Golden section after a coarse unimodality check; dense grid plus local refinement otherwise.

    Returns (x, fx, iterations, unimodal).
    """
    xs = np.linspace(lo, hi, coarse)
    ys = [fn(x) for x in xs]
    unimodal = is_unimodal(ys)
    if unimodal:
        j = int(np.argmin(ys))
        a, b = xs[max(j - 1, 0)], xs[min(j + 1, coarse - 1)]
        x, fx, it = golden_section_min(fn, a, b, tol)
        return x, fx, it + coarse, True
    xs = np.linspace(lo, hi, dense)
    ys = [fn(x) for x in xs]
    j = int(np.argmin(ys))
    a, b = xs[max(j - 1, 0)], xs[min(j + 1, dense - 1)]
    x, fx, it = golden_section_min(fn, a, b, tol)
    return x, fx, it + coarse + dense, False


# ---------------------------------------------------------------------------
# quasiconformal family with g'(0) = 0


def t6_root(a: float, k: float, tol: float = 1e-14) -> float:
    """r in (0, 1) where the T6 family's Bohr sum reaches 1."""
    return solve_monotone_root(lambda r: t6_excess(a, k, r), 0.0, (0.0, 1 - 1e-12), tol).value


def t6_sup_search(K: float, tol: float = 1e-12):
    """Largest r with the T6 sum <= 1 for every a in [0, 1), i.e. the infimum of the per-a roots.

    The roots decrease towards a -> 1, so a log-spaced approach to 1 is
    scanned and the smallest root kept; an interior minimum, should one
    appear, is refined by golden section.  Returns (a_star, r_star).
    """
    k = dilatation_bound(K)
    grid = np.concatenate([np.linspace(1e-3, 0.99, 100), 1 - np.logspace(-2.5, -12, 40)])
    roots = np.array([t6_root(a, k, tol) for a in grid])
    j = int(np.argmin(roots))
    if 0 < j < grid.size - 1:
        x, fx, _ = golden_section_min(lambda a: t6_root(a, k, tol), grid[j - 1], grid[j + 1], 1e-9)
        if fx < roots[j]:
            return x, fx
    return float(grid[j]), float(roots[j])


# ---------------------------------------------------------------------------
# Bloch family


def bloch_cubic(a: float) -> Polynomial:
    """(r-a)^2 + (1-ra)^2 (-a^2 + 4a(1-a^2) r) - 4/(3 sqrt 3) (1-ar)^2 as a polynomial in r."""
    r = Polynomial([0.0, 1.0])
    one_ar = 1 - a * r
    return (r - a) ** 2 + one_ar**2 * (-a * a + 4 * a * (1 - a * a) * r) - (4 / (3 * SQRT3)) * one_ar**2


def stationarity_terms(a: float, r: float) -> List[float]:
    s = SQRT3
    return [
        18 * r,
        8 * s * r,
        -54 * a * a * r,
        -144 * a * r * r,
        -8 * s * a * r * r,
        252 * a**3 * r * r,
        108 * a * a * r**3,
        -180 * a**4 * r**3,
    ]


def stationarity_residual(a: float, r: float) -> float:
    t = stationarity_terms(a, r)
    return abs(sum(t)) / sum(abs(x) for x in t)


def bloch_root(a: float, tol: float = 1e-15, scan: int = 400) -> Optional[float]:
    """Smallest root in (0, 1) of the cubic; None when there is none."""
    P = bloch_cubic(a)
    xs = np.linspace(0.0, 1.0, scan + 1)
    ys = P(xs)
    idx = np.nonzero(np.sign(ys[:-1]) * np.sign(ys[1:]) <= 0)[0]
    if idx.size == 0:
        return None
    i = int(idx[0])
    if ys[i] == 0:
        return float(xs[i]) if xs[i] > 0 else None
    return solve_monotone_root(lambda r: float(P(r)), 0.0, (xs[i], xs[i + 1]), tol).value


@dataclass
class BlochSearchResult:
    a_star: float
    r_star: float
    cubic_residual: float
    stationarity_residual: float
    iterations: int
    unimodal: bool
    r_bracket: Tuple[float, float]
    missing_roots: List[float] = field(default_factory=list)


def bloch_sharpness_search(tol: float = 1e-6) -> BlochSearchResult:
    """Minimize the smallest root r(a) of the Bloch-family equation over a in (0, 1/sqrt 3)."""
    missing: List[float] = []

    def r_of(a):
        r = bloch_root(a)
        if r is None:
            missing.append(a)
            return math.inf
        return r

    lo, hi = 1e-3, T8_A_MAX - 1e-3
    a, r, it, unimodal = minimize_scan(r_of, lo, hi, max(tol, 1e-9))
    res10 = float(bloch_cubic(a)(r))
    return BlochSearchResult(
        a_star=a,
        r_star=r,
        cubic_residual=res10,
        stationarity_residual=stationarity_residual(a, r),
        iterations=it,
        unimodal=unimodal,
        r_bracket=(r, r),
        missing_roots=missing,
    )


# ---------------------------------------------------------------------------
# conjecture exploration


@dataclass
class EvidenceReport:
    conjecture: str
    parameter: str
    radius: float
    max_sum: float
    argmax: Optional[float]
    bound: float
    instance_count: int
    violations: int
    thresholds: List[Tuple[float, Optional[float]]] = field(default_factory=list)
    table: List[Tuple[float, float, float]] = field(default_factory=list)
    skipped: int = 0
    note: str = ""
    label: str = "EVIDENCE"

    @property
    def consistent(self) -> bool:
        return self.violations == 0

    def summary(self) -> str:
        verdict = "no counterexample" if self.consistent else f"{self.violations} counterexample(s)"
        return (
            f"{self.label} {self.conjecture}({self.parameter}): radius {self.radius:.9g}, "
            f"max sum {self.max_sum:.9g} over {self.instance_count} cases, {verdict} (not a proof)"
        )


def conj1_radius(K: float) -> float:
    from .radii import RadiusSpec, closed_form_radius

    return closed_form_radius(RadiusSpec("Conj1", K=K))


def conjecture_sweep(
    which: str,
    param,
    a_grid: Optional[Sequence[float]] = None,
    r_grid: Optional[Sequence[float]] = None,
    N: int = DEFAULT_ORDER,
    count: int = 500,
    seed: int = 0,
    slack: float = 1e-3,
) -> EvidenceReport:
    """Numerical exploration of the two open conjectures; never a proof.

    Conj1: the C1 family (h = z(z-a)/(1-az), g = k h, so ||h|| = 1) evaluated
    at the conjectured radius for K = param.  Candidates are not filtered by
    local univalence.  Conj2: ``count`` seeded p-symmetric instances that pass
    the sense-preservation check (p = param), at r = 1/2 against
    max(1, sampled ||g||); rejected draws are counted in ``skipped``.
    """
    if which == "Conj1":
        K = float(param)
        k = dilatation_bound(K)
        rho = conj1_radius(K)
        if a_grid is None:
            a_grid = np.linspace(0.0, 0.999, 1000)
        if r_grid is None:
            r_grid = np.linspace(0.0, 0.95, 20)
        best, arg, viol = -math.inf, None, 0
        thresholds, table = [], []
        tail = 0.0
        for a in a_grid:
            spec = FamilySpec("C1", float(a), k)
            f = build(spec, N)
            s = bohr_sum(f, rho, BohrKind(FULL), "upper")
            tail = max(tail, s - bohr_sum(f, rho, BohrKind(FULL)))
            if s > best:
                best, arg = s, float(a)
            if s > 1 + slack:
                viol += 1
            thresholds.append((float(a), family_threshold(spec)))
            for r in r_grid:
                table.append((float(a), float(r), family_bohr_closed_form(spec, float(r))))
        return EvidenceReport(
            "Conj1",
            f"K={'inf' if math.isinf(K) else f'{K:g}'}",
            rho,
            best,
            arg,
            1.0,
            len(a_grid),
            viol,
            thresholds,
            table,
            note=f"h normalized to sup norm 1; max certified tail {tail:.3g}",
        )
    if which == "Conj2":
        p = int(param)
        r = 0.5
        grid = harmonic.PolarGrid(0.99, 24, 128)
        kind = BohrKind("PSymmetric", p=p)
        f0 = build(FamilySpec("T5"), N)
        best = bohr_sum(f0, r, kind)
        arg = None
        viol = skipped = used = 0
        order = min(N, 128)
        i = 0
        while used < count and i < 20 * count:
            f = harmonic.generate_instance(seed + i, harmonic.Profile("psymmetric", p=p), order)
            i += 1
            if not harmonic.is_sense_preserving(f, grid):
                skipped += 1
                continue
            used += 1
            bound = max(1.0, harmonic.sup_norm_lower(f.g, grid))
            s = bohr_sum(f, r, kind, "upper")
            if s > bound + 1e-12:
                viol += 1
            if s > best:
                best, arg = s, float(seed + i - 1)
        return EvidenceReport(
            "Conj2",
            f"p={p}",
            r,
            best,
            arg,
            1.0,
            used + 1,
            viol,
            skipped=skipped,
            note="z + conj(z) included (sum exactly 1); bound uses sampled ||g||, a lower bound",
        )
    raise ValueError(f"unknown conjecture {which!r}")
