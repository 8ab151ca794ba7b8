"""Closed-form Bohr radii and bracketing solvers for the transcendental ones."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .harmonic import dilatation_bound, k_ratio

INF = math.inf

CLOSED_FORM = "closed_form"
TRANSCENDENTAL = "transcendental_root"
OPTIMIZATION = "optimization"

# ids whose value depends on K
K_IDS = {"Thm1", "Thm2", "Thm3", "Thm6Lower", "Thm6Upper", "Rem1Lower", "Rem1Upper", "Conj1"}

KINDS = {
    "Thm1": CLOSED_FORM,
    "Thm2": CLOSED_FORM,
    "Thm3": CLOSED_FORM,
    "Cor1a": CLOSED_FORM,
    "Cor1b": CLOSED_FORM,
    "Cor2": CLOSED_FORM,
    "Thm4": CLOSED_FORM,
    "Thm5": CLOSED_FORM,
    "Thm7": CLOSED_FORM,
    "Conj1": CLOSED_FORM,
    "Thm6Lower": TRANSCENDENTAL,
    "Thm6Upper": TRANSCENDENTAL,
    "Cor3Lower": TRANSCENDENTAL,
    "Cor3Upper": TRANSCENDENTAL,
    "Rem1Lower": TRANSCENDENTAL,
    "Rem1Upper": TRANSCENDENTAL,
    "Thm8Lower": TRANSCENDENTAL,
    "Thm9Lower": TRANSCENDENTAL,
    "Thm8Upper": OPTIMIZATION,
}

ALL_IDS = tuple(KINDS)

DEFAULT_TOL = 1e-12
BRACKET = (1e-6, 1 - 1e-6)

PI2_6_MINUS_1 = math.sqrt(math.pi**2 / 6 - 1)


class NoSignChange(ValueError):
    pass


class NotMonotone(ValueError):
    pass


@dataclass(frozen=True)
class RadiusSpec:
    id: str
    K: Optional[float] = None
    p: Optional[int] = None

    def __post_init__(self):
        if self.id not in KINDS:
            raise ValueError(f"unknown radius id {self.id!r}")
        if self.id in K_IDS:
            if self.K is None or self.K < 1:
                raise ValueError(f"{self.id} needs K >= 1 (or inf)")
        if self.id == "Thm5" and self.p is not None and self.p < 2:
            raise ValueError("Thm5 needs p >= 2")

    @property
    def kind(self) -> str:
        return KINDS[self.id]

    def label(self) -> str:
        if self.id in K_IDS:
            return f"{self.id}(K={format_K(self.K)})"
        return self.id


def format_K(K: Optional[float]) -> str:
    if K is None:
        return ""
    return "inf" if math.isinf(K) else f"{K:g}"


@dataclass(frozen=True)
class RootResult:
    value: float
    bracket: Tuple[float, float]
    residual: float
    iterations: int


def closed_form_radius(spec: RadiusSpec) -> float:
    if spec.kind != CLOSED_FORM:
        raise ValueError(f"{spec.id} is not a closed-form radius")
    K = spec.K
    i = spec.id
    if i in ("Thm1", "Thm3"):
        return 0.2 if math.isinf(K) else (K + 1) / (5 * K + 1)
    if i == "Thm2":
        return 1 / 3 if math.isinf(K) else (K + 1) / (3 * K + 1)
    if i in ("Cor1a", "Cor2"):
        return 0.2
    if i in ("Cor1b", "Thm7"):
        return 1 / 3
    if i == "Thm4":
        return math.sqrt(7 / 32)
    if i == "Thm5":
        return 0.5
    if i == "Conj1":
        if math.isinf(K):
            return 0.25 * math.sqrt(3.5)
        return 0.25 * math.sqrt(3.5 - 1 / (2 * K * K) + 5 / K)
    raise AssertionError(i)


def m_k(r: float, K: float) -> float:
    """r/(1-r) + k r^2 sqrt((1+r^2)/(1-r^2)^3) sqrt(pi^2/6 - 1)."""
    if not 0 <= r < 1:
        raise ValueError(f"radius {r} outside [0, 1)")
    k = dilatation_bound(K)
    return r / (1 - r) + k * r * r * math.sqrt((1 + r * r) / (1 - r * r) ** 3) * PI2_6_MINUS_1


def upper_equation(R: float, K: float, scale: float) -> float:
    """scale * [2R/(1-R) * K/(K+1) + k log(1-R)]; scale 2 for the first-term |a_0| case, 1 for |a_0|^2."""
    return scale * (2 * R / (1 - R) * k_ratio(K) + dilatation_bound(K) * math.log1p(-R))


def bloch_equation(R: float) -> float:
    return 1 - R + R * math.log1p(-R)


def solve_monotone_root(
    fn: Callable[[float], float],
    target: float,
    bracket: Tuple[float, float] = BRACKET,
    tol: float = DEFAULT_TOL,
    max_iter: int = 200,
) -> RootResult:
    """Bisection for fn(x) = target on a bracket with a sign change."""
    lo, hi = bracket
    flo, fhi = fn(lo) - target, fn(hi) - target
    if flo == 0:
        return RootResult(lo, (lo, lo), 0.0, 0)
    if fhi == 0:
        return RootResult(hi, (hi, hi), 0.0, 0)
    if (flo > 0) == (fhi > 0):
        raise NoSignChange(f"no sign change on [{lo}, {hi}]: {flo:.3g}, {fhi:.3g}")
    it = 0
    while hi - lo > tol and it < max_iter:
        mid = 0.5 * (lo + hi)
        fm = fn(mid) - target
        it += 1
        if fm == 0:
            lo = hi = mid
            break
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    return RootResult(x, (lo, hi), fn(x) - target, it)


def check_monotone(fn: Callable[[float], float], bracket: Tuple[float, float] = BRACKET, samples: int = 512) -> int:
    """Return +1/-1 if fn is strictly monotone on the sampled bracket, else raise."""
    xs = np.linspace(bracket[0], bracket[1], samples)
    ys = np.array([fn(x) for x in xs])
    d = np.diff(ys)
    if np.all(d > 0):
        return 1
    if np.all(d < 0):
        return -1
    raise NotMonotone(f"function is not monotone on [{bracket[0]}, {bracket[1]}]")


def _equation(spec: RadiusSpec):
    """(fn, target, bracket) for a transcendental id."""
    i = spec.id
    K = spec.K
    if i in ("Cor3Lower", "Cor3Upper"):
        K = INF
    if i in ("Thm6Lower", "Cor3Lower"):
        return (lambda r: m_k(r, K)), 0.5, (BRACKET[0], 0.9)
    if i == "Rem1Lower":
        return (lambda r: m_k(r, K)), 1.0, (BRACKET[0], 0.9)
    if i in ("Thm6Upper", "Cor3Upper"):
        return (lambda R: upper_equation(R, K, 2.0)), 1.0, BRACKET
    if i == "Rem1Upper":
        return (lambda R: upper_equation(R, K, 1.0)), 1.0, BRACKET
    if i in ("Thm8Lower", "Thm9Lower"):
        return bloch_equation, 0.0, BRACKET
    raise AssertionError(i)


def radius_of(spec: RadiusSpec, tol: float = DEFAULT_TOL) -> RootResult:
    if spec.kind == CLOSED_FORM:
        v = closed_form_radius(spec)
        return RootResult(v, (v, v), 0.0, 0)
    if spec.kind == OPTIMIZATION:
        from .extremal import bloch_sharpness_search

        res = bloch_sharpness_search(tol=max(tol, 1e-9))
        return RootResult(res.r_star, res.r_bracket, res.cubic_residual, res.iterations)
    fn, target, bracket = _equation(spec)
    check_monotone(fn, bracket)
    return solve_monotone_root(fn, target, bracket, tol)
