"""Planar harmonic maps f = h + conj(g) built from two truncated series."""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import powser
from .powser import DEFAULT_ORDER, TruncatedSeries


class NotSensePreserving(ValueError):
    pass


def dilatation_bound(K: float) -> float:
    """k = (K-1)/(K+1); K = inf is the explicit limit and gives exactly 1."""
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if math.isinf(K):
        return 1.0
    return (K - 1) / (K + 1)


def k_ratio(K: float) -> float:
    """K/(K+1), exactly 1 in the K = inf limit."""
    if math.isinf(K):
        return 1.0
    return K / (K + 1)


@dataclass(frozen=True)
class QCParams:
    K: float
    k: float

    def __post_init__(self):
        if self.K < 1 or not 0 <= self.k <= 1:
            raise ValueError(f"invalid quasiconformal parameters K={self.K}, k={self.k}")
        if abs(dilatation_bound(self.K) - self.k) > 1e-14:
            raise ValueError("K and k are inconsistent")

    @classmethod
    def from_K(cls, K: float) -> "QCParams":
        return cls(float(K), dilatation_bound(K))

    @classmethod
    def from_k(cls, k: float) -> "QCParams":
        if not 0 <= k <= 1:
            raise ValueError(f"k={k} outside [0, 1]")
        K = math.inf if k == 1 else (1 + k) / (1 - k)
        return cls(K, dilatation_bound(K))


@dataclass(frozen=True, eq=False)
class HarmonicMap:
    h: TruncatedSeries
    g: TruncatedSeries

    def __post_init__(self):
        if self.h.order != self.g.order:
            raise ValueError(f"h and g orders differ: {self.h.order} != {self.g.order}")
        if self.g.coeffs[0] != 0:
            raise ValueError("g must vanish at the origin")

    @property
    def order(self) -> int:
        return self.h.order

    @property
    def a(self) -> np.ndarray:
        return self.h.coeffs

    @property
    def b(self) -> np.ndarray:
        return self.g.coeffs

    @classmethod
    def analytic(cls, h: TruncatedSeries) -> "HarmonicMap":
        return cls(h, powser.polynomial([0.0], h.order))

    def __call__(self, z):
        return powser.evaluate(self.h, z) + np.conj(powser.evaluate(self.g, z))


def normalized_g(h: TruncatedSeries, c: complex) -> TruncatedSeries:
    """c*(h - h(0)): the co-analytic part with the same derivative as c*h."""
    shifted = np.array(h.coeffs, dtype=complex)
    shifted[0] = 0
    return powser.scale(TruncatedSeries(shifted, h.tail), c)


@dataclass(frozen=True)
class PolarGrid:
    radius: float = 0.995
    n_radii: int = 64
    n_angles: int = 256

    def points(self) -> np.ndarray:
        """Radii radius*j/(n_radii+1), j = 1..n_radii+1, crossed with equispaced angles."""
        if not 0 < self.radius < 1:
            raise ValueError(f"grid radius {self.radius} must lie in (0, 1)")
        j = np.arange(1, self.n_radii + 2)
        rs = self.radius * j / (self.n_radii + 1)
        th = 2 * np.pi * np.arange(self.n_angles) / self.n_angles
        return rs[:, None] * np.exp(1j * th)[None, :]


DEFAULT_GRID = PolarGrid()


def _derivatives_on(f: HarmonicMap, z: np.ndarray):
    hp = powser.evaluate(powser.derivative(f.h), z)
    gp = powser.evaluate(powser.derivative(f.g), z)
    return hp, gp


def dilatation(f: HarmonicMap) -> TruncatedSeries:
    hp = powser.derivative(f.h)
    if hp.coeffs[0] == 0:
        raise ZeroDivisionError("h'(0) = 0: the dilatation is not a power series quotient")
    return powser.divide(powser.derivative(f.g), hp)


def qc_constant(f: HarmonicMap, grid: PolarGrid = DEFAULT_GRID) -> float:
    """Sampled lower bound of sup (1+|w|)/(1-|w|) with w = g'/h' evaluated pointwise."""
    hp, gp = _derivatives_on(f, grid.points())
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.abs(gp) / np.abs(hp)
    w = np.where((hp == 0) & (gp == 0), 0.0, w)
    wmax = float(np.max(w))
    if not wmax < 1:
        raise NotSensePreserving(f"|dilatation| reaches {wmax:.6g} on the grid")
    return (1 + wmax) / (1 - wmax)


def jacobian(f: HarmonicMap, z) -> np.ndarray:
    hp, gp = _derivatives_on(f, np.asarray(z))
    return np.abs(hp) ** 2 - np.abs(gp) ** 2


def winding_number(values: np.ndarray) -> int:
    """Winding number about 0 of a closed sampled curve."""
    steps = np.angle(np.roll(values, -1) / values)
    return int(round(float(np.sum(steps)) / (2 * np.pi)))


def is_sense_preserving(f: HarmonicMap, grid: PolarGrid = DEFAULT_GRID) -> bool:
    """J_f > 0 at every grid sample and h' has no zero inside the outer grid circle.

    The winding check catches isolated critical points of h that fall
    between samples; there J_f = -|g'|^2 <= 0.
    """
    z = grid.points()
    hp, gp = _derivatives_on(f, z)
    J = np.abs(hp) ** 2 - np.abs(gp) ** 2
    if not np.all(J > 0):
        return False
    return winding_number(hp[-1]) == 0


def sup_norm_lower(s: TruncatedSeries, grid: PolarGrid = DEFAULT_GRID) -> float:
    return float(np.max(np.abs(powser.evaluate(s, grid.points()))))


def bloch_norm(f: HarmonicMap, grid: PolarGrid = DEFAULT_GRID) -> float:
    """Sampled lower bound of |f(0)| + sup (1-|z|^2)(|h'| + |g'|)."""
    z = grid.points()
    hp, gp = _derivatives_on(f, z)
    weight = 1 - np.abs(z) ** 2
    return abs(complex(f.h.coeffs[0])) + float(np.max(weight * (np.abs(hp) + np.abs(gp))))


# ---------------------------------------------------------------------------
# random instances

BOUNDED = "bounded"
HALFPLANE = "halfplane"
BLOCH = "bloch"
PSYMMETRIC = "psymmetric"
QC = "qc"


@dataclass(frozen=True)
class Profile:
    kind: str
    p: Optional[int] = None
    K: Optional[float] = None

    def __post_init__(self):
        if self.kind not in (BOUNDED, HALFPLANE, BLOCH, PSYMMETRIC, QC):
            raise ValueError(f"unknown profile {self.kind!r}")
        if self.kind == PSYMMETRIC and (self.p is None or self.p < 2):
            raise ValueError("psymmetric profile needs p >= 2")
        if self.kind == QC and self.K is None:
            raise ValueError("qc profile needs K")
        if self.K is not None and not self.K >= 1:
            raise ValueError(f"K must be >= 1, got {self.K}")

    @classmethod
    def parse(cls, text: str) -> "Profile":
        """'bounded', 'qc:3', 'qc:inf', 'psymmetric:2', ..."""
        name, _, arg = text.partition(":")
        if name == PSYMMETRIC:
            return cls(name, p=int(arg))
        if name == QC or (arg and name in (BOUNDED, HALFPLANE)):
            return cls(name, K=float(arg))
        return cls(name)

    def __str__(self):
        if self.kind == PSYMMETRIC:
            return f"{self.kind}:{self.p}"
        if self.K is not None:
            return f"{self.kind}:{self.K:g}"
        return self.kind


def _random_zeros(rng: np.random.Generator, degree: int, rmax: float = 0.9) -> list:
    mods = rmax * np.sqrt(rng.uniform(0, 1, degree))
    args = rng.uniform(0, 2 * np.pi, degree)
    return list(mods * np.exp(1j * args))


def _unimodular(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.uniform()))


def _random_blaschke(rng, N, degree=None, max_degree=3):
    if degree is None:
        degree = int(rng.integers(0, max_degree + 1))
    return powser.blaschke_product(_random_zeros(rng, degree), _unimodular(rng), N)


def _draw_k(rng, profile) -> float:
    """Fixed k = (K-1)/(K+1) when the profile names K, else uniform on [0, 1)."""
    u = float(rng.uniform(0, 1))
    return u if profile.K is None else dilatation_bound(profile.K)


def _co_analytic(rng, hp: TruncatedSeries, k: float, N: int, max_degree: int = 2) -> TruncatedSeries:
    """g with g' = k*B*h' for a random Blaschke product B, so |g'| <= k|h'|."""
    omega = powser.scale(_random_blaschke(rng, N - 1, max_degree=max_degree), k)
    return powser.integrate_from_zero(powser.multiply(omega, hp))


def _halfplane_h(rng, N: int) -> TruncatedSeries:
    """h = 1 - p with p = c(1 + rho*B)/(1 - rho*B), B(0) real, so Re h < 1 and h(0) in (0, 1)."""
    zeros = _random_zeros(rng, int(rng.integers(0, 3)))
    b0 = complex(np.prod([-a for a in zeros])) if zeros else 1.0
    rot = np.conj(b0) / abs(b0) if abs(b0) > 0 else 1.0
    B = powser.blaschke_product(zeros, rot, N)
    rho = float(rng.uniform(0.05, 0.9))
    beta0 = B.coeffs[0].real
    p0_unit = (1 + rho * beta0) / (1 - rho * beta0)
    a0 = float(rng.uniform(0.02, 0.98))
    c = (1 - a0) / p0_unit
    num = powser.add(powser.polynomial([1.0], N), powser.scale(B, rho))
    den = powser.add(powser.polynomial([1.0], N), powser.scale(B, -rho))
    p = powser.scale(powser.divide(num, den), c)
    bmax = max((abs(a) for a in zeros), default=0.0)

    def sup_p(R):
        beta = powser.blaschke_sup_on_circle(zeros, R)
        if rho * beta >= 1:
            return math.inf
        return c * (1 + rho * beta) / (1 - rho * beta)

    tail = powser.cauchy_tail(sup_p, bmax, N) if zeros else None
    if tail is None:
        # B is a unimodular constant: p and h are constants
        tail = (0.0, 0.0)
    coeffs = -p.coeffs
    coeffs[0] = 1 - p.coeffs[0].real
    return TruncatedSeries(coeffs, tail)


def _psymmetric_part(rng, p: int, N: int, degree=None) -> TruncatedSeries:
    """z*phi(z**p) with phi a random Blaschke product, so the sup norm is 1."""
    if degree is None:
        degree = int(rng.integers(0, 3))
    zeros = _random_zeros(rng, degree)
    rot = _unimodular(rng)
    M = (N - 1) // p
    phi = powser.blaschke_product(zeros, rot, M)
    c = np.zeros(N + 1, dtype=complex)
    c[1 + p * np.arange(M + 1)] = phi.coeffs
    rmax = max((abs(a) for a in zeros), default=0.0)
    if not zeros:
        tail = (0.0, 0.0)
    else:
        tail = powser.cauchy_tail(
            lambda R: R * powser.blaschke_sup_on_circle(zeros, R**p), rmax ** (1.0 / p), N
        )
    return TruncatedSeries(c, tail)


def generate_instance(seed: int, profile, N: int = DEFAULT_ORDER, *, degree: Optional[int] = None) -> HarmonicMap:
    """Deterministic random map whose class hypothesis holds by construction.

    bounded / qc(K): h is a random Blaschke product (sup norm exactly 1) and
    g' = k*B2*h' with another Blaschke product B2.  k = (K-1)/(K+1) when the
    profile carries K ('qc:K', 'bounded:K', 'halfplane:K'), otherwise it is
    drawn uniformly from [0, 1).  halfplane: Re h <= 1, h(0) in (0, 1), g as for qc
    with a random k.  psymmetric(p): h = z*phi(z**p) with ||phi|| = 1 and g'
    = k*B2(z**p)*h'.  bloch: h = a0 + s*t*(B1 - B1(0)), g = s*(1-t)*(B2 - B2(0))
    with s = 1 - |a0|, so the harmonic Bloch norm is at most 1.

    ``degree`` fixes the number of zeros of the main Blaschke factor.
    """
    if isinstance(profile, str):
        profile = Profile.parse(profile)
    if N < 2:
        raise ValueError("order must be at least 2")
    rng = np.random.default_rng([int(seed), zlib.crc32(str(profile).encode())])
    kind = profile.kind
    if kind in (BOUNDED, QC):
        h = _random_blaschke(rng, N, degree=degree)
        g = _co_analytic(rng, powser.derivative(h), _draw_k(rng, profile), N)
        return HarmonicMap(h, g)
    if kind == HALFPLANE:
        h = _halfplane_h(rng, N)
        g = _co_analytic(rng, powser.derivative(h), _draw_k(rng, profile), N)
        return HarmonicMap(h, g)
    if kind == PSYMMETRIC:
        p = profile.p
        h = _psymmetric_part(rng, p, N, degree=degree)
        # dilatation of the form k*B2(z**p) keeps g supported on indices pn+1
        w = _psymmetric_part(rng, p, N - 1)
        w_coeffs = np.zeros(N, dtype=complex)
        w_coeffs[: N - 1] = w.coeffs[1:]
        k = float(rng.uniform(0, 1))
        C, q = w.tail
        omega = TruncatedSeries(w_coeffs * k, (k * C * q, q))
        g = powser.integrate_from_zero(powser.multiply(omega, powser.derivative(h)))
        return HarmonicMap(h, g)
    if kind == BLOCH:
        a0 = complex(rng.uniform(-0.9, 0.9), rng.uniform(-0.4, 0.4))
        s = 1 - abs(a0)
        t = 1.0 if rng.uniform() < 0.5 else float(rng.uniform())
        B1 = _random_blaschke(rng, N, degree=degree if degree is not None else int(rng.integers(1, 4)))
        B2 = _random_blaschke(rng, N, degree=int(rng.integers(1, 3)))
        h = normalized_g(B1, s * t)
        h = TruncatedSeries(np.concatenate([[a0], h.coeffs[1:]]), h.tail)
        g = normalized_g(B2, s * (1 - t))
        return HarmonicMap(h, g)
    raise ValueError(f"unknown profile {profile}")
