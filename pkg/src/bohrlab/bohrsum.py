"""Bohr-type majorant functionals of a harmonic map at radius r."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import powser
from .harmonic import HarmonicMap
from .powser import PLAIN, TIMES_N, TRUNCATED, UPPER

FULL = "Full"
SQUARED_CONSTANT = "SquaredConstant"
NO_FIRST_B = "NoFirstB"
DERIVATIVE_WEIGHTED = "DerivativeWeighted"
EUCLIDEAN = "Euclidean"
PSYMMETRIC = "PSymmetric"

TAGS = (FULL, SQUARED_CONSTANT, NO_FIRST_B, DERIVATIVE_WEIGHTED, EUCLIDEAN, PSYMMETRIC)

# coefficients below this are treated as structurally zero in support checks
SUPPORT_TOL = 1e-13


class SupportError(ValueError):
    pass


@dataclass(frozen=True)
class BohrKind:
    tag: str
    K: Optional[float] = None
    p: Optional[int] = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown Bohr functional {self.tag!r}")
        if self.tag == DERIVATIVE_WEIGHTED and (self.K is None or self.K < 1):
            raise ValueError("DerivativeWeighted needs K >= 1")
        if self.tag == PSYMMETRIC and (self.p is None or self.p < 2):
            raise ValueError("PSymmetric needs p >= 2")

    def __str__(self):
        if self.tag == DERIVATIVE_WEIGHTED:
            return f"{self.tag}({self.K:g})"
        if self.tag == PSYMMETRIC:
            return f"{self.tag}({self.p})"
        return self.tag


def _check_support(f: HarmonicMap, p: int):
    for name, c in (("a", f.a), ("b", f.b)):
        bad = np.nonzero((np.abs(c) > SUPPORT_TOL) & (np.arange(c.size) % p != 1))[0]
        if bad.size:
            n = int(bad[0])
            raise SupportError(f"{name}_{n} = {c[n]:.3g} is off the support n = 1 mod {p}")


def bohr_tail(f: HarmonicMap, r: float, kind: BohrKind) -> Optional[float]:
    """Certified bound on the terms beyond the stored order, or None if unavailable."""
    weight = TIMES_N if kind.tag == DERIVATIVE_WEIGHTED else PLAIN
    th = powser.tail_correction(f.h, r, weight)
    tg = powser.tail_correction(f.g, r, weight)
    if th is None or tg is None:
        return None
    extra = th + tg
    if kind.tag == DERIVATIVE_WEIGHTED:
        extra *= _derivative_prefactor(kind.K)
    return extra


def _derivative_prefactor(K: float) -> float:
    return 0.5 if math.isinf(K) else (K + 1) / (2 * K)


def bohr_sum(f: HarmonicMap, r: float, kind: BohrKind = BohrKind(FULL), tail_mode: str = TRUNCATED) -> float:
    if not 0 <= r < 1:
        raise ValueError(f"radius {r} outside [0, 1)")
    if tail_mode not in (TRUNCATED, UPPER):
        raise ValueError(f"unknown tail mode {tail_mode!r}")
    A, B = np.abs(f.a), np.abs(f.b)
    n = np.arange(A.size)
    rn = r**n
    tag = kind.tag
    if tag == NO_FIRST_B and B.size > 1 and B[1] > SUPPORT_TOL:
        raise SupportError(f"b_1 = {f.b[1]:.3g} must vanish for {tag}")
    if tag == PSYMMETRIC:
        _check_support(f, kind.p)

    if tag in (FULL, NO_FIRST_B, PSYMMETRIC):
        val = float(np.sum((A + B) * rn))
    elif tag == SQUARED_CONSTANT:
        val = A[0] ** 2 + float(np.sum((A[1:] + B[1:]) * rn[1:]))
    elif tag == EUCLIDEAN:
        val = A[0] + float(np.sum(np.hypot(A[1:], B[1:]) * rn[1:]))
    elif tag == DERIVATIVE_WEIGHTED:
        val = _derivative_prefactor(kind.K) * float(np.sum((A[1:] + B[1:]) * n[1:] * r ** (n[1:] - 1)))
    else:  # pragma: no cover - guarded by BohrKind
        raise ValueError(tag)

    if tail_mode == UPPER:
        # hypot(a, b) <= a + b, so the plain tails also bound the Euclidean tail
        extra = bohr_tail(f, r, kind)
        if extra is not None:
            val += extra
    return val
