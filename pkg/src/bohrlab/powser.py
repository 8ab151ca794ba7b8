"""Truncated complex power series with optional geometric tail envelopes.

A series stores c_0..c_N exactly and, optionally, a pair (C, q) with
|c_n| <= C * q**n for every n > N.  The envelope is what lets majorant
sums be bounded from above instead of merely truncated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

DEFAULT_ORDER = 256

Tail = Tuple[float, float]

PLAIN = "plain"
TIMES_N = "times_n"
SQUARED = "squared"
WEIGHTS = (PLAIN, TIMES_N, SQUARED)

TRUNCATED = "truncated"
UPPER = "upper"


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    coeffs: np.ndarray
    tail: Optional[Tail] = None

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("a series needs at least the constant coefficient")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        if self.tail is not None:
            C, q = float(self.tail[0]), float(self.tail[1])
            if not (C >= 0 and 0 <= q < 1):
                raise ValueError(f"invalid tail envelope C={C}, q={q}")
            # an infinite constant certifies nothing
            object.__setattr__(self, "tail", (C, q) if math.isfinite(C) else None)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, n):
        return self.coeffs[n]

    def __repr__(self):
        head = ", ".join(f"{c:.4g}" for c in self.coeffs[:4])
        more = ", ..." if self.order > 3 else ""
        return f"TruncatedSeries([{head}{more}], order={self.order}, tail={self.tail})"

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(other, -1.0))

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return multiply(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return scale(self, -1.0)

    def __call__(self, z):
        return evaluate(self, z)

    def truncate(self, N: int) -> "TruncatedSeries":
        """Drop coefficients above N; the envelope survives only if N is not lowered."""
        if N >= self.order:
            return self.pad(N)
        return TruncatedSeries(self.coeffs[: N + 1])

    def pad(self, N: int) -> "TruncatedSeries":
        """Extend with zeros up to order N (only exact when the tail is zero)."""
        if N <= self.order:
            return self
        if self.tail is not None and self.tail[0] > 0:
            raise ValueError("cannot zero-pad a series with a nonzero tail")
        c = np.zeros(N + 1, dtype=complex)
        c[: self.order + 1] = self.coeffs
        return TruncatedSeries(c, self.tail)

    def is_zero(self) -> bool:
        zero_tail = self.tail is not None and self.tail[0] == 0
        return not np.any(self.coeffs) and zero_tail


def series(coeffs: Sequence[complex], tail: Optional[Tail] = None) -> TruncatedSeries:
    return TruncatedSeries(np.asarray(coeffs, dtype=complex), tail)


def polynomial(coeffs: Sequence[complex], N: Optional[int] = None) -> TruncatedSeries:
    """Finite polynomial: the tail envelope is identically zero."""
    c = np.asarray(coeffs, dtype=complex)
    if N is not None:
        if N + 1 < c.size and np.any(c[N + 1 :]):
            raise ValueError("polynomial degree exceeds the requested order")
        c = np.pad(c, (0, max(0, N + 1 - c.size)))[: N + 1]
    return TruncatedSeries(c, (0.0, 0.0))


def evaluate(s: TruncatedSeries, z):
    """Horner evaluation of the stored coefficients; the tail is ignored."""
    return np.polyval(s.coeffs[::-1], z)


def _envelope(alpha: float, beta: float, q: float, start: int) -> Tail:
    """Return (C', q') with (alpha*n + beta) * q**n <= C' * q'**n for all n >= start."""
    if q == 0.0 or alpha == beta == 0:
        return (0.0, 0.0)
    if not (math.isfinite(alpha) and math.isfinite(beta)):
        return (math.inf, math.sqrt(q))
    q2 = math.sqrt(q)
    rho = q2  # q / q2
    cands = {start}
    if alpha > 0:
        nstar = -1.0 / math.log(rho) - beta / alpha
        cands.update({math.floor(nstar), math.ceil(nstar)})
    best = max((alpha * n + beta) * rho**n for n in cands if n >= start)
    return (best, q2)


def _global_envelope(s: TruncatedSeries, Q: float) -> float:
    """Smallest C with |c_n| <= C*Q**n for every n, using the stored tail beyond N."""
    C = s.tail[0] if s.tail[1] <= Q else math.inf
    mags = np.abs(s.coeffs)
    nz = mags > 0
    if np.any(nz):
        n = np.nonzero(nz)[0]
        C = max(C, float(np.max(np.exp(np.log(mags[nz]) - n * math.log(Q)))))
    return C


def _degree(s: TruncatedSeries) -> int:
    nz = np.nonzero(s.coeffs)[0]
    return int(nz[-1]) if nz.size else 0


def add(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    N = min(s.order, t.order)
    tail = None
    if s.tail is not None and t.tail is not None:
        # coefficients between N and the longer order are folded into the envelope
        ext = [x for x in (s, t) if x.order > N]
        if ext:
            Q = max(s.tail[1], t.tail[1], 0.5)
            C = 0.0
            for x in (s, t):
                if x.order > N:
                    C += _global_envelope(x, Q)
                else:
                    C += x.tail[0] if x.tail[1] <= Q else math.inf
            tail = (C, Q)
        else:
            tail = (s.tail[0] + t.tail[0], max(s.tail[1], t.tail[1]))
    return TruncatedSeries(s.coeffs[: N + 1] + t.coeffs[: N + 1], tail)


def scale(s: TruncatedSeries, c: complex) -> TruncatedSeries:
    tail = None if s.tail is None else (abs(c) * s.tail[0], s.tail[1])
    return TruncatedSeries(s.coeffs * c, tail)


def derivative(s: TruncatedSeries) -> TruncatedSeries:
    """Term-wise n*c_n; order drops by one (order 0 maps to the zero constant)."""
    N = s.order
    if N == 0:
        d = np.zeros(1, dtype=complex)
    else:
        d = s.coeffs[1:] * np.arange(1, N + 1)
    tail = None
    if s.tail is not None:
        C, q = s.tail
        # |d_m| = (m+1)|c_{m+1}| <= C*q*(m+1)*q**m for m >= N
        Cd, qd = _envelope(C * q, C * q, q, N)
        tail = (Cd, qd)
    return TruncatedSeries(d, tail)


def integrate_from_zero(s: TruncatedSeries) -> TruncatedSeries:
    """Antiderivative vanishing at 0; order grows by one."""
    N = s.order
    c = np.zeros(N + 2, dtype=complex)
    c[1:] = s.coeffs / np.arange(1, N + 2)
    tail = None
    if s.tail is not None:
        C, q = s.tail
        tail = (0.0, 0.0) if (C == 0 or q == 0) else (C / q, q)
    return TruncatedSeries(c, tail)


def multiply(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated to the smaller order; exact for two polynomials."""
    exact = s.tail is not None and t.tail is not None and s.tail[0] == 0 and t.tail[0] == 0
    if exact:
        M = max(min(s.order, t.order), _degree(s) + _degree(t))
        c = np.convolve(s.coeffs[: _degree(s) + 1], t.coeffs[: _degree(t) + 1])
        return TruncatedSeries(np.pad(c, (0, M + 1 - c.size)), (0.0, 0.0))
    N = min(s.order, t.order)
    c = np.convolve(s.coeffs[: N + 1], t.coeffs[: N + 1])[: N + 1]
    tail = None
    if s.tail is not None and t.tail is not None:
        Q = max(s.tail[1], t.tail[1], 0.5)
        Cs, Ct = _global_envelope(s, Q), _global_envelope(t, Q)
        # |c_n| <= Cs*Ct*(n+1)*Q**n
        tail = _envelope(Cs * Ct, Cs * Ct, Q, N + 1)
    return TruncatedSeries(c, tail)


def divide(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    """Quotient s/t by forward substitution; never carries a tail envelope."""
    t0 = t.coeffs[0]
    if t0 == 0:
        raise ZeroDivisionError("divisor series has zero constant term")
    N = min(s.order, t.order)
    a, b = s.coeffs[: N + 1], t.coeffs[: N + 1]
    q = np.zeros(N + 1, dtype=complex)
    for n in range(N + 1):
        acc = a[n] - np.dot(b[1 : n + 1], q[n - 1 :: -1][:n]) if n else a[0]
        q[n] = acc / t0
    return TruncatedSeries(q)


def tail_correction(s: TruncatedSeries, r: float, weight: str = PLAIN) -> Optional[float]:
    """Closed-form bound for the weighted majorant terms beyond the stored order."""
    if s.tail is None:
        return None
    C, q = s.tail
    N = s.order
    if C == 0:
        return 0.0
    if weight == PLAIN:
        x = q * r
        return C * x ** (N + 1) / (1 - x)
    if weight == TIMES_N:
        # sum_{n>N} n*C*q**n*r**(n-1) = C*q * d/dx[x**(N+1)/(1-x)] at x = q*r
        x = q * r
        return C * q * ((N + 1) * x**N * (1 - x) + x ** (N + 1)) / (1 - x) ** 2
    if weight == SQUARED:
        x = q * q * r
        return C * C * x ** (N + 1) / (1 - x)
    raise ValueError(f"unknown weight {weight!r}")


def majorant_sum(s: TruncatedSeries, r: float, weight: str = PLAIN, mode: str = TRUNCATED) -> float:
    if not 0 <= r < 1:
        raise ValueError(f"radius {r} outside [0, 1)")
    mags = np.abs(s.coeffs)
    n = np.arange(s.order + 1)
    if weight == PLAIN:
        val = float(np.sum(mags * r**n))
    elif weight == TIMES_N:
        val = float(np.sum(n[1:] * mags[1:] * r ** (n[1:] - 1)))
    elif weight == SQUARED:
        val = float(np.sum(mags**2 * r**n))
    else:
        raise ValueError(f"unknown weight {weight!r}")
    if mode == UPPER:
        extra = tail_correction(s, r, weight)
        if extra is not None:
            val += extra
    elif mode != TRUNCATED:
        raise ValueError(f"unknown tail mode {mode!r}")
    return val


def disk_automorphism(a: float, N: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Coefficients of (a - z)/(1 - a z) for real a in [0, 1)."""
    if not 0 <= a < 1:
        raise ValueError(f"automorphism parameter {a} outside [0, 1)")
    c = np.empty(N + 1, dtype=complex)
    c[0] = a
    if N:
        c[1:] = -(1 - a * a) * a ** np.arange(N)
    tail = ((1 - a * a) / a, a) if a > 0 else (0.0, 0.0)
    return TruncatedSeries(c, tail)


def blaschke_sup_on_circle(zeros: Sequence[complex], R: float) -> float:
    """Max of |B| on |z| = R > 1, valid while R*|zero| < 1 for every zero.

    Uses |1 - conj(a) z|^2 - |z - a|^2 = (1 - |z|^2)(1 - |a|^2) factor by factor.
    """
    out = 1.0
    for a in zeros:
        m = abs(a)
        if R * m >= 1:
            return math.inf
        out *= math.sqrt(1 + (R * R - 1) * (1 - m * m) / (1 - R * m) ** 2)
    return out


def cauchy_tail(sup_bound, rho: float, N: int) -> Tail:
    """Pick a circle radius R in (1, 1/rho) and return the Cauchy-estimate envelope.

    ``sup_bound(R)`` must bound the function's modulus on |z| = R.
    """
    Rmax = 1.0 / rho if rho > 1 / 16 else 16.0
    ts = [0.95, 0.9, 0.8, 0.7, 0.6, 0.5, 0.35, 0.25, 0.15, 0.1, 0.05, 0.02, 0.01, 0.003, 0.001]
    cands = [1 + (Rmax - 1) * t for t in ts]
    best = None
    for R in cands:
        M = sup_bound(R)
        if not math.isfinite(M):
            continue
        score = math.log(M) - (N + 1) * math.log(R) if M > 0 else -math.inf
        if best is None or score < best[0]:
            best = (score, M, 1.0 / R)
    if best is None:
        return (math.inf, 0.999)
    return (best[1], best[2])


def blaschke_product(zeros: Sequence[complex], rotation: complex = 1.0, N: int = DEFAULT_ORDER) -> TruncatedSeries:
    """rotation * prod (z - a)/(1 - conj(a) z), truncated at order N."""
    zeros = [complex(a) for a in zeros]
    if any(abs(a) >= 1 for a in zeros):
        raise ValueError("Blaschke zeros must lie in the open unit disk")
    c = np.zeros(N + 1, dtype=complex)
    c[0] = rotation
    n = np.arange(N)
    for a in zeros:
        factor = np.empty(N + 1, dtype=complex)
        factor[0] = -a
        if N:
            factor[1:] = (1 - abs(a) ** 2) * np.conj(a) ** n
        c = np.convolve(c, factor)[: N + 1]
    rho = max((abs(a) for a in zeros), default=0.0)
    if not zeros:
        tail = (0.0, 0.0)
    else:
        tail = cauchy_tail(lambda R: blaschke_sup_on_circle(zeros, R), rho, N)
    return TruncatedSeries(c, tail)
