"""Kummer function of the first kind, 1F1(a; b; x), for real a, b and x >= 0.

Three evaluation routes:

``kummer_series``
    Direct power series with the term recurrence
    ``t[k+1] = t[k] (a + k) x / ((b + k)(k + 1))``.  The float sum carries a
    running cancellation estimate; when cancellation would cost more than the
    requested relative tolerance the same recurrence is rerun in
    multiprecision arithmetic (gmpy2 ``mpfr``), so large negative ``a`` stays exact.
``kummer_polynomial``
    ``a = -n``: the terminating sum, evaluated in exact rational arithmetic
    and rounded once.
``kummer_asymptotic``
    Large ``-A`` cosine form used for the hard-wall quantization,
    implemented with the prefactor exactly as used there.  Its accuracy is
    measured against the series by the test-suite, not assumed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .errors import DomainError, NoConvergence, PoleAtB

EPS = np.finfo(float).eps
TERM_RTOL = 1e-16
SMALL_RUN = 3
MAX_TERMS = 1_000_000

# Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients).
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


class Method(str, enum.Enum):
    AUTO = "auto"
    SERIES = "series"
    POLYNOMIAL = "polynomial"
    ASYMPTOTIC = "asymptotic"


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0 (Lanczos, g=7)."""
    if not x > 0:
        raise DomainError(f"log_gamma needs x > 0, got {x!r}")
    if x < 0.5:
        # keep the Lanczos sum away from its poles
        return log_gamma(x + 1.0) - math.log(x)
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(acc)


def _check_b(b: float) -> None:
    if b <= 0 and float(b).is_integer():
        raise PoleAtB(f"b = {b!r} is a pole of 1F1")


def _check_x(x) -> None:
    if np.any(np.asarray(x) < 0):
        raise DomainError("1F1 is only evaluated for x >= 0 here")


def _series_float(a: np.ndarray, b: float, x: np.ndarray):
    """Vectorised float series.

    Returns ``(value, abs_sum, nterms)``; ``abs_sum`` is the sum of term
    magnitudes, the natural scale of the rounding error.
    """
    a, x = np.broadcast_arrays(np.asarray(a, float), np.asarray(x, float))
    term = np.ones(a.shape)
    total = np.ones(a.shape)
    abs_sum = np.ones(a.shape)
    small = np.zeros(a.shape, dtype=int)
    live = np.ones(a.shape, dtype=bool)
    nterms = np.zeros(a.shape, dtype=int)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(MAX_TERMS):
            term = np.where(live, term * (a + k) * x / ((b + k) * (k + 1)), term)
            total = np.where(live, total + term, total)
            abs_sum = np.where(live, abs_sum + np.abs(term), abs_sum)
            nterms = np.where(live, k + 1, nterms)
            tiny = np.abs(term) <= TERM_RTOL * np.abs(total)
            small = np.where(tiny, small + 1, 0)
            live &= (small < SMALL_RUN) & np.isfinite(total)
            if not live.any():
                break
        else:
            raise NoConvergence(f"1F1 series did not converge in {MAX_TERMS} terms")
    return total, abs_sum, nterms


def _series_mp(a: float, b: float, x: float, bits: int):
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        am, bm, xm = mpfr(a), mpfr(b), mpfr(x)
        term = mpfr(1)
        total = mpfr(1)
        abs_sum = mpfr(1)
        small = 0
        for k in range(MAX_TERMS):
            term = term * (am + k) * xm / ((bm + k) * (k + 1))
            total += term
            abs_sum += abs(term)
            small = small + 1 if abs(term) <= TERM_RTOL * abs(total) else 0
            if small >= SMALL_RUN:
                return total, abs_sum, k + 1
    raise NoConvergence(f"1F1 series did not converge in {MAX_TERMS} terms")


_BITS_PER_DIGIT = math.log2(10)


def _series_accurate(a: float, b: float, x: float, rtol: float, abs_sum_hint=None) -> float:
    """Multiprecision series, raising precision until cancellation is covered."""
    want = -math.log10(rtol) + 5
    if abs_sum_hint is not None and math.isfinite(abs_sum_hint):
        digits = math.log10(max(abs_sum_hint, 1.0)) + want + 5
    else:
        digits = 30
    for _ in range(10):
        bits = int(digits * _BITS_PER_DIGIT) + 8
        total, abs_sum, nterms = _series_mp(a, b, x, bits)
        if total == 0:
            return 0.0
        # decimal digits lost to cancellation, plus accumulated rounding
        loss = float(gmpy2.log10(abs_sum / abs(total))) + math.log10(nterms + 1)
        if digits >= loss + want:
            return float(total)
        digits = loss + want + 10
    return float(total)


def _needs_mp(value, abs_sum, nterms, rtol):
    # measured float error stays below eps * abs_sum; sqrt(K) adds margin
    est = np.sqrt(nterms + 1.0) * EPS * abs_sum
    with np.errstate(invalid="ignore"):
        return ~np.isfinite(value) | ~np.isfinite(abs_sum) | (est > rtol * np.abs(value))


def _refined(a, b, x, rtol_float, rtol_mp):
    value, abs_sum, nterms = _series_float(a, b, x)
    redo = _needs_mp(value, abs_sum, nterms, rtol_float)
    if redo.any():
        aa, xx = np.broadcast_arrays(np.asarray(a, float), np.asarray(x, float))
        value = np.array(value, copy=True)
        for i in np.flatnonzero(redo):
            value.flat[i] = _series_accurate(
                float(aa.flat[i]), b, float(xx.flat[i]), rtol_mp, float(abs_sum.flat[i])
            )
    return value


def kummer_series(a, b: float, x, *, rtol: float = 1e-14):
    """1F1(a; b; x) by the power series.

    ``a`` and ``x`` may be arrays (broadcast); ``b`` is scalar.  Entries whose
    estimated float cancellation error exceeds ``rtol`` relative are
    recomputed with the same recurrence in multiprecision.
    """
    _check_b(b)
    _check_x(x)
    value = _refined(a, b, x, rtol, rtol)
    if np.ndim(a) == 0 and np.ndim(x) == 0:
        return float(value)
    return value


def series_signs(a, b: float, x):
    """Signs of 1F1 good enough for bracketing roots.

    Float evaluation, with multiprecision only where the rounding estimate
    is comparable to the value itself.
    """
    _check_b(b)
    _check_x(x)
    return np.sign(_refined(a, b, x, 0.25, 1e-3))


def _poly_coefficients(n: int, b: float) -> list[Fraction]:
    fb = Fraction(b)
    coef = [Fraction(1)]
    for k in range(n):
        coef.append(coef[-1] * (k - n) / ((fb + k) * (k + 1)))
    return coef


def _horner(coef: list[Fraction], x: float) -> float:
    fx = Fraction(x)
    acc = Fraction(0)
    for c in reversed(coef):
        acc = acc * fx + c
    return float(acc)


def kummer_polynomial(n: int, b: float, x):
    """1F1(-n; b; x), the degree-n polynomial, summed exactly then rounded."""
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise DomainError(f"polynomial route needs integer n >= 0, got {n!r}")
    _check_b(b)
    _check_x(x)
    coef = _poly_coefficients(int(n), b)
    if np.ndim(x) == 0:
        return _horner(coef, float(x))
    xs = np.asarray(x, float)
    out = np.empty(xs.shape)
    for idx, xv in np.ndenumerate(xs):
        out[idx] = _horner(coef, float(xv))
    return out


def kummer_asymptotic(A: float, B: float, x0: float) -> float:
    """Large ``-A`` form:

    Gamma(B)/sqrt(pi) e^{x0/2} (B x0/2 - A x0)^{(1-B)/2}
        * cos(sqrt(2 B x0 - 4 A x0) - B pi/2 + pi/4)
    """
    if not B > 0:
        raise DomainError(f"asymptotic form needs B > 0, got {B!r}")
    base = B * x0 / 2.0 - A * x0
    if not base > 0:
        raise DomainError(f"B x0/2 - A x0 = {base!r} must be positive")
    phase = math.sqrt(2.0 * B * x0 - 4.0 * A * x0) - B * math.pi / 2.0 + math.pi / 4.0
    log_pref = log_gamma(B) - 0.5 * math.log(math.pi) + x0 / 2.0
    log_pref += (1.0 - B) / 2.0 * math.log(base)
    return math.exp(log_pref) * math.cos(phase)


def _as_nonpositive_int(a: float) -> int | None:
    if float(a).is_integer() and a <= 0:
        return int(-a)
    return None


@dataclass(frozen=True)
class KummerQuery:
    a: float
    b: float
    x: float
    method: Method = Method.AUTO

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        _check_b(self.b)
        _check_x(self.x)
        if self.method is Method.POLYNOMIAL and _as_nonpositive_int(self.a) is None:
            raise DomainError(f"polynomial method needs a = -n, got a = {self.a!r}")

    def evaluate(self) -> float:
        return kummer(self.a, self.b, self.x, self.method)


def kummer(a, b: float, x, method: Method | str = Method.AUTO):
    """Dispatch on ``method``; ``auto`` picks the polynomial for exact ``a = -n``."""
    method = Method(method)
    if method is Method.ASYMPTOTIC:
        return kummer_asymptotic(a, b, x)
    n = _as_nonpositive_int(a) if np.ndim(a) == 0 else None
    if method is Method.POLYNOMIAL:
        if n is None:
            raise DomainError(f"polynomial method needs a = -n, got a = {a!r}")
        return kummer_polynomial(n, b, x)
    if method is Method.AUTO and n is not None:
        return kummer_polynomial(n, b, x)
    return kummer_series(a, b, x)
