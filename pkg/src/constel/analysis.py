"""Density analysis for prime constellations.

Three ingredients meet here: truncated Hardy-Littlewood products c_m, the
m-th logarithmic integral li_m as the comparison density, and empirical
counts.  The proportionality factor of a counted pattern is estimated as
count / li_m(n) and compared against its conjectured closed form where one
exists: 2*c_2, (9/2)*c_3, and (27/2)*c_4 for the basic patterns of length
2 to 4, and for a pair with gap n the twin factor scaled by
prod (q-1)/(q-2) over odd primes q dividing n.  No closed form is
conjectured for lengths 5 and 6; asking for one is a domain error.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import quad

from . import sieve
from .counter import ConstellationCount
from .errors import DomainError
from .patterns import OffsetPattern, classify

DEFAULT_PRIME_BOUND = 10**8

# Conjectured rational multipliers r_m with C(m) = r_m * c_m.
CONJECTURED_RATIONALS = {
    2: Fraction(2, 1),
    3: Fraction(9, 2),
    4: Fraction(27, 2),
}

# Smallest prime exceeding m: the product over p > m must include it.
_FIRST_FACTOR_PRIME = {2: 3, 3: 5, 4: 5, 5: 7, 6: 7}


@dataclass(frozen=True)
class HLConstant:
    """A truncated Hardy-Littlewood constant.

    value is the product of p^(m-1) * (p - m) / (p - 1)^m over primes
    m < p <= prime_bound.  tail_bound bounds the relative error against the
    infinite product: the omitted log terms are negative and their total
    magnitude is below m*(m-1) / (2*(prime_bound - 1)).
    """

    m: int
    value: float
    prime_bound: int
    tail_bound: float


@dataclass(frozen=True)
class LogIntegralValue:
    """li_m(upper): the integral of dx / log(x)^m from 2 to upper."""

    m: int
    upper: float
    value: float
    error_estimate: float


@dataclass(frozen=True, eq=False)
class PdfEstimate:
    """Empirical proportionality factor for a counted pattern.

    c_estimate = count / li_m(limit).  conjectured is the closed-form
    prediction when one exists for the pattern, else None; deviation is the
    absolute difference and relative_deviation divides that by the
    conjectured value.
    """

    pattern: OffsetPattern
    limit: int
    count: int
    li: LogIntegralValue
    c_estimate: float
    conjectured: float | None
    deviation: float | None
    relative_deviation: float | None


_hl_lock = threading.Lock()
_hl_cache: dict[tuple[int, int], HLConstant] = {}


def _validate_hl_args(m: int, prime_bound: int) -> None:
    if m not in _FIRST_FACTOR_PRIME:
        raise DomainError(f"Hardy-Littlewood order m must be in 2..6, got {m}")
    first = _FIRST_FACTOR_PRIME[m]
    if prime_bound < first:
        raise DomainError(
            f"prime_bound {prime_bound} omits every factor; need at least "
            f"{first} for m={m}")


def hl_constants(ms, prime_bound: int = DEFAULT_PRIME_BOUND) -> dict[int, HLConstant]:
    """Truncated Hardy-Littlewood constants for several orders in one pass.

    The prime stream is generated once and each order accumulates its log
    terms with compensated summation: exact per-chunk sums via math.fsum,
    merged with math.fsum, so the result does not depend on the chunking.
    """
    wanted = sorted(set(int(m) for m in ms))
    for m in wanted:
        _validate_hl_args(m, prime_bound)
    with _hl_lock:
        missing = [m for m in wanted if (m, prime_bound) not in _hl_cache]
    if missing:
        partial = {m: [] for m in missing}
        for chunk in sieve.iter_prime_chunks(2, prime_bound):
            p = chunk.astype(np.float64)
            for m in missing:
                q = p[chunk > m] if chunk[0] <= m else p
                if q.size == 0:
                    continue
                terms = np.log1p(-m / q) - m * np.log1p(-1.0 / q)
                partial[m].append(math.fsum(terms.tolist()))
        with _hl_lock:
            for m in missing:
                tail = m * (m - 1) / (2.0 * (prime_bound - 1))
                _hl_cache[(m, prime_bound)] = HLConstant(
                    m, math.exp(math.fsum(partial[m])), prime_bound, tail)
    with _hl_lock:
        return {m: _hl_cache[(m, prime_bound)] for m in wanted}


def hl_constant(m: int, prime_bound: int = DEFAULT_PRIME_BOUND) -> HLConstant:
    """The truncated Hardy-Littlewood constant c_m; see hl_constants."""
    return hl_constants([m], prime_bound)[m]


def log_integral(m: int, upper: float, rel_tol: float = 1e-10) -> LogIntegralValue:
    """li_m(upper) = integral of dx / log(x)^m over [2, upper].

    Substituting x = e^t turns the integrand into e^t / t^m on
    [log 2, log upper], which adaptive Gauss-Kronrod quadrature handles to
    near machine precision; rel_tol must lie in (0, 1e-3].
    """
    value, err = _li_between(m, 2.0, upper, rel_tol)
    return LogIntegralValue(m, float(upper), value, err)


def log_integral_between(m: int, lower: float, upper: float,
                         rel_tol: float = 1e-10) -> LogIntegralValue:
    """The same integral taken over [lower, upper] with lower >= 2."""
    if lower < 2:
        raise DomainError(f"lower bound must be >= 2, got {lower}")
    value, err = _li_between(m, lower, upper, rel_tol)
    return LogIntegralValue(m, float(upper), value, err)


def _li_between(m: int, lower: float, upper: float,
                rel_tol: float) -> tuple[float, float]:
    if m < 1:
        raise DomainError(f"logarithmic integral order must be >= 1, got {m}")
    if not 0 < rel_tol <= 1e-3:
        raise DomainError(f"rel_tol must be in (0, 1e-3], got {rel_tol}")
    if upper < lower:
        raise DomainError(f"upper bound {upper} below lower bound {lower}")
    if upper == lower:
        return 0.0, 0.0
    value, err = quad(lambda t: math.exp(t) / t**m,
                      math.log(lower), math.log(upper),
                      epsabs=0.0, epsrel=rel_tol, limit=200)
    return float(value), float(err)


def conjectured_pdf(m: int, prime_bound: int = DEFAULT_PRIME_BOUND) -> float:
    """The conjectured factor C(m) = r_m * c_m for the basic pattern of length m.

    Only m in 2..4 carries a conjectured rational r_m; for m in 5..6 the
    factor has no known closed form and this raises DomainError.
    """
    if m not in CONJECTURED_RATIONALS:
        if m in _FIRST_FACTOR_PRIME:
            raise DomainError(
                f"no conjectured rational multiplier for m={m}; the factor "
                "can only be measured")
        raise DomainError(f"no conjectured factor for m={m}")
    r = CONJECTURED_RATIONALS[m]
    return float(r) * hl_constant(m, prime_bound).value


def _odd_prime_divisors(n: int) -> list[int]:
    out = []
    while n % 2 == 0:
        n //= 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 2
    if n > 1:
        out.append(n)
    return out


def gap_pdf(gap: int, prime_bound: int = DEFAULT_PRIME_BOUND) -> float:
    """Conjectured factor for pairs (p, p + gap) with an even gap >= 2.

    Scales the twin factor by (q - 1) / (q - 2) for each odd prime q
    dividing the gap; gaps that are powers of two keep the twin factor
    unchanged.
    """
    if gap < 2 or gap % 2:
        raise DomainError(f"gap must be even and >= 2, got {gap}")
    value = conjectured_pdf(2, prime_bound)
    for q in _odd_prime_divisors(gap):
        value *= (q - 1) / (q - 2)
    return value


def estimate_pdf(count: ConstellationCount,
                 prime_bound: int = DEFAULT_PRIME_BOUND,
                 rel_tol: float = 1e-10) -> PdfEstimate:
    """Estimate the proportionality factor of a counted pattern.

    Divides the count by li_m(limit) and, when the pattern carries a
    conjectured factor (a basic pattern of length 2..4, or any pair via the
    gap rule), reports absolute and relative deviations from it.  Limits
    below 100 are refused and limits below 10^4 only warn: the estimate is
    then dominated by small-prime noise.
    """
    job = count.job
    pattern = job.pattern
    if job.limit < 100:
        raise DomainError(
            f"limit {job.limit} is too small for a density estimate; "
            "need at least 100")
    if job.limit < 10**4:
        warnings.warn(
            f"density estimate at limit {job.limit} is noisy; prefer "
            "limits of at least 1e4", stacklevel=2)
    li = log_integral(pattern.m, job.limit, rel_tol)
    c_estimate = count.count / li.value
    conjectured = None
    if pattern.m in CONJECTURED_RATIONALS and classify(pattern).is_basic:
        conjectured = conjectured_pdf(pattern.m, prime_bound)
    elif pattern.m == 2:
        conjectured = gap_pdf(pattern.span, prime_bound)
    deviation = None
    relative = None
    if conjectured is not None:
        deviation = abs(c_estimate - conjectured)
        relative = deviation / conjectured
    return PdfEstimate(pattern, job.limit, count.count, li, c_estimate,
                       conjectured, deviation, relative)


def ratio_to_hl(estimate: PdfEstimate, hl: HLConstant | None = None,
                prime_bound: int = DEFAULT_PRIME_BOUND) -> float:
    """The measured multiplier c_estimate / c_m.

    For patterns with a conjectured factor this approaches the rational
    r_m; for lengths 5 and 6 it is the object of study.  Pass an explicit
    HLConstant to pin the denominator, e.g. one computed at a different
    prime bound.
    """
    if hl is None:
        hl = hl_constant(estimate.pattern.m, prime_bound)
    elif hl.m != estimate.pattern.m:
        raise DomainError(
            f"constant of order {hl.m} cannot scale a length-"
            f"{estimate.pattern.m} estimate")
    return estimate.c_estimate / hl.value


def rational_candidates(x: float, max_denominator: int,
                        tolerance: float) -> list[tuple[int, int, float]]:
    """All reduced fractions p/q with q <= max_denominator near x.

    Returns (numerator, denominator, distance) triples with
    |p/q - x| <= tolerance, sorted by distance and then denominator.  The
    search walks the Stern-Brocot tree: a subtree is entered only when its
    interval meets the target window, so the work stays proportional to the
    answer plus one root-to-window path.
    """
    if not math.isfinite(x) or x <= 0:
        raise DomainError(f"target must be a positive finite number, got {x}")
    if max_denominator < 1:
        raise DomainError(
            f"max_denominator must be >= 1, got {max_denominator}")
    if not 0 <= tolerance < math.inf:
        raise DomainError(f"tolerance must be non-negative, got {tolerance}")
    lo = x - tolerance
    hi = x + tolerance
    found = []
    if abs(0.0 - x) <= tolerance:
        found.append((0, 1, abs(0.0 - x)))
    # Stack of open Stern-Brocot intervals (a/b, c/d); 1/0 stands for infinity.
    stack = [(0, 1, 1, 0)]
    while stack:
        a, b, c, d = stack.pop()
        num, den = a + c, b + d
        if den > max_denominator:
            continue
        v = num / den
        if v < lo:
            stack.append((num, den, c, d))
        elif v > hi:
            stack.append((a, b, num, den))
        else:
            found.append((num, den, abs(v - x)))
            stack.append((a, b, num, den))
            stack.append((num, den, c, d))
    found.sort(key=lambda t: (t[2], t[1], t[0]))
    return found


def result_record(estimate: PdfEstimate, hl: HLConstant) -> dict:
    """Flatten an estimate into the stable export field set.

    Field names are part of the output contract: pattern, limit, count,
    li_value, c_estimate, conjectured, deviation, c_m, ratio.
    """
    return {
        "pattern": str(estimate.pattern),
        "limit": estimate.limit,
        "count": estimate.count,
        "li_value": estimate.li.value,
        "c_estimate": estimate.c_estimate,
        "conjectured": estimate.conjectured,
        "deviation": estimate.deviation,
        "c_m": hl.value,
        "ratio": estimate.c_estimate / hl.value,
    }
