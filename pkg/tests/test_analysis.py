"""Analytic layer: products, integrals, estimates, and rational search."""

import math
import random

import numpy as np
import pytest

from constel.analysis import (conjectured_pdf, estimate_pdf, gap_pdf,
                              hl_constant, hl_constants, log_integral,
                              log_integral_between, ratio_to_hl,
                              rational_candidates, result_record)
from constel.counter import ConstellationCount, CountJob
from constel.errors import DomainError
from constel.patterns import OffsetPattern, basic_pattern_for

from oracles import (CONJECTURED_REFERENCE, HL_REFERENCE, LI_REFERENCE,
                     hl_reference, rationals_near, simpson_li)


def _fake_count(offsets, limit, count):
    # the analytic layer only reads pattern, limit, and count
    job = CountJob(OffsetPattern(offsets), limit)
    return ConstellationCount(job, count, 0, 0.0)


# ---------------------------------------------------------------- products

def test_hl_constants_approach_reference_within_tail_bound():
    for m, ref in HL_REFERENCE.items():
        hl = hl_constant(m, prime_bound=10**6)
        true = float(ref)
        # the truncated product overshoots the infinite one and the excess
        # is controlled by the documented tail bound
        assert true < hl.value <= true * (1.0 + hl.tail_bound), m
        assert hl.tail_bound == m * (m - 1) / (2 * (10**6 - 1))


def test_hl_refinement_shrinks_toward_reference():
    for m in (2, 5):
        coarse = hl_constant(m, prime_bound=10**5).value
        fine = hl_constant(m, prime_bound=10**6).value
        true = float(HL_REFERENCE[m])
        assert true < fine < coarse


def test_hl_multi_order_pass_matches_single_calls():
    both = hl_constants([2, 3, 4, 5, 6], prime_bound=10**5)
    for m in (2, 3, 4, 5, 6):
        assert both[m].value == hl_constant(m, prime_bound=10**5).value


def test_hl_twin_product_equivalence():
    # for m=2 the factor rewrites as 1 - 1/(p-1)^2; an independent direct
    # product over the same primes must agree to near machine precision
    from constel.sieve import primes_up_to

    primes = primes_up_to(10**6).primes
    direct = math.exp(math.fsum(
        math.log1p(-1.0 / (p - 1) ** 2) for p in primes[1:].tolist()))
    assert hl_constant(2, prime_bound=10**6).value == pytest.approx(
        direct, rel=1e-13)


def test_hl_value_independent_of_chunking(monkeypatch):
    import constel.analysis as analysis

    baseline = hl_constant(3, prime_bound=10**5).value
    real_iter = analysis.sieve.iter_prime_chunks

    def tiny_chunks(lo, hi, segment_length=None):
        return real_iter(lo, hi, segment_length=997)

    monkeypatch.setattr(analysis.sieve, "iter_prime_chunks", tiny_chunks)
    analysis._hl_cache.clear()
    try:
        rechunked = hl_constant(3, prime_bound=10**5).value
    finally:
        analysis._hl_cache.clear()
    assert rechunked == pytest.approx(baseline, rel=1e-14)


def test_hl_reference_oracle_confirms_frozen_values():
    # recompute two frozen constants through the prime-zeta route
    from mpmath import mp, mpf

    for m in (2, 5):
        live = hl_reference(m, dps=40)
        with mp.workdps(40):
            assert abs(live - mpf(HL_REFERENCE[m])) < mpf(10) ** -28, m


def test_hl_domain_errors():
    with pytest.raises(DomainError):
        hl_constant(1)
    with pytest.raises(DomainError):
        hl_constant(7)
    with pytest.raises(DomainError):
        hl_constant(2, prime_bound=2)
    with pytest.raises(DomainError):
        hl_constant(5, prime_bound=5)
    # the smallest usable bound is the first factor prime
    assert hl_constant(2, prime_bound=3).value == pytest.approx(
        (3 * 1) / 4, rel=1e-15)


# --------------------------------------------------------------- integrals

def test_log_integral_matches_reference_values():
    for (m, upper), ref in LI_REFERENCE.items():
        got = log_integral(m, upper)
        assert got.value == pytest.approx(ref, rel=1e-10), (m, upper)
        assert got.error_estimate < abs(ref) * 1e-8


def test_log_integral_matches_simpson_oracle():
    for m, upper in ((1, 10**6), (2, 10**8), (3, 10**5), (5, 10**9)):
        assert log_integral(m, upper).value == pytest.approx(
            simpson_li(m, upper), rel=1e-10)


def test_log_integral_edge_cases():
    assert log_integral(2, 2).value == 0.0
    assert log_integral(2, 2).error_estimate == 0.0
    with pytest.raises(DomainError):
        log_integral(0, 100)
    with pytest.raises(DomainError):
        log_integral(2, 1.5)
    with pytest.raises(DomainError):
        log_integral(2, 100, rel_tol=0.0)
    with pytest.raises(DomainError):
        log_integral(2, 100, rel_tol=0.01)
    with pytest.raises(DomainError):
        log_integral_between(2, 1.0, 100.0)


def test_log_integral_additivity_on_random_splits():
    rng = random.Random(60)
    for _ in range(20):
        m = rng.randrange(1, 7)
        b = math.exp(rng.uniform(math.log(3), math.log(10**10)))
        c = b * math.exp(rng.uniform(0.1, 5.0))
        whole = log_integral(m, c)
        left = log_integral(m, b)
        right = log_integral_between(m, b, c)
        assert left.value + right.value == pytest.approx(whole.value, rel=1e-9)


def test_log_integral_is_increasing():
    values = [log_integral(2, upper).value for upper in (10, 100, 10**4, 10**6)]
    assert values == sorted(values)
    assert values[0] > 0


# --------------------------------------------------------------- estimates

def test_conjectured_pdf_values():
    for m, ref in CONJECTURED_REFERENCE.items():
        got = conjectured_pdf(m, prime_bound=10**6)
        assert got == pytest.approx(float(ref), rel=1e-5), m
    with pytest.raises(DomainError):
        conjectured_pdf(5)
    with pytest.raises(DomainError):
        conjectured_pdf(6)
    with pytest.raises(DomainError):
        conjectured_pdf(1)


def test_gap_pdf_scaling():
    c2 = conjectured_pdf(2, prime_bound=10**6)
    assert gap_pdf(2, prime_bound=10**6) == c2
    # powers of two keep the twin factor
    assert gap_pdf(4, prime_bound=10**6) == c2
    assert gap_pdf(16, prime_bound=10**6) == c2
    # odd prime divisors scale by (q-1)/(q-2), each counted once
    assert gap_pdf(6, prime_bound=10**6) == pytest.approx(2 * c2, rel=1e-15)
    assert gap_pdf(18, prime_bound=10**6) == pytest.approx(2 * c2, rel=1e-15)
    assert gap_pdf(30, prime_bound=10**6) == pytest.approx(
        2 * (4 / 3) * c2, rel=1e-15)
    assert gap_pdf(14, prime_bound=10**6) == pytest.approx(
        (6 / 5) * c2, rel=1e-15)
    with pytest.raises(DomainError):
        gap_pdf(3)
    with pytest.raises(DomainError):
        gap_pdf(0)


def test_estimate_pdf_published_pair_experiments():
    # published twin run: 27,412,673 pairs below 1e10 and a printed factor
    # of 1.32038, deviating by about 4.5e-5 relative from 2*c_2
    est = estimate_pdf(_fake_count((0, 2), 10**10, 27_412_673),
                       prime_bound=10**6)
    assert est.li.value == pytest.approx(LI_REFERENCE[(2, 10**10)], rel=1e-10)
    assert est.c_estimate == pytest.approx(1.3203841519, abs=1e-9)
    assert round(est.c_estimate, 5) == 1.32038
    assert 4.0e-5 < est.relative_deviation < 5.0e-5
    assert est.deviation == pytest.approx(
        est.relative_deviation * est.conjectured, rel=1e-12)


def test_estimate_pdf_published_triplet_experiment():
    # published triplet run: 4,942,554 below 2e10, printed factor 2.85768,
    # relative deviation about 2e-4
    est = estimate_pdf(_fake_count((0, 2, 6), 2 * 10**10, 4_942_554),
                       prime_bound=10**6)
    assert est.c_estimate == pytest.approx(2.8576805569, abs=1e-9)
    assert str(est.c_estimate)[:7] == "2.85768"
    assert 1.8e-4 < est.relative_deviation < 2.2e-4


def test_estimate_pdf_published_quadruplet_experiment():
    # published quadruplet run: 898,998 below 7e10; the factor works out to
    # 4.150434, about 1.8e-4 relative below (27/2)*c_4
    est = estimate_pdf(_fake_count((0, 2, 6, 8), 7 * 10**10, 898_998),
                       prime_bound=10**6)
    assert est.c_estimate == pytest.approx(4.1504335846, abs=1e-9)
    assert 1.5e-4 < est.relative_deviation < 2.1e-4


def test_estimate_pdf_published_quintuplet_experiment():
    # published quintuplet run: 370,502 below 4e11; no conjectured factor
    est = estimate_pdf(_fake_count((0, 2, 6, 8, 12), 4 * 10**11, 370_502),
                       prime_bound=10**6)
    assert est.c_estimate == pytest.approx(10.1192699132, abs=1e-8)
    assert round(est.c_estimate, 4) == 10.1193
    assert est.conjectured is None
    assert est.deviation is None
    assert est.relative_deviation is None


def test_estimate_pdf_gap_patterns_get_gap_conjecture():
    est = estimate_pdf(_fake_count((0, 6), 10**6, 1), prime_bound=10**6)
    assert est.conjectured == pytest.approx(
        gap_pdf(6, prime_bound=10**6), rel=1e-15)
    # longer non-basic patterns carry no conjecture
    est = estimate_pdf(_fake_count((0, 2, 12), 10**6, 1), prime_bound=10**6)
    assert est.conjectured is None


def test_estimate_pdf_small_limits():
    with pytest.raises(DomainError):
        estimate_pdf(_fake_count((0, 2), 99, 1))
    with pytest.warns(UserWarning, match="noisy"):
        estimate_pdf(_fake_count((0, 2), 5000, 100), prime_bound=10**6)


def test_ratio_to_hl():
    hl = hl_constant(2, prime_bound=10**6)
    est = estimate_pdf(_fake_count((0, 2), 10**6, 8169), prime_bound=10**6)
    assert ratio_to_hl(est, hl) == pytest.approx(est.c_estimate / hl.value)
    # published quintuplet ratio: printed 10.1193 over printed 0.409874
    est5 = estimate_pdf(_fake_count((0, 2, 6, 8, 12), 4 * 10**11, 370_502),
                        prime_bound=10**6)
    ratio = ratio_to_hl(est5, prime_bound=10**6)
    assert ratio == pytest.approx(24.6888, abs=2e-4)
    with pytest.raises(DomainError):
        ratio_to_hl(est5, hl)


def test_triplet_ratio_approaches_nine_halves():
    est = estimate_pdf(_fake_count((0, 2, 6), 2 * 10**10, 4_942_554),
                       prime_bound=10**6)
    assert ratio_to_hl(est, prime_bound=10**6) == pytest.approx(4.5, abs=1e-3)


def test_result_record_fields():
    hl = hl_constant(2, prime_bound=10**6)
    est = estimate_pdf(_fake_count((0, 2), 10**6, 8169), prime_bound=10**6)
    record = result_record(est, hl)
    assert list(record) == ["pattern", "limit", "count", "li_value",
                            "c_estimate", "conjectured", "deviation",
                            "c_m", "ratio"]
    assert record["pattern"] == "0,2"
    assert record["count"] == 8169
    assert record["ratio"] == pytest.approx(est.c_estimate / hl.value)


# ---------------------------------------------------------------- rationals

def test_rational_candidates_finds_exact_fractions():
    assert rational_candidates(4.5, 10, 1e-9)[0][:2] == (9, 2)
    assert rational_candidates(13.5, 10, 1e-9)[0][:2] == (27, 2)
    assert rational_candidates(2.0, 10, 1e-9)[0][:2] == (2, 1)
    got = rational_candidates(0.75, 100, 0.0)
    assert got == [(3, 4, 0.0)]


def test_rational_candidates_match_exhaustive_scan():
    cases = [(24.6888, 100, 0.01), (1.32032, 50, 0.005), (4.4991, 40, 0.02),
             (0.6601618, 200, 0.001), (10.1193, 60, 0.05)]
    for x, max_den, tol in cases:
        assert rational_candidates(x, max_den, tol) == rationals_near(
            x, max_den, tol), (x, max_den, tol)


def test_rational_candidates_random_agreement_with_oracle():
    rng = random.Random(61)
    for _ in range(50):
        x = math.exp(rng.uniform(math.log(0.01), math.log(50)))
        max_den = rng.randrange(1, 120)
        tol = math.exp(rng.uniform(math.log(1e-6), math.log(0.2)))
        assert rational_candidates(x, max_den, tol) == rationals_near(
            x, max_den, tol), (x, max_den, tol)


def test_rational_candidates_sorted_by_distance():
    got = rational_candidates(24.6888, 100, 0.01)
    distances = [d for _, _, d in got]
    assert distances == sorted(distances)
    assert all(math.gcd(p, q) == 1 for p, q, _ in got)
    assert all(q <= 100 for _, q, _ in got)


def test_rational_candidates_domain_errors():
    with pytest.raises(DomainError):
        rational_candidates(-1.0, 10, 0.1)
    with pytest.raises(DomainError):
        rational_candidates(0.0, 10, 0.1)
    with pytest.raises(DomainError):
        rational_candidates(1.0, 0, 0.1)
    with pytest.raises(DomainError):
        rational_candidates(1.0, 10, -0.1)
    with pytest.raises(DomainError):
        rational_candidates(math.inf, 10, 0.1)
