import math

import pytest
from scipy.special import rgamma

from dzl import arith
from dzl import quadrature as quad


def test_perron_trivial_x_below_2():
    f = arith.make_ones(2000)
    r = quad.perron_partial_sum(f, 1.5, 1.5, 1e3)
    assert r.exact == pytest.approx(1.0)
    assert r.deviation <= r.total_budget


def test_perron_ones_count():
    f = arith.make_ones(2000)
    r = quad.perron_partial_sum(f, 10.5, 1.5, 1e3)
    assert r.exact == pytest.approx(10.0)
    assert r.deviation <= r.total_budget


def test_perron_d2_sieve_oracle():
    f = arith.make_dk(2, 2000)
    r = quad.perron_partial_sum(f, 500.5, 1.3, 2e3)
    exact = sum(len([d for d in range(1, n + 1) if n % d == 0])
                for n in range(1, 501))
    assert r.exact.real == pytest.approx(exact)
    assert r.deviation <= r.total_budget


def test_perron_integer_x_warns():
    f = arith.make_ones(2000)
    with pytest.warns(UserWarning):
        quad.perron_partial_sum(f, 10.0, 1.5, 100.0)


def test_hankel_simple_values():
    assert abs(quad.hankel_gamma(1.0, 40.0).value - 1.0) < 1e-6
    assert abs(quad.hankel_gamma(0.0, 40.0).value) < 1e-6
    assert abs(quad.hankel_gamma(0.5, 40.0).value - 1 / math.sqrt(math.pi)) < 1e-6


def test_hankel_complex_z():
    z = 1.5 + 1.0j
    assert abs(quad.hankel_gamma(z, 40.0).value - rgamma(z)) < 1e-6


def test_hankel_envelope_covers_truncation():
    # the analytic envelope must dominate the actual X-truncation error
    for z in (0.5, 2.0, 1.0 + 1.0j):
        err = abs(quad.hankel_gamma(z, 20.0).value - rgamma(z))
        assert err <= quad.hankel_error_envelope(z, 20.0)


def test_segment_bound_examples():
    r = quad.vertical_segment_bound(0.5, 0.3, 10.0, 1e4)
    assert math.isfinite(r.ratio) and r.ratio > 0
    r2 = quad.vertical_segment_bound(2.0, -0.3, 10.0, 1e4)
    assert math.isfinite(r2.ratio)


def test_segment_K_scaling():
    # doubling K roughly halves the integral (within factor 3)
    a = abs(quad.vertical_segment_bound(0.5, 0.3, 10.0, 1e4).value)
    b = abs(quad.vertical_segment_bound(0.5, 0.3, 20.0, 1e4).value)
    assert b < a
    assert a / b < 6.0  # ~2 expected, factor-3 slack


def test_segment_x_one_rejected():
    with pytest.raises(ValueError):
        quad.vertical_segment_bound(1.0, 0.3, 10.0, 1e4)


def test_shiu_ones_counts_integers():
    f = arith.make_ones(10000)
    r = quad.shiu_ratio(f, 1e4, 1e3)
    assert r.lhs == pytest.approx(1001.0)
    assert r.ratio < 1.0


def test_shiu_envelope_monotone_in_z():
    f = arith.make_dk(2, 10000)
    r1 = quad.shiu_ratio(f, 1e4, 500.0)
    r2 = quad.shiu_ratio(f, 1e4, 1000.0)
    assert r2.rhs_envelope > r1.rhs_envelope


def test_shiu_range_validation():
    f = arith.make_ones(1000)
    with pytest.raises(ValueError):
        quad.shiu_ratio(f, 1000.0, 1.0)  # z below x^0.1


def test_quadrature_self_consistency():
    f = arith.make_ones(2000)
    r1 = quad.perron_partial_sum(f, 10.5, 1.5, 100.0, quad_tol=1e-6)
    r2 = quad.perron_partial_sum(f, 10.5, 1.5, 100.0, quad_tol=5e-7)
    assert abs(r1.approx - r2.approx) <= r1.quad_error + r2.quad_error + 1e-12
