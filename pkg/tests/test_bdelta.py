import cmath
import math

import numpy as np
import pytest

from dzl.bdelta import BDelta, verify_fourier_properties


def test_branch_values():
    b = BDelta(0.1)
    # middle branch: i e^{i pi theta}
    assert b.eval(0.5) == pytest.approx(1j * cmath.exp(1j * math.pi * 0.5))
    # second branch at theta in (-delta, delta]
    th = 0.05
    assert b.eval(th) == pytest.approx(
        -cmath.exp((1 - 1 / 0.2) * 1j * math.pi * th))
    # periodicity
    assert b.eval(0.3 + 1.0) == pytest.approx(b.eval(0.3))
    assert b.eval(0.3 - 2.0) == pytest.approx(b.eval(0.3))


def test_unit_modulus_everywhere():
    for d in (0.0, 0.05, 0.25, 0.49):
        b = BDelta(d)
        ths = np.linspace(-1.3, 2.3, 731)
        assert np.max(np.abs(np.abs(b.eval_many(ths)) - 1.0)) < 1e-12


def test_closed_form_matches_quadrature():
    for d in (0.0, 0.01, 0.1, 0.3):
        b = BDelta(d)
        for j in (-5, -1, 0, 1, 2, 7):
            q = b.coeff_quadrature(j)
            assert abs(q.imag) < 1e-9
            assert b.coeff(j) == pytest.approx(q.real, abs=1e-9)


def test_delta_zero_closed_form():
    b0 = BDelta(0.0)
    for j in (-3, 0, 1, 4):
        assert b0.coeff(j) == pytest.approx(2.0 / (math.pi * (2 * j - 1)))


def test_gap_identity():
    for d in (0.0, 0.05, 0.2, 0.4):
        b = BDelta(d)
        direct = b.coeff(1) - b.coeff(0)
        closed = b.gap()
        assert abs(direct - closed) < 1e-12


def test_gap_monotone_decreasing_in_delta():
    gaps = [BDelta(d).gap() for d in np.linspace(0.0, 0.45, 20)]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[0] == pytest.approx(4.0 / math.pi)


def test_coeff_abs_tail_dominates_partial_sums():
    for d in (0.01, 0.1, 0.3):
        b = BDelta(d)
        J = 10
        actual = sum(abs(b.coeff(j)) for j in
                     list(range(J + 1, J + 300)) + list(range(-J - 299, -J)))
        assert b.coeff_abs_tail(J) >= actual


def test_verify_fourier_properties_passes():
    rep = verify_fourier_properties([BDelta(d) for d in (0.05, 0.1, 0.2)], J=6)
    assert rep.passed, rep.failures
    assert rep.envelope_constant > 0


def test_delta_out_of_range():
    with pytest.raises(ValueError):
        BDelta(-0.01)
    with pytest.raises(ValueError):
        BDelta(0.51)
