import math

import numpy as np
import pytest

from dzl import arith
from dzl.bdelta import BDelta


def test_dk_small_values():
    d2 = arith.make_dk(2, 100)
    assert d2.values[1] == 1
    assert d2.values[8] == 4       # 1,2,4,8
    assert d2.values[12] == 6      # divisors of 12
    d3 = arith.make_dk(3, 100)
    assert d3.values[12] == 18     # ordered triples with product 12


def test_dk_matches_brute_force_divisor_count():
    d2 = arith.make_dk(2, 500).values.real
    for n in range(1, 501):
        assert d2[n] == sum(1 for d in range(1, n + 1) if n % d == 0)


def test_moebius_values():
    mu = arith.make_moebius(100).values.real
    expected = {1: 1, 2: -1, 3: -1, 4: 0, 6: 1, 30: -1, 12: 0}
    for n, v in expected.items():
        assert mu[n] == v


def test_dedekind_quadratic_split_inert_ramified():
    # D = -4: 5 splits (a=2 on p^1), 3 inert (a=0 on odd powers), 2 ramified
    f = arith.dedekind_quadratic(-4, 100)
    assert f.values[5].real == pytest.approx(2.0)
    assert f.values[3].real == pytest.approx(0.0)
    assert f.values[9].real == pytest.approx(1.0)
    assert f.values[2].real == pytest.approx(1.0)
    assert f.values[25].real == pytest.approx(3.0)


def test_dedekind_rejects_non_fundamental():
    with pytest.raises(ValueError):
        arith.dedekind_quadratic(9, 50)  # 9 = 3^2 is not squarefree


def test_kronecker_symbol_against_known_table():
    # chi_{-4}(n) is the non-trivial character mod 4
    vals = [arith.kronecker_symbol(-4, n) for n in range(1, 11)]
    assert vals == [1, 0, -1, 0, 1, 0, -1, 0, 1, 0]
    # chi_5 via quadratic residues mod 5
    assert [arith.kronecker_symbol(5, n) for n in range(1, 6)] == [1, -1, -1, 1, 0]


def test_vonmangoldt_prime_powers():
    ones = arith.make_ones(100)
    lam = arith.vonmangoldt_transform(ones).lam
    assert lam[8] == pytest.approx(math.log(2))
    assert lam[7] == pytest.approx(math.log(7))
    assert lam[6] == pytest.approx(0.0, abs=1e-12)
    mu = arith.make_moebius(100)
    lam_mu = arith.vonmangoldt_transform(mu).lam
    assert lam_mu[8] == pytest.approx(-math.log(2))


def test_transform_round_trip_four_builtins():
    for f in (arith.make_ones(2000), arith.make_dk(2, 2000),
              arith.make_moebius(2000), arith.dedekind_quadratic(-4, 2000)):
        lam = arith.vonmangoldt_transform(f)
        back = arith.inverse_vonmangoldt(lam, f.profile)
        assert np.max(np.abs(back.values[1:] - f.values[1:])) < 1e-10


def test_verify_k_bound_exact_ratios():
    assert arith.verify_k_bound(arith.make_ones(3000), 1).max_ratio == pytest.approx(1.0)
    assert arith.verify_k_bound(arith.make_dk(2, 3000), 2).max_ratio == pytest.approx(2.0)
    assert arith.verify_k_bound(arith.make_dk(3, 3000), 3).max_ratio == pytest.approx(3.0)


def test_twist_unit_modulus_and_multiplicativity():
    f = arith.make_ones(500)
    g = arith.twist(f, BDelta(0.1))
    mags = np.abs(g.values[1:])
    assert np.max(np.abs(mags - 1.0)) < 1e-12
    # complete multiplicativity of the twist on coprime pairs
    assert g.values[6] == pytest.approx(g.values[2] * g.values[3])
    assert g.values[35] == pytest.approx(g.values[5] * g.values[7])


def test_profile_validation():
    with pytest.raises(ValueError):
        arith.AnalyticProfile(k=1.0, m=2.0)  # pole order cannot exceed k


def test_export_csv_format(tmp_path):
    f = arith.make_dk(2, 5)
    path = tmp_path / "t.csv"
    arith.export_table_csv(f, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "n,re,im"
    assert lines[1].startswith("1,1,0")
    assert len(lines) == 6
