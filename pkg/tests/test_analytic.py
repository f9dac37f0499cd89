import math
from fractions import Fraction

import pytest

from walklab import analytic as an
from walklab.analytic import SeriesParams, expected_length_series


def test_series_anchor():
    assert expected_length_series(SeriesParams(10, 1)) == pytest.approx(4.69085199, abs=1e-7)


def test_series_matches_direct_product():
    b, r = 7, 2
    direct, prod = 0.0, 1.0
    for n in range(r, 3000):
        direct += prod
        prod *= an.step_probability(n, b)
    assert expected_length_series(SeriesParams(b, r, n_max=3000)) == pytest.approx(direct, rel=1e-12)


def test_steps_are_elements_minus_one():
    p = SeriesParams(10, 3, clamp=False)
    q = SeriesParams(10, 3, clamp=False, count_start=False)
    assert expected_length_series(p) - 1 == pytest.approx(expected_length_series(q))


def test_clamp_only_matters_for_small_bases():
    for b in (10, 7):
        a = expected_length_series(SeriesParams(b, 1, clamp=True))
        assert a == pytest.approx(expected_length_series(SeriesParams(b, 1, clamp=False)))
    # base 2: 1/(k ln 2) > 1 at k = 1, so raw and clamped differ
    assert an.step_probability(1, 2, clamp=True) == 1.0
    assert an.step_probability(1, 2, clamp=False) != 1.0


def test_weighted_single_digit_is_plain_series():
    # one-digit starts carry weight (b-1)/b
    assert an.expected_length_weighted(10, 1) == pytest.approx(0.9 * expected_length_series(SeriesParams(10, 1)))
    assert an.start_weights(10, 1) == pytest.approx([0.9])


def test_geometric():
    mean, var = an.geometric_expectation(6 / math.pi**2)
    assert mean == pytest.approx(6 / (math.pi**2 - 6))
    assert var == pytest.approx(mean * (1 + mean))
    with pytest.raises(ValueError):
        an.geometric_expectation(1.0)


def test_refined_squarefree_closed_form():
    assert an.refined_squarefree_expectation() == pytest.approx(50 / (3 * math.pi**2 - 25))


def test_fixed_point_is_stationary():
    p = 6 / math.pi**2
    l = an.fixed_point(p)
    seq = an.pk_sequence(p, 200)
    assert abs(seq[-1] - seq[-2]) < 1e-12
    assert 0 <= l <= 0.5


def test_fermat_forms():
    assert an.fermat_heuristic_approx() == pytest.approx(2 / math.log(2))
    direct = sum(1 / (2**n * math.log(2) + math.log1p(2.0 ** -(2**n)) if n < 10 else 2**n * math.log(2))
                 for n in range(60))
    assert an.fermat_heuristic() == pytest.approx(direct, abs=1e-8)


def test_partial_sum_and_fmt():
    counts = {1: (1, 1, 0), 2: (2, 1, 1)}
    assert an.partial_sum(counts, 2, 2) == Fraction(1, 2) + Fraction(2, 4)
    assert an._fmt(Fraction(2, 3), 4) == "0.6666"  # truncates
    with pytest.raises(ValueError):
        an.partial_sum(counts, 2, 3)


def test_parity_tail_base2():
    # A/2 = [[1/2, 1/2], [1/2, 0]]; column sums of (A/2)(I - A/2)^-1
    c_o, c_e = an.parity_tail_coefficients(((1, 1), (1, 0)), 2)
    assert (c_o, c_e) == (Fraction(5), Fraction(3))
    with pytest.raises(ValueError):
        an.parity_tail_coefficients(((2, 2), (2, 2)), 2)


def test_interval_order():
    with pytest.raises(ValueError):
        an.BoundInterval(Fraction(2), Fraction(1))
