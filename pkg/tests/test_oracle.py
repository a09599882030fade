from fractions import Fraction

import pytest

from looijenga.oracle import (OutOfHypothesis, cosecant_series, dp3_closed_form, rho_alphabet,
                              schur_bruteforce, shifted_schur_series, skew_schur_on_alphabet,
                              vertex_expression_one, vertex_expression_two)
from looijenga.partitions import EMPTY, Partition
from looijenga.qalgebra import HalfLaurent, QRational, expand_hbar, quantum_integer

P = Partition


def test_closed_form_values():
    assert dp3_closed_form(1, 1, 1, 0) == QRational(1)
    assert dp3_closed_form(1, 3, 1, 0) == QRational(0)
    assert dp3_closed_form(2, 1, 1, 1) == QRational(HalfLaurent({1: 1, -1: 1}))


def test_closed_form_frozen_values():
    # evaluated once by direct substitution, then frozen
    assert dp3_closed_form(2, 2, 2, 0) == QRational(1)
    assert dp3_closed_form(1, 2, 1, 1).is_zero()
    assert dp3_closed_form(2, 2, 1, 1) == QRational(HalfLaurent({2: 1, 0: 2, -2: 1}))
    assert dp3_closed_form(3, 3, 2, 1) == QRational(HalfLaurent({4: 1, 2: 2, 0: 3, -2: 2, -4: 1}))


def test_closed_form_zero_over_zero_collapses():
    # [d0] = 0 comes with the vanishing binomial [0 choose d1]
    assert dp3_closed_form(0, 1, 1, 0).is_zero()
    assert dp3_closed_form(2, 1, 1, 0).is_zero()
    assert issubclass(OutOfHypothesis, ValueError)


def test_closed_form_q_inverse_invariant():
    for d0 in range(1, 4):
        for d1 in range(1, 4):
            for d2 in range(3):
                for d3 in range(3):
                    if d2 + d3 < 1 or d1 + d2 + d3 == d0:
                        continue
                    v = dp3_closed_form(d0, d1, d2, d3)
                    assert v.substitute_q_inverse() == v


def test_bruteforce_examples():
    assert schur_bruteforce(EMPTY, EMPTY, 25, 20) == {0: 1}
    assert schur_bruteforce(P([1]), EMPTY, 25, 20) == {2 * j - 1: 1 for j in range(1, 21)}
    h1 = schur_bruteforce(P([1]), EMPTY, 25, 20)
    assert schur_bruteforce(P([2]), P([1]), 25, 20) == h1


def test_bruteforce_stabilizes():
    lam = P([3, 1])
    base = schur_bruteforce(lam, EMPTY, 12, 12)
    for n in (13, 16, 20):
        assert schur_bruteforce(lam, EMPTY, n, 12) == base


def test_tableau_sum_on_finite_alphabet():
    # s_(1,1)(x1, x2, x3) = e_2
    got = skew_schur_on_alphabet(P([1, 1]), EMPTY, [2, 3, 5], 100)
    assert got == {5: 1, 7: 1, 8: 1}


def test_rho_alphabet():
    assert rho_alphabet(3) == [1, 3, 5]
    assert rho_alphabet(3, (2, 1), -1) == [-3, 1, 5]


def test_shifted_series_has_negative_powers():
    series = shifted_schur_series(P([1]), P([3]), 10)
    assert min(series) == -5
    assert series == {-5: 1, 3: 1, 5: 1, 7: 1, 9: 1}


def test_vertex_expressions_agree_small():
    for mo, mi in [(P([1]), P([1])), (P([2, 1]), P([1])), (P([2]), P([1, 1]))]:
        assert vertex_expression_one(mo, mi, 30) == vertex_expression_two(mo, mi, 30)


def test_cosecant_series():
    c = cosecant_series(1, 3)
    assert {e: v.re for e, v in c.terms.items()} == {-1: 1, 1: Fraction(1, 24), 3: Fraction(7, 5760)}
    assert cosecant_series(2, 0).terms[-1].re == Fraction(1, 2)


@pytest.mark.parametrize("n", range(1, 6))
def test_cosecant_matches_expansion(n):
    ref = cosecant_series(n, 7)
    assert all(v.re > 0 and v.im == 0 for v in ref.terms.values())
    got = expand_hbar(QRational(1, quantum_integer(n)), 1, 7)
    assert got.terms == ref.terms
