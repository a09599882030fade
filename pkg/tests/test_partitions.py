import pytest
from hypothesis import given

from looijenga.partitions import (EMPTY, Partition, conjugate, contains, enumerate_partitions,
                                  hooks, kappa, partitions_inside)

from conftest import partitions


def pentagonal_counts(n_max):
    p = [1] + [0] * n_max
    for n in range(1, n_max + 1):
        k, total = 1, 0
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p


def test_validation():
    with pytest.raises(ValueError):
        Partition([1, 2])
    with pytest.raises(ValueError):
        Partition([2, 0])
    assert Partition() == EMPTY and EMPTY.size == 0


def test_conjugate_examples():
    assert conjugate(EMPTY) == EMPTY
    assert conjugate(Partition([2, 1])) == Partition([2, 1])
    assert conjugate(Partition([3, 1])) == Partition([2, 1, 1])


def test_kappa_examples():
    assert kappa(EMPTY) == 0
    assert kappa(Partition([2])) == 2
    assert kappa(Partition([1, 1])) == -2


def test_enumeration_examples():
    assert enumerate_partitions(0) == [EMPTY]
    assert enumerate_partitions(3) == [Partition([3]), Partition([2, 1]), Partition([1, 1, 1])]
    assert len(enumerate_partitions(5)) == 7


def test_enumeration_counts():
    p = pentagonal_counts(20)
    for n in range(21):
        parts = enumerate_partitions(n)
        assert len(parts) == p[n]
        assert len(set(parts)) == p[n]
        assert parts == sorted(parts, reverse=True)


def test_hooks():
    assert hooks(1) == [Partition([1])]
    assert hooks(2) == [Partition([2]), Partition([1, 1])]
    assert hooks(3) == [Partition([3]), Partition([2, 1]), Partition([1, 1, 1])]
    for c in range(1, 9):
        hs = hooks(c)
        assert len(hs) == c
        assert set(hs) <= set(enumerate_partitions(c))
    with pytest.raises(ValueError):
        hooks(0)


def test_contains():
    lam = Partition([2, 2])
    assert contains(lam, EMPTY)
    assert contains(lam, Partition([2, 1]))
    assert not contains(lam, Partition([3]))
    assert not contains(Partition([1]), Partition([1, 1]))


def test_partitions_inside():
    inside = partitions_inside(Partition([2, 1]))
    assert inside == (EMPTY, Partition([1]), Partition([2]), Partition([1, 1]), Partition([2, 1]))


@pytest.mark.parametrize("n", range(13))
def test_conjugation_is_involution_and_negates_kappa(n):
    for mu in enumerate_partitions(n):
        assert conjugate(conjugate(mu)) == mu
        assert kappa(conjugate(mu)) == -kappa(mu)
        assert kappa(mu) % 2 == 0


@given(partitions(), partitions())
def test_containment_matches_inside_list(lam, mu):
    assert contains(lam, mu) == (mu in partitions_inside(lam))
