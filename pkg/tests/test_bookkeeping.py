import pytest

from torsionrank.bookkeeping import consistency_check, k_theory_rank, l_kn, rank_book, rep_counts


def test_l_kn_examples():
    assert l_kn(1, 2) == 1 and l_kn(1, 4) == 1
    assert l_kn(1, 1) == 0
    assert l_kn(3, 2) == 2
    assert l_kn(4, 1) == 1


def test_rep_counts_examples():
    assert rep_counts(5) == (3, 2)
    assert rep_counts(6) == (4, 2)
    assert rep_counts(1) == (1, 0)


def test_k_theory_examples():
    assert k_theory_rank(3, 5) == 2
    assert k_theory_rank(3, 7) == 1
    assert k_theory_rank(7, 4) == 0
    with pytest.raises(ValueError):
        k_theory_rank(3, 1)


def test_consistency_examples():
    assert consistency_check(3, 2)
    assert consistency_check(4, 1)
    assert consistency_check(1, 1)


def test_consistency_grid():
    for n in range(1, 101):
        r, c = rep_counts(n)
        assert r + c == n and r - c == (1 if n % 2 else 2)
        for k in range(1, 11):
            assert consistency_check(n, k)
            assert l_kn(n, k) == k_theory_rank(n, 2 * k + 1)


def test_rank_book():
    b = rank_book(12, 2)
    assert (b.l_kn, b.r, b.c, b.k_rank) == (7, 7, 5, 7)
