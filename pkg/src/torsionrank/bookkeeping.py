"""Exact rank bookkeeping: expected ranks, real representation counts, K-theory ranks."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["RankBook", "l_kn", "rep_counts", "k_theory_rank", "consistency_check", "rank_book"]


def l_kn(n: int, k: int) -> int:
    """Expected rank: ``(n+2)//2`` for even k, ``(n-1)//2`` for odd k."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    return (n + 2) // 2 if k % 2 == 0 else (n - 1) // 2


def rep_counts(n: int) -> tuple[int, int]:
    """(r, c): all irreducible real representations of C_n, and those of complex type."""
    if n < 1:
        raise ValueError("n must be positive")
    # complex characters j in Z/n; j = -j gives a real-type rep, a pair {j, -j} a complex-type one
    real_type = 1 if n % 2 else 2
    c = (n - real_type) // 2
    r = real_type + c
    if r != (n + 2) // 2 or c != (n - 1) // 2:
        raise AssertionError(f"representation count mismatch for n={n}")
    if r + c != n:
        raise AssertionError("r + c must equal n")
    if r - c != real_type:
        raise AssertionError("r - c must equal |C_n / 2|")
    return r, c


def k_theory_rank(n: int, i: int) -> int:
    """Rank of ``K_i(Z[C_n]) (x) Q`` for i >= 2: r if i = 1 mod 4, c if i = 3 mod 4, else 0."""
    if i < 2:
        raise ValueError("k_theory_rank needs i >= 2")
    r, c = rep_counts(n)
    if i % 2 == 0:
        return 0
    return r if i % 4 == 1 else c


def consistency_check(n: int, k: int) -> bool:
    """``l_kn(n, k) == k_theory_rank(n, 2k + 1)``; a mismatch is a bug and raises."""
    a, b = l_kn(n, k), k_theory_rank(n, 2 * k + 1)
    if a != b:
        raise AssertionError(f"l_kn({n},{k}) = {a} but K_{2 * k + 1} rank = {b}")
    return True


@dataclass(frozen=True)
class RankBook:
    n: int
    k: int
    l_kn: int
    r: int
    c: int
    k_rank: int


def rank_book(n: int, k: int) -> RankBook:
    r, c = rep_counts(n)
    return RankBook(n, k, l_kn(n, k), r, c, k_theory_rank(n, 2 * k + 1))
