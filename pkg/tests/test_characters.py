from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from torsionrank.ballmatrix import ball_det
from torsionrank.balls import ComplexBall, PrecisionError, RealBall
from torsionrank.characters import (
    char_sum_c,
    char_sum_matrix,
    char_sum_matrix_rank,
    enumerate_characters,
    lift,
    minimal_period,
    orthogonality_sum,
    triangle_check,
)
from torsionrank.modular import ModInt, euler_phi


def test_table_examples():
    assert len(enumerate_characters(1)) == 1
    t4 = enumerate_characters(4)
    assert len(t4) == 2
    odd = t4.by_label((1,))
    assert odd.value(3).turn == Fraction(1, 2)
    assert sorted(c.order for c in enumerate_characters(5)) == [1, 2, 4, 4]


@pytest.mark.parametrize("n", range(1, 25))
def test_character_homomorphism_and_closure(n):
    table = enumerate_characters(n)
    assert len(table) == euler_phi(n)
    assert len({c.label for c in table}) == euler_phi(n)
    units = table.group.elements
    for chi in table:
        assert chi.exponent(1) == 0
        for a in units:
            for b in units:
                assert (chi.exponent(a * b) - chi.exponent(a) - chi.exponent(b)) % chi.order == 0
        assert chi.turn(n) is None or n == 1


@pytest.mark.parametrize("n", range(1, 25))
def test_orthogonality(n):
    table = enumerate_characters(n)
    for chi in table:
        for psi in table:
            expected = euler_phi(n) if chi.label == psi.label else 0
            assert orthogonality_sum(chi, psi) == expected


def test_periods():
    t4 = enumerate_characters(4)
    triv = minimal_period(t4.trivial())
    assert triv.conductor == 1 and not triv.aperiodic
    odd = minimal_period(t4.by_label((1,)))
    assert odd.conductor == 4 and odd.aperiodic
    up = minimal_period(lift(t4.by_label((1,)), 8))
    assert up.conductor == 4 and not up.aperiodic
    assert up.induced.label == (1,)


@given(st.integers(1, 16), st.integers(2, 4))
def test_lift_preserves_period(n, mult):
    for chi in enumerate_characters(n):
        up = lift(chi, n * mult)
        assert up.conductor == chi.conductor
        for a in up.group.elements:
            assert up.turn(a) == chi.turn(a % n)


def test_aperiodic_means_no_proper_period():
    # direct check over all proper divisors, independent of the conductor search
    for n in range(1, 41):
        for chi in enumerate_characters(n):
            periods = [
                d for d in range(1, n) if n % d == 0
                and all(chi.turn(a) == 0 for a in chi.group.elements if (a - 1) % d == 0)
            ]
            assert chi.aperiodic == (not periods)


def test_char_sum_examples():
    odd = enumerate_characters(4).by_label((1,))
    assert char_sum_c(ModInt(1, 4), odd).contains((0, 2))
    assert char_sum_c(2, odd).contains(0)
    assert char_sum_c(0, enumerate_characters(1).trivial()).contains(1)
    with pytest.raises(ValueError):
        char_sum_c(ModInt(1, 5), odd)


def test_triangle_examples():
    odd = enumerate_characters(4).by_label((1,))
    v = triangle_check(odd)
    assert v.passed and v.c1.abs().contains(2)
    for chi in enumerate_characters(5):
        if not chi.is_trivial():
            v = triangle_check(chi)
            assert v.passed
            assert (v.c1.abs() * v.c1.abs()).contains(5)
    assert triangle_check(enumerate_characters(1).trivial()).passed
    with pytest.raises(ValueError):
        triangle_check(enumerate_characters(4).trivial())


@pytest.mark.parametrize("n", range(1, 25))
def test_triangle_for_all_aperiodic(n):
    for chi in enumerate_characters(n):
        if chi.aperiodic:
            assert triangle_check(chi).passed


def test_triangle_refuses_undecidable_c1(monkeypatch):
    import torsionrank.characters as mod

    fuzzy = ComplexBall(RealBall.exact(0, 152).with_error(Fraction(1, 10)))
    monkeypatch.setattr(mod, "_char_sum", lambda m, chi, w: fuzzy)
    with pytest.raises(PrecisionError):
        triangle_check(enumerate_characters(5).by_label((1,)))


@pytest.mark.parametrize("n", [1, 4, 6, 12, 24])
def test_char_sum_matrix_rank(n):
    w = char_sum_matrix_rank(n)
    assert w.certified and w.rank == euler_phi(n)


def test_char_sum_rank_examples():
    assert char_sum_matrix_rank(1).rank == 1
    assert char_sum_matrix_rank(6).rank == 2
    w = char_sum_matrix_rank(4)
    assert w.rank == 2 and w.certified


def test_rows_one_and_three_do_not_witness_n4():
    # c(1, trivial) = c(3, trivial) = 0 mod 4, so this minor is singular
    m = char_sum_matrix(4)
    minor = [m[1], m[3]]
    d = ball_det(minor)
    assert d.value is None or d.value.contains(0)


def test_to_dict_export():
    d = enumerate_characters(12).to_dict()
    assert d["modulus"] == 12 and len(d["characters"]) == 4
    ap = [c for c in d["characters"] if c["aperiodic"]]
    assert len(ap) == 1 and ap[0]["conductor"] == 12
