import json
from fractions import Fraction

import pytest

from torsionrank.balls import InconsistencyError, mpf_to_fraction
from torsionrank.characters import enumerate_characters
from torsionrank.lfunctions import e_n_chi
from torsionrank.serialize import ball_from_json
from torsionrank.torsion import (
    build_T,
    certified_ranks,
    certify_T_invertible,
    conjugation_relation,
    hcob_pairing,
    induction_step_check,
    kubert_rows_check,
    lens_torsion,
    pairing_matrix,
    remark_rows,
    remark_rows_check,
    unit_submatrix_check,
)

from oracles import agrees_to, catalan_interval, power, scale, zeta3_interval

ZETA3 = zeta3_interval()


def test_build_T_examples():
    T = build_T(1, 2)
    assert agrees_to(T.entry(1, 1).re, ZETA3, 35)
    T = build_T(2, 2)
    assert agrees_to(T.entry(1, 1).re, scale(ZETA3, Fraction(-3, 4)), 35)
    for a, b in [(1, 2), (2, 1), (2, 2)]:
        assert agrees_to(T.entry(a, b).re, ZETA3, 35)
    T = build_T(3, 1)
    assert abs(T.entry(1, 1).im.approx() - 0.6766277) < 1e-7
    assert T.entry(3, 3).im.contains(0)
    assert len(T.values) == 3


@pytest.mark.parametrize("n", [1, 5, 12])
def test_entries_are_shared(n):
    T = build_T(n, 1)
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            assert T.entry(a, b) is T.entry(b, a) is T.entry(a * b % n or n, 1)


def test_lens_torsion_examples():
    assert agrees_to(lens_torsion(1, 2, 0, 1), ZETA3, 35)
    assert lens_torsion(5, 2, 1, 0).contains(0)
    assert lens_torsion(2, 1, 1, 1).contains(0)


def test_hcob_examples():
    assert hcob_pairing(4, 1, 2, 2, 1).contains(0)
    assert agrees_to(hcob_pairing(4, 1, 1, 1, 1), scale(catalan_interval(), 4), 35)
    for n in (1, 3, 6):
        for k in (1, 2, 3):
            for a in range(n):
                for b in range(n):
                    assert (hcob_pairing(n, k, a, b, 2) + lens_torsion(n, k, a * b, 2)).contains(0)


def test_pairing_matrix_scales_real_matrix():
    P = pairing_matrix(3, 2, Fraction(1, 2))
    T = build_T(3, 2)
    L = T.torsion_part()
    for a in range(3):
        for b in range(3):
            assert P.entries[a][b].overlaps(L[a][b] * Fraction(9, 2))


@pytest.mark.parametrize("n,k", [(1, 1), (3, 1), (8, 2), (24, 3)])
def test_conjugation(n, k):
    v = conjugation_relation(build_T(n, k))
    assert v.passed and v.checked == n * n


@pytest.mark.parametrize("n", [2, 4, 6, 9, 12, 24])
def test_kubert_rows(n):
    assert kubert_rows_check(build_T(n, 2)).passed


def test_invertibility_examples():
    d = certify_T_invertible(build_T(1, 1))
    assert d.passed and d.det.re.overlaps(build_T(1, 1).entry(1, 1).re)
    d = certify_T_invertible(build_T(2, 2))
    assert agrees_to(d.det.re, scale(power(ZETA3, 2), Fraction(-7, 4)), 35)
    d = certify_T_invertible(build_T(12, 1))
    assert d.passed and mpf_to_fraction(d.margin) > 0


def test_unit_submatrix_examples():
    v = unit_submatrix_check(4, 1)
    assert v.passed
    t = enumerate_characters(4)
    prod = e_n_chi(t.trivial(), 1).value.abs() * e_n_chi(t.by_label((1,)), 1).value.abs()
    assert v.details["abs_det"].overlaps(prod)
    assert unit_submatrix_check(1, 3).passed
    assert unit_submatrix_check(5, 2).passed


def test_unit_submatrix_inconsistency_is_loud(monkeypatch):
    import torsionrank.torsion as mod
    from torsionrank.balls import ComplexBall, RealBall

    monkeypatch.setattr(mod, "_e_n", lambda chi, k, w: ComplexBall.exact(7, w))
    with pytest.raises(InconsistencyError):
        unit_submatrix_check(4, 1)


def test_rank_examples():
    re, im = certified_ranks(build_T(3, 1))
    assert im.certified and im.rank == 1
    re, im = certified_ranks(2, 2)
    assert re.certified and re.rank == 2
    re, im = certified_ranks(build_T(2, 1))
    assert im.rank == 0 and im.certified
    assert "1+S" in re.upper_bound_argument


@pytest.mark.parametrize("n", [1, 2, 5, 10, 17, 24])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_ranks_add_up(n, k):
    T = build_T(n, k)
    assert certify_T_invertible(T).passed
    re, im = certified_ranks(T)
    assert re.certified and im.certified
    assert re.rank + im.rank == n
    assert re.svd_rank == re.rank and im.svd_rank == im.rank


def test_induction_examples():
    v = induction_step_check(1, 2, 1)
    assert v.passed and v.details["exact_factor"] == Fraction(3, 4)
    assert v.det.re.overlaps(build_T(1, 1).entry(1, 1).re * Fraction(3, 4))
    assert induction_step_check(2, 2, 1).passed
    assert induction_step_check(3, 2, 2).passed


def test_remark_rows():
    assert remark_rows(7, 1) == [1, 2, 3]
    assert remark_rows(6, 2) == [6, 1, 2, 3]
    assert remark_rows_check(build_T(12, 2)).certified


def test_exports():
    T = build_T(3, 1)
    lines = T.to_csv("re").splitlines()
    assert len(lines) == 4 and lines[0].startswith("a\\b")
    d = json.loads(json.dumps(T.to_json()))
    assert len(d["entries"]) == 9 and d["entries"][0]["a"] == 1
    back = ball_from_json(d["entries"][4]["value"])
    assert back.contains(T.entry(2, 2)) and T.entry(2, 2).contains(back)
