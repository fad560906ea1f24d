"""Acceptance criteria 1-9. Each test prints one PASS/FAIL line, visible even without -s."""

import os
import subprocess
import sys
import time
from fractions import Fraction

import pytest
from mpmath.libmp import mpf_cmp

from oracles import agrees_to, catalan_interval, catalan_plain_interval, meets, pi_interval, power, scale, zeta3_interval
from torsionrank.balls import RealBall
from torsionrank.bookkeeping import consistency_check, l_kn
from torsionrank.certificate import EXIT_PASS, run_suite
from torsionrank.characters import char_sum_matrix_rank, enumerate_characters
from torsionrank.lfunctions import e_n_chi, factorization_check, nonzero_certify, recursion_case1, recursion_case2
from torsionrank.modular import RootOfUnity, euler_phi, is_prime, pi0_monoid, rank_one_plus_minus_S
from torsionrank.polylog import hurwitz_zeta, kubert_relation, polylog_root
from torsionrank.torsion import build_T, conjugation_relation


BITS = 128


def two_pow(e):
    return (0, 1, e, 1)


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance {number}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail

    return emit


def test_criterion_1_rank_reproduction(report):
    t0 = time.perf_counter()
    rows, prop, code = run_suite(24, 3, BITS, properties=True)
    elapsed = time.perf_counter() - t0
    bad = [
        (r.n, r.k)
        for r in rows
        if r.code != EXIT_PASS or r.rank != l_kn(r.n, r.k) or r.part != ("re" if r.k % 2 == 0 else "im")
        or not (r.margin is None and r.expected == 0 or (r.margin or 0) > 0)
    ]
    ok = not bad and code == EXIT_PASS and len(rows) == 72 and elapsed <= 600
    report(1, ok, f"{len(rows)} (n, k) cells certified, failures {bad}, suite in {elapsed:.1f}s")


def test_criterion_2_e_n_nonzero_and_factorization(report):
    undecided, loose, count, worst = [], [], 0, None
    for n in range(1, 25):
        for chi in enumerate_characters(n):
            for k in (1, 2, 3):
                count += 1
                if nonzero_certify(chi, k, BITS).status != "certified":
                    undecided.append((n, chi.label, k))
                if chi.aperiodic:
                    v = factorization_check(chi, k, BITS)
                    if not (v.passed and mpf_cmp(v.discrepancy, two_pow(-100)) < 0):
                        loose.append((n, chi.label, k))
                    if worst is None or mpf_cmp(v.discrepancy, worst) > 0:
                        worst = v.discrepancy
    worst_f = float(RealBall(worst).approx())
    ok = not undecided and not loose
    report(2, ok, f"{count} e_n values nonzero, worst factorization distance {worst_f:.2e}")


def test_criterion_3_recursion(report):
    failures, count = [], 0
    for n1 in range(1, 25):
        for p in range(2, 25 // n1 + 1):
            if not is_prime(p) or p * n1 > 24:
                continue
            for chi1 in enumerate_characters(n1):
                for k in (1, 2, 3):
                    count += 1
                    check = recursion_case1 if n1 % p == 0 else recursion_case2
                    if not check(chi1, p, k, BITS).passed:
                        failures.append((n1, p, chi1.label, k))
    for k in (1, 2, 3):
        trivial = next(iter(enumerate_characters(2)))
        e2 = e_n_chi(trivial, k, BITS).value
        closed = hurwitz_zeta(k + 1, 1, BITS) * RealBall.exact(Fraction(1, 2**k) - 1, 152)
        direct = polylog_root(k + 1, RootOfUnity(1, 2), BITS).value
        count += 1
        if not (e2.re.overlaps(closed) and direct.re.overlaps(closed) and direct.im.contains(0)):
            failures.append(("e_2", k))
    report(3, not failures, f"{count} recursion instances overlap, failures {failures}")


def test_criterion_4_kubert(report):
    seen, failures, count, worst = set(), [], 0, None
    for n in range(1, 25):
        for a in range(n):
            t = Fraction(a, n)
            if t in seen:
                continue
            seen.add(t)
            for s in range(2, 8):
                for m in range(2, 6):
                    v = kubert_relation(s, t, m, BITS)
                    count += 1
                    if not (v.passed and mpf_cmp(v.combined_radius, two_pow(-120)) < 0):
                        failures.append((s, str(t), m))
                    if worst is None or mpf_cmp(v.combined_radius, worst) > 0:
                        worst = v.combined_radius
    worst_f = float(RealBall(worst).approx())
    report(4, not failures, f"{count} distribution relations, worst combined radius {worst_f:.2e}")


def test_criterion_5_spot_constants(report):
    li2_one = polylog_root(2, RootOfUnity(0, 1), BITS).value
    li2_i = polylog_root(2, RootOfUnity(1, 4), BITS).value
    li3_m1 = polylog_root(3, RootOfUnity(1, 2), BITS).value
    pi2_6 = scale(power(pi_interval(), 2), Fraction(1, 6))
    # the alternating Catalan series, accelerated; its error bound is proven in oracles.py
    catalan = catalan_interval()
    checks = {
        "Li2(1) = pi^2/6": agrees_to(li2_one.re, pi2_6, 30) and li2_one.im.contains(0),
        "Im Li2(i) = G": agrees_to(li2_i.im, catalan, 30) and meets(li2_i.im, catalan_plain_interval(2000)),
        "Li3(-1) = -3/4 zeta(3)": agrees_to(li3_m1.re, scale(zeta3_interval(), Fraction(-3, 4)), 30),
    }
    bad = [k for k, v in checks.items() if not v]
    report(5, not bad, f"30-digit containment for {', '.join(checks)}; failures {bad}")


def test_criterion_6_structure(report):
    failures = []
    for n in range(1, 25):
        for k in (1, 2, 3):
            if not conjugation_relation(build_T(n, k, BITS)).passed:
                failures.append(("conj", n, k))
        w = char_sum_matrix_rank(n, BITS)
        if not (w.certified and w.rank == euler_phi(n)):
            failures.append(("c-matrix", n))
    for n in range(1, 101):
        if rank_one_plus_minus_S(n, 1) + rank_one_plus_minus_S(n, -1) != n:
            failures.append(("S", n))
    report(6, not failures, f"conjugation, rank(1+S)+rank(1-S) = n, c-matrix rank; failures {failures}")


def test_criterion_7_bookkeeping(report):
    failures = []
    for n in range(1, 101):
        for k in range(1, 11):
            try:
                consistency_check(n, k)
            except AssertionError as exc:
                failures.append(str(exc))
    report(7, not failures, f"1000 exact rank comparisons; failures {failures[:3]}")


def test_criterion_8_pi0_units(report):
    failures = []
    for n in range(1, 51):
        expect = (0, 2) if n == 1 else (0, 1) if n == 2 else (0,)
        mono = pi0_monoid(n)
        if mono.units != expect:
            failures.append((n, mono.units))
    bound = pi0_monoid(1).search_bound
    report(8, not failures, f"unit groups for n <= 50 with search bound {bound}; failures {failures}")


def test_criterion_9_determinism(report, tmp_path):
    outs = []
    for name in ("first.json", "second.json"):
        path = tmp_path / name
        r = subprocess.run(
            [sys.executable, "-m", "torsionrank", "verify", "--n", "12", "--k", "2", "--prec", "128", "--out", str(path)],
            capture_output=True,
            env={k: v for k, v in os.environ.items() if k != "TORSIONRANK_PREC"},
            timeout=600,
        )
        assert r.returncode == 0, r.stderr
        outs.append(path.read_bytes())
    report(9, outs[0] == outs[1], f"two verify runs, {len(outs[0])} bytes each, identical={outs[0] == outs[1]}")
