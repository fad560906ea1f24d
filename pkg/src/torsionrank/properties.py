"""Property suites run by ``selfcheck`` and at the end of ``suite``."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from mpmath.libmp import mpf_cmp

from .balls import DEFAULT_PREC
from .bookkeeping import consistency_check
from .characters import (
    char_sum_matrix_rank,
    enumerate_characters,
    lift,
    minimal_period,
    orthogonality_sum,
    triangle_check,
)
from .lfunctions import dirichlet_L, e_n_chi, factorization_check, nonzero_certify, recursion_checks
from .modular import (
    RootOfUnity,
    eigen_claim_E,
    euler_phi,
    negation_perm,
    pi0_monoid,
    rank_one_plus_minus_S,
    shift_matrix,
    unit_group,
)
from .polylog import (
    bernoulli_component,
    hurwitz_zeta,
    kubert_relation,
    polylog_root,
    real_polylog,
)
from .torsion import build_T, conjugation_relation, hcob_pairing, kubert_rows_check, lens_torsion

__all__ = ["PropertyResult", "SUITES", "run_selfcheck"]


@dataclass
class PropertyResult:
    name: str
    passed: bool = True
    checked: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    def check(self, ok: bool, what) -> None:
        self.checked += 1
        if not ok:
            self.passed = False
            if len(self.failures) < 20:
                self.failures.append(what)


def _roots(max_n: int):
    seen = set()
    for n in range(1, max_n + 1):
        for a in range(n):
            t = Fraction(a, n)
            if t not in seen:
                seen.add(t)
                yield RootOfUnity(a, n)


def modular_structure(quick: bool) -> PropertyResult:
    res = PropertyResult("modular-structure")
    for n in range(1, 101):
        S = negation_perm(n)
        res.check(S.is_involution(), ("involution", n))
        res.check(rank_one_plus_minus_S(n, 1) + rank_one_plus_minus_S(n, -1) == n, ("rank sum", n))
        res.check(unit_group(n).order == euler_phi(n), ("phi", n))
    for n in range(1, 51):
        expect = (0, 2) if n == 1 else (0, 1) if n == 2 else (0,)
        res.check(pi0_monoid(n).units == expect, ("pi0", n))
    for n1 in range(1, 25):
        for p in (2, 3, 5, 7):
            claim = eigen_claim_E(shift_matrix(n1, p))
            res.check(claim.spectral_radius_bound == 1 and len(claim.spectrum()) == n1, ("E", n1, p))
    return res


def ball_numerics(quick: bool) -> PropertyResult:
    res = PropertyResult("ball-numerics")
    max_n = 12 if quick else 24
    roots = list(_roots(max_n))
    for s in range(2, 8):
        res.check(hurwitz_zeta(s, 1).overlaps(polylog_root(s, RootOfUnity(0, 1)).value.re), ("zeta", s))
        for z in roots:
            for m in range(2, 6):
                v = kubert_relation(s, z.turn, m)
                small = mpf_cmp(v.combined_radius, (0, 1, -(DEFAULT_PREC - 8), 1)) < 0
                res.check(v.passed and small, ("kubert", s, str(z.turn), m))
            a = polylog_root(s, z).value
            b = polylog_root(s, z.conjugate()).value
            res.check(b.overlaps(a.conjugate()), ("conjugation", s, str(z.turn)))
    for k in range(1, 4):
        for z in roots:
            lz = real_polylog(k, z)
            lzb = real_polylog(k, z.conjugate())
            res.check(lzb.overlaps(lz if k % 2 == 0 else -lz), ("real conjugation", k, str(z.turn)))
    for k in (1, 2):
        for z in _roots(24):
            val = polylog_root(k + 1, z).value
            # the component real_polylog drops: Re for odd k, Im for even k
            comp = val.re if k % 2 else val.im
            res.check(bernoulli_component(k, z).overlaps(comp), ("bernoulli", k, str(z.turn)))
    for z in roots[:: 7 if quick else 1]:
        lo = polylog_root(3, z, 128).value
        hi = polylog_root(3, z, 256).value
        res.check(lo.re.contains(hi.re.mid) and lo.im.contains(hi.im.mid), ("monotone", str(z.turn)))
    return res


def characters(quick: bool) -> PropertyResult:
    res = PropertyResult("characters")
    for n in range(1, 25):
        table = enumerate_characters(n)
        res.check(len(table) == euler_phi(n), ("count", n))
        labels = {c.label for c in table}
        for chi in table:
            for psi in table:
                o = orthogonality_sum(chi, psi)
                res.check(o == (euler_phi(n) if chi.label == psi.label else 0), ("orth", n, chi.label, psi.label))
                res.check((chi * psi).label in labels, ("closure", n))
            if chi.aperiodic:
                res.check(triangle_check(chi).passed, ("triangle", n, chi.label))
            for mult in (2, 3):
                if n * mult <= 48:
                    res.check(
                        minimal_period(lift(chi, n * mult)).conductor == chi.conductor,
                        ("lift period", n, chi.label, mult),
                    )
        res.check(char_sum_matrix_rank(n).certified, ("c-matrix rank", n))
    return res


def l_functions(quick: bool) -> PropertyResult:
    res = PropertyResult("l-functions")
    max_n = 12 if quick else 24
    for n in range(1, max_n + 1):
        for chi in enumerate_characters(n):
            for k in (1, 2, 3):
                ev = nonzero_certify(chi, k)
                res.check(ev.status == "certified", ("nonzero", n, chi.label, k))
                if chi.aperiodic:
                    res.check(factorization_check(chi, k).passed, ("factorization", n, chi.label, k))
                for rv in recursion_checks(chi, k):
                    res.check(rv.passed, (rv.name, n, chi.label, k))
                sign = 1 if chi.turn(-1) == 0 else -1
                conj = e_n_chi(chi.conjugate(), k).value
                res.check(conj.overlaps(ev.value.conjugate() * sign), ("conjugate", n, chi.label, k))
            if n <= 6:
                a = dirichlet_L(chi, 3, 64, "restricted-series", terms=3000).value
                b = dirichlet_L(chi, 3).value
                res.check(a.overlaps(b), ("L methods", n, chi.label))
    return res


def torsion_matrix(quick: bool) -> PropertyResult:
    res = PropertyResult("torsion-matrix")
    for n in range(1, 25):
        for k in (1, 2, 3):
            T = build_T(n, k)
            res.check(conjugation_relation(T).passed, ("conjugation", n, k))
            res.check(kubert_rows_check(T).passed, ("kubert rows", n, k))
            res.check(
                all(T.entry(a, b) is T.entry(a * b, 1) for a in range(1, n + 1) for b in range(1, n + 1)),
                ("sharing", n, k),
            )
            if n <= 8:
                for a in range(1, n + 1):
                    for b in range(1, n + 1):
                        s = hcob_pairing(n, k, a, b, Fraction(3, 2)) + lens_torsion(n, k, a * b, Fraction(3, 2))
                        res.check(s.contains(0), ("pairing sign", n, k, a, b))
    return res


def bookkeeping(quick: bool) -> PropertyResult:
    res = PropertyResult("bookkeeping")
    for n in range(1, 101):
        for k in range(1, 11):
            try:
                res.check(consistency_check(n, k), (n, k))
            except AssertionError as exc:
                res.check(False, str(exc))
    return res


SUITES: dict[str, Callable[[bool], PropertyResult]] = {
    "modular-structure": modular_structure,
    "ball-numerics": ball_numerics,
    "characters": characters,
    "l-functions": l_functions,
    "torsion-matrix": torsion_matrix,
    "bookkeeping": bookkeeping,
}


def run_selfcheck(quick: bool = False, only: list[str] | None = None) -> list[PropertyResult]:
    out = []
    for name, fn in SUITES.items():
        if only and name not in only:
            continue
        t0 = time.perf_counter()
        r = fn(quick)
        r.seconds = time.perf_counter() - t0
        out.append(r)
    return out
